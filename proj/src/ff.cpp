#include "nhlab/ff.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace nhlab::ff {

namespace {

using Poly = std::vector<long>;  // coefficients mod p, low degree first

long mod(long a, long p) { return ((a % p) + p) % p; }

long inv_mod(long a, long p) {
  long t = 0, nt = 1, r = p, nr = mod(a, p);
  while (nr != 0) {
    const long q = r / nr;
    std::tie(t, nt) = std::make_pair(nt, t - q * nt);
    std::tie(r, nr) = std::make_pair(nr, r - q * nr);
  }
  if (r != 1) throw std::domain_error("inv_mod: not invertible");
  return mod(t, p);
}

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mod(Poly a, const Poly& m, long p) {
  trim(a);
  const long lead_inv = inv_mod(m.back(), p);
  const std::size_t dm = m.size() - 1;
  while (a.size() > dm) {
    const long c = a.back() * lead_inv % p;
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) a[shift + i] = mod(a[shift + i] - c * m[i], p);
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, long p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  return poly_mod(std::move(r), m, p);
}

Poly poly_powmod(Poly base, std::uint64_t e, const Poly& m, long p) {
  Poly r{1};
  base = poly_mod(std::move(base), m, p);
  while (e > 0) {
    if (e & 1U) r = poly_mulmod(r, base, m, p);
    e >>= 1;
    if (e > 0) base = poly_mulmod(base, base, m, p);
  }
  return r;
}

Poly poly_gcd(Poly a, Poly b, long p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

std::uint64_t ipow(long p, int k) {
  std::uint64_t r = 1;
  for (int i = 0; i < k; ++i) r *= static_cast<std::uint64_t>(p);
  return r;
}

std::vector<int> prime_divisors(int k) {
  std::vector<int> out;
  for (int d = 2; d <= k; ++d) {
    if (k % d == 0) {
      out.push_back(d);
      while (k % d == 0) k /= d;
    }
  }
  return out;
}

}  // namespace

bool is_irreducible(long p, const std::vector<std::uint32_t>& monic) {
  const int k = static_cast<int>(monic.size()) - 1;
  if (k < 1) return false;
  if (k == 1) return true;
  const Poly m(monic.begin(), monic.end());
  const Poly x{0, 1};
  // Rabin: x^{p^k} = x mod m, and gcd(x^{p^{k/r}} - x, m) = 1 for primes r | k.
  Poly xp = x;
  for (int i = 0; i < k; ++i) xp = poly_powmod(xp, static_cast<std::uint64_t>(p), m, p);
  if (poly_mod(xp, m, p) != poly_mod(x, m, p)) return false;
  for (int r : prime_divisors(k)) {
    Poly y = x;
    for (int i = 0; i < k / r; ++i) y = poly_powmod(y, static_cast<std::uint64_t>(p), m, p);
    y.resize(std::max<std::size_t>(y.size(), 2), 0);
    y[1] = mod(y[1] - 1, p);
    const Poly g = poly_gcd(m, y, p);
    if (g.size() != 1) return false;
  }
  return true;
}

std::vector<std::uint32_t> smallest_irreducible(long p, int k) {
  const std::uint64_t n = ipow(p, k);
  for (std::uint64_t idx = 0; idx < n; ++idx) {
    std::vector<std::uint32_t> m(k + 1);
    std::uint64_t t = idx;
    for (int i = 0; i < k; ++i) {
      m[i] = static_cast<std::uint32_t>(t % static_cast<std::uint64_t>(p));
      t /= static_cast<std::uint64_t>(p);
    }
    m[k] = 1;
    if (is_irreducible(p, m)) return m;
  }
  throw std::logic_error("no irreducible polynomial found");
}

const FieldParams& field(long p, int k) {
  static std::mutex mu;
  static std::map<std::pair<long, int>, std::unique_ptr<FieldParams>> registry;
  std::lock_guard<std::mutex> lock(mu);
  auto it = registry.find({p, k});
  if (it != registry.end()) return *it->second;
  if (p < 2 || p > 65521) throw std::invalid_argument("field: unsupported characteristic");
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) throw std::invalid_argument("field: p must be prime");
  if (k < 1 || k > kMaxDegree) throw std::invalid_argument("field: unsupported degree");
  auto fp = std::make_unique<FieldParams>();
  fp->p = p;
  fp->k = k;
  fp->size = ipow(p, k);
  fp->modulus = smallest_irreducible(p, k);
  fp->trace_of_basis.assign(k, 0);
  FieldParams& ref = *fp;
  // Trace functional on the power basis, from the Frobenius-sum definition.
  for (int i = 0; i < k; ++i) {
    FFElem xi = FFElem::generator(ref).pow(static_cast<std::uint64_t>(i));
    const FFElem t = frobenius_trace_sum(xi);
    if (!t.is_prime_field()) throw std::logic_error("trace left the prime field");
    ref.trace_of_basis[i] = t.coeff(0);
  }
  registry.emplace(std::make_pair(p, k), std::move(fp));
  return ref;
}

FFElem::FFElem(const FieldParams& f, long constant) : f_(&f) {
  c_[0] = static_cast<std::uint32_t>(mod(constant, f.p));
}

FFElem FFElem::generator(const FieldParams& f) {
  FFElem g(f);
  if (f.k == 1) {
    g.c_[0] = static_cast<std::uint32_t>(mod(-static_cast<long>(f.modulus[0]), f.p));
  } else {
    g.c_[1] = 1;
  }
  return g;
}

FFElem FFElem::from_index(const FieldParams& f, std::uint64_t index) {
  FFElem e(f);
  const auto p = static_cast<std::uint64_t>(f.p);
  for (int i = 0; i < f.k; ++i) {
    e.c_[i] = static_cast<std::uint32_t>(index % p);
    index /= p;
  }
  return e;
}

FFElem FFElem::from_coeffs(const FieldParams& f, const std::vector<long>& coeffs) {
  if (static_cast<int>(coeffs.size()) > f.k) throw std::invalid_argument("from_coeffs: too many coefficients");
  FFElem e(f);
  for (std::size_t i = 0; i < coeffs.size(); ++i) e.c_[i] = static_cast<std::uint32_t>(mod(coeffs[i], f.p));
  return e;
}

std::uint64_t FFElem::index() const {
  std::uint64_t r = 0;
  for (int i = f_->k - 1; i >= 0; --i) r = r * static_cast<std::uint64_t>(f_->p) + c_[i];
  return r;
}

bool FFElem::is_zero() const {
  for (int i = 0; i < f_->k; ++i)
    if (c_[i] != 0) return false;
  return true;
}

bool FFElem::is_one() const { return c_[0] == 1 && is_prime_field(); }

bool FFElem::is_prime_field() const {
  for (int i = 1; i < f_->k; ++i)
    if (c_[i] != 0) return false;
  return true;
}

FFElem FFElem::operator-() const {
  FFElem r(*this);
  const auto p = static_cast<std::uint32_t>(f_->p);
  for (int i = 0; i < f_->k; ++i) r.c_[i] = r.c_[i] == 0 ? 0 : p - r.c_[i];
  return r;
}

FFElem& FFElem::operator+=(const FFElem& o) {
  const auto p = static_cast<std::uint32_t>(f_->p);
  for (int i = 0; i < f_->k; ++i) {
    std::uint32_t s = c_[i] + o.c_[i];
    c_[i] = s >= p ? s - p : s;
  }
  return *this;
}

FFElem& FFElem::operator-=(const FFElem& o) {
  const auto p = static_cast<std::uint32_t>(f_->p);
  for (int i = 0; i < f_->k; ++i) c_[i] = c_[i] >= o.c_[i] ? c_[i] - o.c_[i] : c_[i] + p - o.c_[i];
  return *this;
}

FFElem& FFElem::operator*=(const FFElem& o) {
  const int k = f_->k;
  const auto p = static_cast<std::uint64_t>(f_->p);
  std::array<std::uint64_t, 2 * kMaxDegree> t{};
  for (int i = 0; i < k; ++i) {
    if (c_[i] == 0) continue;
    for (int j = 0; j < k; ++j) t[i + j] += static_cast<std::uint64_t>(c_[i]) * o.c_[j];
  }
  for (int i = 0; i < 2 * k - 1; ++i) t[i] %= p;
  // x^k = -(m_0 + ... + m_{k-1} x^{k-1})
  for (int i = 2 * k - 2; i >= k; --i) {
    const std::uint64_t c = t[i] % p;
    if (c == 0) continue;
    t[i] = 0;
    for (int j = 0; j < k; ++j) {
      const std::uint64_t mj = f_->modulus[j];
      if (mj == 0) continue;
      t[i - k + j] = (t[i - k + j] + c * (p - mj)) % p;
    }
  }
  for (int i = 0; i < k; ++i) c_[i] = static_cast<std::uint32_t>(t[i] % p);
  return *this;
}

FFElem FFElem::pow(std::uint64_t e) const {
  FFElem r = one(*f_);
  FFElem b = *this;
  while (e > 0) {
    if (e & 1U) r *= b;
    e >>= 1;
    if (e > 0) b *= b;
  }
  return r;
}

FFElem FFElem::inverse() const {
  if (is_zero()) throw std::domain_error("FFElem: inverse of zero");
  return pow(f_->size - 2);
}

FFElem FFElem::scaled(long s) const { return *this * FFElem(*f_, s); }

std::string FFElem::str() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < f_->k; ++i) os << (i ? "," : "") << c_[i];
  os << "]";
  return os.str();
}

FFElem frobenius_trace_sum(const FFElem& x) {
  FFElem s = x;
  FFElem y = x;
  for (int i = 1; i < x.field().k; ++i) {
    y = y.frobenius();
    s += y;
  }
  return s;
}

long absolute_trace(const FFElem& x) {
  const FieldParams& f = x.field();
  std::uint64_t s = 0;
  for (int i = 0; i < f.k; ++i) s += static_cast<std::uint64_t>(x.coeff(i)) * f.trace_of_basis[i];
  return static_cast<long>(s % static_cast<std::uint64_t>(f.p));
}

std::vector<IndexRange> enumeration_chunks(const FieldParams& f, unsigned parts) {
  if (parts == 0) parts = 1;
  const std::uint64_t n = f.size;
  const std::uint64_t np = std::min<std::uint64_t>(parts, n);
  std::vector<IndexRange> out;
  out.reserve(np);
  for (std::uint64_t i = 0; i < np; ++i) out.push_back({n * i / np, n * (i + 1) / np});
  return out;
}

std::vector<FFElem> enumerate(const FieldParams& f) {
  std::vector<FFElem> out;
  out.reserve(f.size);
  for_each_element(f, {0, f.size}, [&](const FFElem& x) { out.push_back(x); });
  return out;
}

Embedding::Embedding(const FieldParams& source, const FieldParams& target) : src_(&source), dst_(&target) {
  if (source.p != target.p || target.k % source.k != 0)
    throw std::invalid_argument("embedding: source degree must divide target degree");
  const int a = source.k;
  const int k = target.k;
  const long p = target.p;
  // The subfield F_{p^a} is the kernel of Frob^a - id, an F_p-linear map.
  std::vector<std::vector<long>> mat(k, std::vector<long>(k));
  for (int j = 0; j < k; ++j) {
    FFElem e = FFElem::generator(target).pow(static_cast<std::uint64_t>(j));
    FFElem img = e.pow(ipow(p, a));
    img -= e;
    for (int i = 0; i < k; ++i) mat[i][j] = img.coeff(i);
  }
  // Row reduce to obtain a kernel basis.
  std::vector<int> pivot_col;
  int row = 0;
  for (int col = 0; col < k && row < k; ++col) {
    int sel = -1;
    for (int r = row; r < k; ++r)
      if (mat[r][col] != 0) { sel = r; break; }
    if (sel < 0) continue;
    std::swap(mat[sel], mat[row]);
    const long inv = inv_mod(mat[row][col], p);
    for (auto& v : mat[row]) v = v * inv % p;
    for (int r = 0; r < k; ++r) {
      if (r == row || mat[r][col] == 0) continue;
      const long f = mat[r][col];
      for (int c = 0; c < k; ++c) mat[r][c] = mod(mat[r][c] - f * mat[row][c], p);
    }
    pivot_col.push_back(col);
    ++row;
  }
  std::vector<FFElem> basis;
  for (int free = 0; free < k; ++free) {
    if (std::find(pivot_col.begin(), pivot_col.end(), free) != pivot_col.end()) continue;
    std::vector<long> v(k, 0);
    v[free] = 1;
    for (std::size_t r = 0; r < pivot_col.size(); ++r) v[pivot_col[r]] = mod(-mat[r][free], p);
    basis.push_back(FFElem::from_coeffs(target, v));
  }
  if (static_cast<int>(basis.size()) != a) throw std::logic_error("embedding: subfield has wrong dimension");
  // Search the p^a subfield elements for roots of the source modulus.
  std::vector<FFElem> roots;
  const std::uint64_t count = ipow(p, a);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    FFElem y(target);
    std::uint64_t t = idx;
    for (int i = 0; i < a; ++i) {
      y += basis[i].scaled(static_cast<long>(t % static_cast<std::uint64_t>(p)));
      t /= static_cast<std::uint64_t>(p);
    }
    FFElem val(target);
    for (int i = a; i >= 0; --i) val = val * y + FFElem(target, static_cast<long>(source.modulus[i]));
    if (val.is_zero()) roots.push_back(y);
  }
  if (roots.empty()) throw std::logic_error("embedding: no root found");
  const FFElem root = *std::min_element(roots.begin(), roots.end());
  powers_.reserve(a);
  FFElem cur = FFElem::one(target);
  for (int i = 0; i < a; ++i) {
    powers_.push_back(cur);
    cur *= root;
  }
  if (a == 1) powers_.push_back(root);
}

FFElem Embedding::operator()(const FFElem& x) const {
  if (&x.field() != src_) throw std::invalid_argument("embedding: element from another field");
  FFElem r(*dst_);
  for (int i = 0; i < src_->k; ++i)
    if (x.coeff(i) != 0) r += powers_[i].scaled(static_cast<long>(x.coeff(i)));
  return r;
}

const Embedding& embedding(const FieldParams& source, const FieldParams& target) {
  static std::mutex mu;
  static std::map<std::pair<const FieldParams*, const FieldParams*>, std::unique_ptr<Embedding>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(&source, &target);
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;
  auto e = std::make_unique<Embedding>(source, target);
  const Embedding& ref = *e;
  cache.emplace(key, std::move(e));
  return ref;
}

FFElem embed(const FFElem& x, const FieldParams& target) { return embedding(x.field(), target)(x); }

}  // namespace nhlab::ff
