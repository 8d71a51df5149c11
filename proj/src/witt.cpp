#include "nhlab/witt.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace nhlab::witt {

namespace {

// Rational multivariate polynomial, used only while solving the ghost equations.
struct QPoly {
  std::map<IntPoly::Exponents, mpq_class> t;
  int nvars = 0;

  static QPoly var(int nvars, int i) {
    QPoly r{{}, nvars};
    IntPoly::Exponents e(nvars, 0);
    e[i] = 1;
    r.t[e] = 1;
    return r;
  }
  static QPoly constant(int nvars, const mpq_class& c) {
    QPoly r{{}, nvars};
    if (c != 0) r.t[IntPoly::Exponents(nvars, 0)] = c;
    return r;
  }
};

QPoly add(const QPoly& a, const QPoly& b, const mpq_class& sb = 1) {
  QPoly r = a;
  for (const auto& [e, c] : b.t) {
    mpq_class& slot = r.t[e];
    slot += sb * c;
    if (slot == 0) r.t.erase(e);
  }
  return r;
}

QPoly mul(const QPoly& a, const QPoly& b) {
  QPoly r{{}, a.nvars};
  for (const auto& [ea, ca] : a.t) {
    for (const auto& [eb, cb] : b.t) {
      IntPoly::Exponents e(a.nvars);
      for (int i = 0; i < a.nvars; ++i) e[i] = static_cast<std::uint16_t>(ea[i] + eb[i]);
      mpq_class& slot = r.t[e];
      slot += ca * cb;
      if (slot == 0) r.t.erase(e);
    }
  }
  return r;
}

QPoly pow(const QPoly& a, unsigned long e) {
  QPoly r = QPoly::constant(a.nvars, 1);
  QPoly b = a;
  while (e > 0) {
    if (e & 1UL) r = mul(r, b);
    e >>= 1;
    if (e > 0) b = mul(b, b);
  }
  return r;
}

QPoly scale(const QPoly& a, const mpq_class& s) {
  QPoly r{{}, a.nvars};
  if (s == 0) return r;
  for (const auto& [e, c] : a.t) r.t[e] = c * s;
  return r;
}

unsigned long upow(long p, int e) {
  unsigned long r = 1;
  for (int i = 0; i < e; ++i) r *= static_cast<unsigned long>(p);
  return r;
}

// w_i of the components stored in variables offset..offset+n-1.
QPoly ghost_poly(long p, int i, int nvars, int offset) {
  QPoly w = QPoly::constant(nvars, 0);
  for (int j = 0; j <= i; ++j)
    w = add(w, scale(pow(QPoly::var(nvars, offset + j), upow(p, i - j)), mpq_class(upow(p, j))));
  return w;
}

IntPoly to_integral(const QPoly& q, const char* what, int index) {
  IntPoly r;
  r.nvars = q.nvars;
  for (const auto& [e, c] : q.t) {
    if (c.get_den() != 1)
      throw std::logic_error(std::string("Witt ") + what + " polynomial " + std::to_string(index) +
                             " has a non-integral coefficient " + c.get_str());
    r.terms[e] = c.get_num();
  }
  return r;
}

// Solves ghost(out) = target triangularly: out_i = (target_i - sum_{j<i} p^j out_j^{p^{i-j}}) / p^i.
std::vector<IntPoly> solve_ghost(long p, int n, const std::vector<QPoly>& target, const char* what) {
  std::vector<QPoly> out;
  std::vector<IntPoly> ints;
  for (int i = 0; i < n; ++i) {
    QPoly r = target[i];
    for (int j = 0; j < i; ++j) r = add(r, pow(out[j], upow(p, i - j)), -mpq_class(upow(p, j)));
    r = scale(r, mpq_class(1, upow(p, i)));
    ints.push_back(to_integral(r, what, i));
    out.push_back(std::move(r));
  }
  return ints;
}

}  // namespace

std::string IntPoly::str() const {
  std::ostringstream os;
  bool first = true;
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    const auto& [e, c] = *it;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    const mpz_class mag = abs(c);
    std::string mono;
    for (int v = 0; v < nvars; ++v) {
      if (e[v] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += "v" + std::to_string(v);
      if (e[v] > 1) mono += "^" + std::to_string(e[v]);
    }
    if (mono.empty()) os << mag;
    else {
      if (mag != 1) os << mag << "*";
      os << mono;
    }
  }
  if (first) os << "0";
  return os.str();
}

WittStructure build_structure(long p, int n) {
  if (n < 1 || n > 4) throw std::invalid_argument("Witt vectors supported for 1 <= n <= 4");
  if (p < 2) throw std::invalid_argument("Witt vectors need a prime p");
  WittStructure s;
  s.p = p;
  s.n = n;
  const int nv = 2 * n;
  std::vector<QPoly> sum_target, prod_target, neg_target;
  for (int i = 0; i < n; ++i) {
    const QPoly wx = ghost_poly(p, i, nv, 0);
    const QPoly wy = ghost_poly(p, i, nv, n);
    sum_target.push_back(add(wx, wy));
    prod_target.push_back(mul(wx, wy));
    neg_target.push_back(scale(ghost_poly(p, i, n, 0), -1));
  }
  s.sum = solve_ghost(p, n, sum_target, "sum");
  s.prod = solve_ghost(p, n, prod_target, "product");
  s.neg = solve_ghost(p, n, neg_target, "negation");
  return s;
}

const WittStructure& structure(long p, int n) {
  static std::mutex mu;
  static std::map<std::pair<long, int>, std::unique_ptr<WittStructure>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({p, n});
  if (it != cache.end()) return *it->second;
  auto s = std::make_unique<WittStructure>(build_structure(p, n));
  const WittStructure& ref = *s;
  cache.emplace(std::make_pair(p, n), std::move(s));
  return ref;
}

std::vector<mpz_class> ghost(long p, std::span<const mpz_class> x) {
  std::vector<mpz_class> w;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mpz_class acc = 0;
    for (std::size_t j = 0; j <= i; ++j) {
      mpz_class term, pj;
      mpz_pow_ui(term.get_mpz_t(), x[j].get_mpz_t(), upow(p, static_cast<int>(i - j)));
      mpz_ui_pow_ui(pj.get_mpz_t(), static_cast<unsigned long>(p), j);
      acc += pj * term;
    }
    w.push_back(acc);
  }
  return w;
}

WittVector<ff::FFElem> witt_frobenius(const WittVector<ff::FFElem>& a) {
  std::vector<ff::FFElem> c;
  for (const auto& x : a.c) c.push_back(x.frobenius());
  return WittVector<ff::FFElem>(*a.s, std::move(c));
}

WittVector<ff::FFElem> witt_trace(const WittVector<ff::FFElem>& a) {
  const ff::FieldParams& f = a.c[0].field();
  WittVector<ff::FFElem> acc = a;
  WittVector<ff::FFElem> conj = a;
  for (int i = 1; i < f.k; ++i) {
    conj = witt_frobenius(conj);
    acc = witt_add(acc, conj);
  }
  const ff::FieldParams& fp = ff::field(f.p, 1);
  std::vector<ff::FFElem> down;
  for (const auto& x : acc.c) {
    if (!x.is_prime_field()) throw std::logic_error("witt_trace: component outside the prime field");
    down.emplace_back(fp, static_cast<long>(x.coeff(0)));
  }
  return WittVector<ff::FFElem>(*a.s, std::move(down));
}

std::uint64_t teichmuller(long a, long p, int n) {
  const unsigned long pn = upow(p, n);
  mpz_class r = ((a % p) + p) % p;
  mpz_class mod = pn;
  mpz_powm_ui(r.get_mpz_t(), r.get_mpz_t(), upow(p, n - 1), mod.get_mpz_t());
  return r.get_ui();
}

std::uint64_t to_residue(const WittVector<ff::FFElem>& a) {
  const long p = a.s->p;
  const int n = a.s->n;
  const std::uint64_t pn = upow(p, n);
  std::uint64_t acc = 0;
  std::uint64_t pi = 1;
  for (int i = 0; i < n; ++i) {
    if (!a.c[i].is_prime_field()) throw std::invalid_argument("to_residue: component outside the prime field");
    acc = (acc + pi * teichmuller(static_cast<long>(a.c[i].coeff(0)), p, n)) % pn;
    pi *= static_cast<std::uint64_t>(p);
  }
  return acc;
}

}  // namespace nhlab::witt
