#include "nhlab/valmat.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>

#include "nhlab/ff.hpp"

namespace nhlab {

namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t addmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  const std::uint64_t s = a + b;  // m < 2^63, no overflow
  return s >= m ? s - m : s;
}

std::uint64_t submod(std::uint64_t a, std::uint64_t b, std::uint64_t m) { return a >= b ? a - b : a + (m - b); }

std::uint64_t to_residue(const mpz_class& v, std::uint64_t m) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), mpz_class(std::to_string(m)).get_mpz_t());
  return std::stoull(r.get_str());
}

std::uint64_t invmod(std::uint64_t u, std::uint64_t m) {
  mpz_class r;
  if (!mpz_invert(r.get_mpz_t(), mpz_class(std::to_string(u)).get_mpz_t(), mpz_class(std::to_string(m)).get_mpz_t()))
    throw std::invalid_argument("invmod: not a unit");
  return std::stoull(r.get_str());
}

int vp(std::uint64_t x, long p) {
  int k = 0;
  while (x % static_cast<std::uint64_t>(p) == 0) {
    x /= static_cast<std::uint64_t>(p);
    ++k;
  }
  return k;
}

std::uint64_t upow(long p, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= static_cast<std::uint64_t>(p);
  return r;
}

void check_modulus(long p, int N) {
  if (p < 2 || N < 1) throw std::invalid_argument("residue model: need p >= 2 and N >= 1");
  std::uint64_t r = 1;
  for (int i = 0; i < N; ++i) {
    if (r > (std::uint64_t{1} << 62) / static_cast<std::uint64_t>(p))
      throw std::invalid_argument("residue model: p^N must stay below 2^62");
    r *= static_cast<std::uint64_t>(p);
  }
}

}  // namespace

Valuation valuation(const PadicInteger& x) {
  if (x.v == 0) return Valuation::infinite();
  return Valuation(padic_valuation(x.v, x.p));
}

const ZpContext& zp_context(long p, int N) {
  static std::mutex mu;
  static std::map<std::pair<long, int>, std::unique_ptr<ZpContext>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{p, N}];
  if (!slot) {
    check_modulus(p, N);
    slot = std::make_unique<ZpContext>(ZpContext{p, N, upow(p, N)});
  }
  return *slot;
}

ZpResidue ZpResidue::operator-() const { return {ctx, v == 0 ? 0 : ctx->modulus - v}; }
ZpResidue operator+(const ZpResidue& a, const ZpResidue& b) { return {a.ctx, addmod(a.v, b.v, a.ctx->modulus)}; }
ZpResidue operator-(const ZpResidue& a, const ZpResidue& b) { return {a.ctx, submod(a.v, b.v, a.ctx->modulus)}; }
ZpResidue operator*(const ZpResidue& a, const ZpResidue& b) { return {a.ctx, mulmod(a.v, b.v, a.ctx->modulus)}; }

Valuation valuation(const ZpResidue& x) {
  if (x.v == 0) return Valuation::at_least(x.ctx->N);
  return Valuation(vp(x.v, x.ctx->p));
}

ZpResidue scalar_like(const ZpResidue& like, const mpz_class& v) { return {like.ctx, to_residue(v, like.ctx->modulus)}; }

ZpResidue local_quotient(const ZpResidue& a, const ZpResidue& b) {
  if (b.v == 0) throw std::invalid_argument("local_quotient: divisor is zero to working precision");
  const int k = vp(b.v, b.ctx->p);
  const std::uint64_t pk = upow(b.ctx->p, k);
  if (a.v % pk != 0) throw std::invalid_argument("local_quotient: valuation of dividend is too small");
  const std::uint64_t m = b.ctx->modulus;
  return {b.ctx, mulmod(a.v / pk, invmod(b.v / pk, m), m)};
}

const Zq2Context& zq2_context(long p, int N) {
  static std::mutex mu;
  static std::map<std::pair<long, int>, std::unique_ptr<Zq2Context>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{p, N}];
  if (!slot) {
    check_modulus(p, N);
    const auto f = ff::smallest_irreducible(p, 2);
    slot = std::make_unique<Zq2Context>(Zq2Context{p, N, upow(p, N), f[0], f[1]});
  }
  return *slot;
}

Zq2 Zq2::operator-() const {
  const std::uint64_t m = ctx->modulus;
  return {ctx, submod(0, a, m), submod(0, b, m)};
}
Zq2 operator+(const Zq2& x, const Zq2& y) {
  const std::uint64_t m = x.ctx->modulus;
  return {x.ctx, addmod(x.a, y.a, m), addmod(x.b, y.b, m)};
}
Zq2 operator-(const Zq2& x, const Zq2& y) {
  const std::uint64_t m = x.ctx->modulus;
  return {x.ctx, submod(x.a, y.a, m), submod(x.b, y.b, m)};
}
Zq2 operator*(const Zq2& x, const Zq2& y) {
  // w^2 = -c1 w - c0
  const std::uint64_t m = x.ctx->modulus;
  const std::uint64_t bd = mulmod(x.b, y.b, m);
  const std::uint64_t re = submod(mulmod(x.a, y.a, m), mulmod(x.ctx->c0, bd, m), m);
  const std::uint64_t im = submod(addmod(mulmod(x.a, y.b, m), mulmod(x.b, y.a, m), m), mulmod(x.ctx->c1, bd, m), m);
  return {x.ctx, re, im};
}

Valuation valuation(const Zq2& x) {
  if (x.a == 0 && x.b == 0) return Valuation::at_least(x.ctx->N);
  int v = x.ctx->N;
  if (x.a) v = std::min(v, vp(x.a, x.ctx->p));
  if (x.b) v = std::min(v, vp(x.b, x.ctx->p));
  return Valuation(v);
}

Zq2 scalar_like(const Zq2& like, const mpz_class& v) { return {like.ctx, to_residue(v, like.ctx->modulus), 0}; }

Zq2 frobenius(const Zq2& x) {
  const std::uint64_t m = x.ctx->modulus;
  return {x.ctx, submod(x.a, mulmod(x.b, x.ctx->c1, m), m), submod(0, x.b, m)};
}

Zq2 local_quotient(const Zq2& a, const Zq2& b) {
  const Valuation vb = valuation(b);
  if (!vb.is_finite()) throw std::invalid_argument("local_quotient: divisor is zero to working precision");
  const int k = static_cast<int>(vb.value().num().get_si());
  const std::uint64_t pk = upow(b.ctx->p, k);
  if (a.a % pk != 0 || a.b % pk != 0) throw std::invalid_argument("local_quotient: valuation of dividend is too small");
  const Zq2 as{a.ctx, a.a / pk, a.b / pk};
  const Zq2 u{b.ctx, b.a / pk, b.b / pk};
  // u^{-1} = F(u) / (u F(u)), the norm being a unit of Z_p.
  const Zq2 fu = frobenius(u);
  const Zq2 norm = u * fu;
  const std::uint64_t ninv = invmod(norm.a, b.ctx->modulus);
  return as * fu * Zq2{b.ctx, ninv, 0};
}

SlopePolygon polygon_of_valuations(const std::vector<Valuation>& vals, const PolygonUnit& unit,
                                   const std::optional<Rational>& cutoff) {
  if (vals.empty() || !vals[0].is_finite() || !vals[0].value().is_zero())
    throw std::invalid_argument("polygon_of_valuations: the point at x = 0 must have valuation 0");
  std::vector<Vertex> low, known;
  bool bounded = false;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (vals[i].is_infinite()) continue;
    low.push_back({static_cast<long>(i), vals[i].value()});
    if (vals[i].is_bound()) bounded = true;
    else known.push_back({static_cast<long>(i), vals[i].value()});
  }
  SlopePolygon a = SlopePolygon::from_slopes(lower_hull_slopes(low), unit);
  SlopePolygon b = SlopePolygon::from_slopes(lower_hull_slopes(known), unit);
  if (cutoff) {
    a = truncate_below(a, *cutoff);
    b = truncate_below(b, *cutoff);
  }
  if (bounded && !(a == b))
    throw PrecisionExhausted("polygon undecided at working precision: " + a.str() + " vs " + b.str() +
                             (cutoff ? " below " + cutoff->str() : std::string()));
  return b;
}

ValuedMatrix<ZpResidue> associated_block_matrix(const ValuedMatrix<Zq2>& m) {
  const Zq2Context& cq = *m.zero().ctx;
  const ZpContext& cp = zp_context(cq.p, cq.N);
  const std::size_t n = m.size();
  ValuedMatrix<ZpResidue> B(2 * n, ZpResidue{&cp, 0});
  const Zq2 one{&cq, 1, 0};
  const Zq2 w{&cq, 0, 1};
  const Zq2 basis[2] = {frobenius(one), frobenius(w)};
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t s = 0; s < 2; ++s)
      for (std::size_t l = 0; l < n; ++l) {
        const Zq2 img = basis[s] * m(j, l);
        B(2 * l, 2 * j + s) = ZpResidue{&cp, img.a};
        B(2 * l + 1, 2 * j + s) = ZpResidue{&cp, img.b};
      }
  return B;
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  bool chance(double prob) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < prob; }
  // P(k) = (1 - q) q^k
  int geometric(double q = 0.5) {
    int k = 0;
    while (chance(q)) ++k;
    return k;
  }
  std::uint64_t below(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng_); }
  long between(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  template <class V>
  void shuffle(V& v) {
    std::shuffle(v.begin(), v.end(), rng_);
  }

 private:
  std::mt19937_64 rng_;
};

std::uint64_t random_unit(Gen& g, long p, std::uint64_t m) {
  for (;;) {
    const std::uint64_t u = 1 + g.below(m - 1);
    if (u % static_cast<std::uint64_t>(p) != 0) return u;
  }
}

// p^{min_val + geometric} * unit, or zero.
ZpResidue random_zp(Gen& g, const ZpContext& c, int min_val, double zero_prob) {
  if (g.chance(zero_prob)) return {&c, 0};
  const int e = min_val + g.geometric();
  if (e >= c.N) return {&c, 0};
  return {&c, mulmod(upow(c.p, e), random_unit(g, c.p, c.modulus), c.modulus)};
}

PadicInteger random_int(Gen& g, long p, int min_val, double zero_prob) {
  if (g.chance(zero_prob)) return {0, p};
  const int e = min_val + g.geometric();
  long u = 0;
  while (u == 0 || u % p == 0) u = g.between(-9, 9);
  mpz_class v;
  mpz_ui_pow_ui(v.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
  return {v * u, p};
}

Zq2 random_zq2(Gen& g, const Zq2Context& c, int min_val, double zero_prob) {
  if (g.chance(zero_prob)) return {&c, 0, 0};
  const int e = min_val + g.geometric();
  if (e >= c.N) return {&c, 0, 0};
  // a unit of Z_q: (a, b) not both divisible by p
  std::uint64_t a = 0, b = 0;
  do {
    a = g.below(c.modulus);
    b = g.below(c.modulus);
  } while (a % static_cast<std::uint64_t>(c.p) == 0 && b % static_cast<std::uint64_t>(c.p) == 0);
  const std::uint64_t pe = upow(c.p, e);
  return {&c, mulmod(pe, a, c.modulus), mulmod(pe, b, c.modulus)};
}

// Three shapes: fully random; upper triangular (column minimum on the
// diagonal); upper triangular plus a lower part strictly above the diagonal
// valuation of its column. Rows and columns are then permuted together.
template <class T, class Entry>
ValuedMatrix<T> random_matrix(Gen& g, std::size_t n, const T& zero, Entry&& entry) {
  ValuedMatrix<T> m(n, zero);
  const int shape = static_cast<int>(g.below(3));
  if (shape == 0) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = entry(0, 0.15);
  } else {
    std::vector<int> diag(n);
    for (auto& d : diag) d = g.geometric();
    for (std::size_t j = 0; j < n; ++j) {
      m(j, j) = entry(diag[j], 0.0);
      if (valuation(m(j, j)).is_bound()) m(j, j) = scalar_like(zero, 1);
      for (std::size_t i = 0; i < j; ++i) m(i, j) = entry(diag[j], 0.3);
      if (shape == 2)
        for (std::size_t i = j + 1; i < n; ++i) m(i, j) = entry(diag[j] + 1, 0.5);
    }
  }
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  g.shuffle(perm);
  return m.principal(perm);
}

// Candidate cutoffs around the column slopes, including ties.
Rational random_cutoff(Gen& g, const std::vector<Valuation>& cols) {
  std::vector<Rational> cand{Rational(1, 2)};
  for (const auto& v : cols) {
    if (!v.is_finite()) continue;
    for (const Rational& r : {v.value(), v.value() + Rational(1, 2), v.value() + Rational(1)})
      if (r.sign() > 0) cand.push_back(r);
  }
  return cand[g.below(cand.size())];
}

long ceil_of(const Rational& r) {
  mpz_class f = r.floor();
  if (!r.is_integer()) f += 1;
  return f.get_si();
}

template <class T>
ValuedMatrix<T> perturb(const ValuedMatrix<T>& m, const Rational& r,
                        const std::function<T(int, double)>& entry) {
  ValuedMatrix<T> out = m;
  const auto cols = column_valuations(m);
  for (std::size_t j = 0; j < m.size(); ++j) {
    int floor_val = static_cast<int>(ceil_of(r));
    if (cols[j].is_finite() && cols[j].value() < r) floor_val = static_cast<int>(ceil_of(cols[j].value())) + 1;
    for (std::size_t i = 0; i < m.size(); ++i) out(i, j) = out(i, j) + entry(floor_val, 0.3);
  }
  return out;
}

template <class T>
Valuation sum_of_small_columns(const ValuedMatrix<T>& m, const Rational& r) {
  Rational s;
  for (const auto& v : column_valuations(m))
    if (v.is_finite() && v.value() < r) s += v.value();
  return Valuation(s);
}

// touching via the slice criterion: v(det M^{<r}) equals the height of cHP^{<r}.
template <class T>
bool touching_by_slice(const ValuedMatrix<T>& m, const Rational& r) {
  const auto sl = slice_below(m, r);
  if (sl.indices.empty()) return true;
  const auto c = fredholm_coefficients_by_minors(sl.matrix);
  return valuation(c.back()) == sum_of_small_columns(m, r);
}

void record_failure(SuiteReport& rep, std::uint64_t seed, const std::string& what) {
  if (rep.failures.size() < 10) rep.failures.push_back("trial seed " + std::to_string(seed) + ": " + what);
}

template <class T>
std::string dump(const ValuedMatrix<T>& m) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < m.size(); ++i) {
    os << (i ? "; " : "");
    for (std::size_t j = 0; j < m.size(); ++j) os << (j ? " " : "") << valuation(m(i, j)).str();
  }
  os << "] (entry valuations)";
  return os.str();
}

}  // namespace

SuiteReport perturbation_suite(long trials, std::uint64_t seed, std::size_t n, long p, int N) {
  SuiteReport rep;
  rep.name = "perturbation";
  const ZpContext& c = zp_context(p, N);
  const ZpResidue zero{&c, 0};
  for (long t = 0; t < trials; ++t) {
    ++rep.trials;
    std::uint64_t ts = splitmix(seed + static_cast<std::uint64_t>(t));
    std::string why;
    bool decided = false;
    std::uint64_t drawn = ts;
    for (int attempt = 0; attempt < 20 && !decided; ++attempt, ts = splitmix(ts)) {
      drawn = ts;
      Gen g(ts);
      try {
        const std::function<ZpResidue(int, double)> entry = [&](int v, double z) { return random_zp(g, c, v, z); };
        const auto m = random_matrix(g, n, zero, entry);
        const Rational r = random_cutoff(g, column_valuations(m));
        const auto mp = perturb(m, r, entry);
        bool t0 = false, t1 = false, same_end = false, slice = false;
        try {
          t0 = touching(m, r);
          slice = touching_by_slice(m, r);
          t1 = touching(mp, r);
          same_end = shares_terminal_point(newton_polygon(m, r), newton_polygon(mp, r));
          decided = true;
        } catch (const PrecisionExhausted&) {
          ++rep.redrawn;
          continue;
        }
        if (!is_r_perturbation(m, mp, r)) why = "constructed matrix is not an r-perturbation";
        else if (!(fredholm_coefficients(m) == fredholm_coefficients_by_minors(m)) ||
                 !(fredholm_coefficients(mp) == fredholm_coefficients_by_minors(mp)))
          why = "Berkowitz and minor-sum characteristic polynomials differ";
        else if (t0 != slice) why = "touching disagrees with the slice determinant criterion";
        else if (t0) {
          ++rep.nontrivial;
          if (!t1) why = "touching lost under perturbation";
          else if (!same_end) why = "NP^{<r} terminal point moved under perturbation";
        }
        if (!why.empty()) why += " at r = " + r.str() + " for " + dump(m);
      } catch (const std::exception& e) {
        why = e.what();
        decided = true;
      }
    }
    if (!decided) why = "no decidable draw in 20 attempts";
    if (why.empty()) ++rep.passed;
    else record_failure(rep, drawn, why);
  }
  return rep;
}

SuiteReport hodge_suite(long count, std::uint64_t seed, std::size_t max_n, long p) {
  SuiteReport rep;
  rep.name = "hodge";
  const PadicInteger zero{0, p};
  const ZpContext& c = zp_context(p, 20);
  for (long t = 0; t < count; ++t) {
    const std::uint64_t ts = splitmix(seed ^ (0xABCDEFULL + static_cast<std::uint64_t>(t)));
    Gen g(ts);
    ++rep.trials;
    try {
      const std::size_t n = 1 + static_cast<std::size_t>(t) % max_n;
      const std::function<PadicInteger(int, double)> entry = [&](int v, double z) { return random_int(g, p, v, z); };
      const auto m = random_matrix(g, n, zero, entry);
      const auto ext = exterior_valuations_by_minors(m);
      const SlopePolygon hp = polygon_of_valuations(ext, polygon_unit(zero));
      const SlopePolygon chp = column_hodge(m).polygon;
      std::string why;
      // HP slopes dominate cHP slopes, and agreement at a point forces agreement before it.
      for (long i = 0; i < hp.length() && why.empty(); ++i)
        if (hp.slopes()[i] < chp.slopes()[i]) why = "an HP slope lies below the matching cHP slope";
      for (long x = 1; x <= hp.length() && why.empty(); ++x)
        if (hp.value_at(x) == chp.value_at(x))
          for (long y = 0; y < x; ++y)
            if (hp.value_at(y) != chp.value_at(y)) why = "HP and cHP meet without agreeing before";
      // Elimination over Z/p^20 agrees wherever it is decided.
      ValuedMatrix<ZpResidue> mr(n, ZpResidue{&c, 0});
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) mr(i, j) = scalar_like(mr.zero(), m(i, j).v);
      const auto ext_elim = exterior_valuations_by_elimination(mr);
      for (std::size_t k = 0; k <= n && why.empty(); ++k) {
        const bool small = ext[k].is_finite() && ext[k].value() < Rational(20);
        if ((ext_elim[k].is_finite() && !(ext_elim[k] == ext[k])) || (small && !(ext_elim[k] == ext[k])))
          why = "elimination disagrees with minors at k = " + std::to_string(k);
      }
      // Newton over Hodge; equal endpoints when det != 0.
      const SlopePolygon np = newton_polygon(m);
      if (why.empty() && !lies_on_or_above(np, hp)) why = "NP dips below HP";
      if (why.empty() && ext[n].is_finite() && !shares_terminal_point(np, hp)) why = "NP and HP endpoints differ";
      // Four polygons under touching.
      const Rational r = random_cutoff(g, column_valuations(m));
      const bool tch = touching(m, r);
      if (why.empty() && tch != touching_by_slice(m, r)) why = "touching disagrees with the slice criterion";
      if (why.empty() && tch) {
        ++rep.nontrivial;
        const auto sl = slice_below(m, r);
        const SlopePolygon a = hodge_polygon(sl.matrix);
        const SlopePolygon b = column_hodge(sl.matrix).polygon;
        const SlopePolygon cc = truncate_below(hp, r);
        const SlopePolygon d = truncate_below(chp, r);
        if (!(a == b && b == cc && cc == d))
          why = "four polygons differ under touching at r = " + r.str() + ": " + a.str() + " " + b.str() + " " +
                cc.str() + " " + d.str();
      }
      if (why.empty()) ++rep.passed;
      else record_failure(rep, ts, why + " for " + dump(m));
    } catch (const std::exception& e) {
      record_failure(rep, ts, e.what());
    }
  }
  return rep;
}

SuiteReport root_suite(long trials, std::uint64_t seed, std::size_t n, long p, int N) {
  SuiteReport rep;
  rep.name = "root";
  const Zq2Context& c = zq2_context(p, N);
  const Zq2 zero{&c, 0, 0};
  for (long t = 0; t < trials; ++t) {
    ++rep.trials;
    std::uint64_t ts = splitmix(seed * 31 + static_cast<std::uint64_t>(t));
    std::string why;
    bool decided = false;
    std::uint64_t drawn = ts;
    for (int attempt = 0; attempt < 20 && !decided; ++attempt, ts = splitmix(ts)) {
      drawn = ts;
      Gen g(ts);
      try {
        const std::function<Zq2(int, double)> entry = [&](int v, double z) { return random_zq2(g, c, v, z); };
        const auto m = random_matrix(g, n, zero, entry);
        const auto iter = semilinear_iterate(m, 2);
        const auto block = associated_block_matrix(m);
        const auto cq = fredholm_coefficients(iter);
        const auto cb = fredholm_coefficients(block);
        SlopePolygon np_block, np_iter;
        try {
          np_block = newton_polygon(block);
          np_iter = polygon_of_valuations(valuations_of(cq), polygon_unit(zero));
          decided = true;
        } catch (const PrecisionExhausted&) {
          ++rep.redrawn;
          continue;
        }
        for (const auto& x : cq)
          if (x.b != 0) why = "iterate has a characteristic coefficient outside Z_p";
        if (why.empty() && !(cb == fredholm_coefficients_by_minors(block)))
          why = "block characteristic polynomial differs from minor sums";
        if (why.empty()) {
          std::vector<Rational> doubled;
          for (const auto& s : np_iter.slopes()) {
            doubled.push_back(s / Rational(2));
            doubled.push_back(s / Rational(2));
          }
          if (!(SlopePolygon::from_slopes(doubled, np_block.unit()) == np_block))
            why = "block NP " + np_block.str() + " differs from the doubled iterate NP";
          else if (np_block.length() > 0 && np_block.slopes().back() > 0)
            ++rep.nontrivial;
        }
      } catch (const std::exception& e) {
        why = e.what();
        decided = true;
      }
    }
    if (!decided) why = "no decidable draw in 20 attempts";
    if (why.empty()) ++rep.passed;
    else record_failure(rep, drawn, why);
  }
  return rep;
}

}  // namespace nhlab
