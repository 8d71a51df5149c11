#include "nhlab/lfunction.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "nhlab/errors.hpp"
#include "nhlab/witt.hpp"

namespace nhlab {

unsigned default_threads() {
  if (const char* env = std::getenv("NHLAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

namespace {

std::uint64_t upow(long p, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= static_cast<std::uint64_t>(p);
  return r;
}

// Residue c(x) in Z/p^n of the character at points of one extension field.
class PointEvaluator {
 public:
  PointEvaluator(const ASWCharacter& f, const FieldParams& target) : f_(f), target_(target) {
    for (const auto& fi : f.coords()) evals_.emplace_back(fi, target);
    if (f.n() > 1) ws_ = &witt::structure(f.p(), f.n());
  }

  std::optional<std::uint64_t> at(const FFElem& x) const {
    std::vector<FFElem> vals;
    vals.reserve(evals_.size());
    for (const auto& e : evals_) {
      auto v = e(x);
      if (!v) return std::nullopt;
      vals.push_back(*v);
    }
    return residue(std::move(vals));
  }

  std::optional<std::uint64_t> at_infinity() const {
    if (f_.ramified_at(Place::at_infinity())) return std::nullopt;
    std::vector<FFElem> vals;
    for (const auto& e : evals_) {
      auto v = e.at_infinity();
      if (!v) throw MathCheckFailed("pole at infinity outside the ramified set");
      vals.push_back(*v);
    }
    return residue(std::move(vals));
  }

 private:
  std::uint64_t residue(std::vector<FFElem> vals) const {
    if (ws_ == nullptr) return static_cast<std::uint64_t>(ff::absolute_trace(vals[0]));
    const witt::WittVector<FFElem> w(*ws_, std::move(vals));
    return witt::to_residue(witt::witt_trace(w));
  }

  const ASWCharacter& f_;
  const FieldParams& target_;
  std::vector<ExtensionEvaluator> evals_;
  const witt::WittStructure* ws_ = nullptr;
};

const FieldParams& extension_field(const ASWCharacter& f, int k, const LOptions& opt) {
  if (k < 1) throw std::invalid_argument("extension degree must be positive");
  const int deg = f.fq().k * k;
  mpz_class points;
  mpz_pow_ui(points.get_mpz_t(), f.q().get_mpz_t(), static_cast<unsigned long>(k));
  if (deg > ff::kMaxDegree || points > mpz_class(std::to_string(opt.max_points)))
    throw InfeasibleError("enumerating F_{q^" + std::to_string(k) + "} needs " + points.get_str() +
                          " point evaluations, above the guard of " + std::to_string(opt.max_points));
  return ff::field(f.p(), deg);
}

template <class Fn>
void parallel_chunks(const std::vector<ff::IndexRange>& chunks, Fn&& work) {
  if (chunks.size() <= 1) {
    for (std::size_t i = 0; i < chunks.size(); ++i) work(i, chunks[i]);
    return;
  }
  std::vector<std::exception_ptr> errors(chunks.size());
  std::vector<std::thread> pool;
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    pool.emplace_back([&, i] {
      try {
        work(i, chunks[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

std::vector<std::uint64_t> residue_counts(const ASWCharacter& f, int k, const LOptions& opt) {
  const FieldParams& F = extension_field(f, k, opt);
  const PointEvaluator ev(f, F);
  const std::uint64_t classes = upow(f.p(), f.n());
  const auto chunks = ff::enumeration_chunks(F, opt.threads == 0 ? default_threads() : opt.threads);
  std::vector<std::vector<std::uint64_t>> partial(chunks.size(), std::vector<std::uint64_t>(classes, 0));
  parallel_chunks(chunks, [&](std::size_t i, ff::IndexRange range) {
    auto& counts = partial[i];
    ff::for_each_element(F, range, [&](const FFElem& x) {
      if (auto c = ev.at(x)) ++counts[*c];
    });
  });
  std::vector<std::uint64_t> counts(classes, 0);
  for (const auto& part : partial)
    for (std::uint64_t j = 0; j < classes; ++j) counts[j] += part[j];
  if (auto c = ev.at_infinity()) ++counts[*c];
  return counts;
}

CyclotomicInteger character_sum(const ASWCharacter& f, int k, const LOptions& opt) {
  const auto counts = residue_counts(f, k, opt);
  return CyclotomicInteger::from_residue_counts(CycloParams(f.p(), f.n()), counts);
}

std::vector<CyclotomicInteger> exp_of_power_sums(const CycloParams& ring,
                                                 const std::vector<CyclotomicInteger>& sums) {
  std::vector<CyclotomicInteger> c{CyclotomicInteger::from_integer(ring, 1)};
  for (std::size_t k = 1; k <= sums.size(); ++k) {
    CyclotomicInteger acc(ring);
    for (std::size_t i = 1; i <= k; ++i) acc += sums[i - 1] * c[k - i];
    auto q = acc.divide_exact(mpz_class(static_cast<unsigned long>(k)));
    if (!q) throw MathCheckFailed("L-function coefficient " + std::to_string(k) + " is not integral");
    c.push_back(std::move(*q));
  }
  return c;
}

std::string LPolynomial::str() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (i) os << " + ";
    os << "(" << coeffs[i].str() << ")";
    if (i) os << "*s" << (i > 1 ? "^" + std::to_string(i) : "");
  }
  return os.str();
}

ASWCharacter prepare(const ASWCharacter& f) {
  ASWCharacter g = reduce(f);
  require_totally_ramified(g);
  return g;
}

LPolynomial l_polynomial(const ASWCharacter& f, const LOptions& opt) {
  const ASWCharacter g = prepare(f);
  const SwanData swan = swan_conductors(g);
  LPolynomial L;
  L.ring = CycloParams(g.p(), g.n());
  L.q = g.q();
  L.degree = l_degree(swan);
  L.character = g.str();
  if (L.degree < 0) throw MathCheckFailed("negative L-function degree");
  for (long k = 1; k <= L.degree; ++k) L.sums.push_back(character_sum(g, static_cast<int>(k), opt));
  bool checked_tail = false;
  try {
    L.sums.push_back(character_sum(g, static_cast<int>(L.degree + 1), opt));
    checked_tail = true;
  } catch (const InfeasibleError& e) {
    L.warnings.push_back(std::string("degree check skipped: ") + e.what());
  }
  auto c = exp_of_power_sums(L.ring, L.sums);
  if (checked_tail && !c[L.degree + 1].is_zero())
    throw MathCheckFailed("L-function has a nonzero coefficient beyond the Hodge degree " + std::to_string(L.degree));
  c.resize(L.degree + 1);
  if (c[L.degree].is_zero()) throw MathCheckFailed("leading coefficient of L vanishes in degree " + std::to_string(L.degree));
  L.coeffs = std::move(c);
  return L;
}

std::vector<CyclotomicInteger> l_polynomial_euler(const ASWCharacter& f, long D, const LOptions& opt) {
  const ASWCharacter g = prepare(f);
  const CycloParams ring(g.p(), g.n());
  std::vector<CyclotomicInteger> zpow;
  for (long j = 0; j < ring.order; ++j) zpow.push_back(CyclotomicInteger::zeta(ring).pow(static_cast<unsigned long>(j)));
  std::vector<CyclotomicInteger> series(D + 1, CyclotomicInteger(ring));
  series[0] = CyclotomicInteger::from_integer(ring, 1);
  // series <- series / (1 - a s^e)
  auto absorb = [&](const CyclotomicInteger& a, long e) {
    for (long t = e; t <= D; ++t) series[t] += a * series[t - e];
  };
  const std::uint64_t q = g.fq().size;
  for (long e = 1; e <= D; ++e) {
    const FieldParams& F = extension_field(g, static_cast<int>(e), opt);
    const PointEvaluator ev(g, F);
    ff::for_each_element(F, {0, F.size}, [&](const FFElem& x) {
      // Closed points of degree e: orbits of size e under x -> x^q, one representative each.
      FFElem y = x;
      for (long i = 1; i <= e; ++i) {
        y = y.pow(q);
        if (y == x) {
          if (i != e) return;
          break;
        }
        if (y < x) return;
      }
      if (auto c = ev.at(x)) absorb(zpow[*c], e);
    });
    if (e == 1)
      if (auto c = ev.at_infinity()) absorb(zpow[*c], 1);
  }
  return series;
}

SlopePolygon newton_polygon(const LPolynomial& L) { return np_of_polynomial(L.coeffs, PolygonUnit::q_adic(L.q)); }

ASWCharacter localize(const ASWCharacter& f, const Place& P) {
  if (!f.ramified_at(P)) throw std::invalid_argument("localize: " + P.str() + " is not in the ramified set");
  std::vector<RationalFunction> coords;
  for (const auto& fi : f.coords()) coords.emplace_back(fi.polar_part(P));
  return ASWCharacter(f.p(), f.n(), f.fq(), std::move(coords));
}

TouchingReport check_touching(const ASWCharacter& f, const Rational& r, const LOptions& opt) {
  const ASWCharacter g = prepare(f);
  const SwanData swan = swan_conductors(g);
  TouchingReport rep;
  rep.r = r;
  rep.np = newton_polygon(l_polynomial(g, opt));
  rep.hp = global_hodge_polygon(swan);
  rep.global = shares_terminal_point(truncate_below(rep.np, r), truncate_below(rep.hp, r));
  rep.np_above_hp = lies_on_or_above(rep.np, rep.hp) && shares_terminal_point(rep.np, rep.hp);
  bool all_local = true;
  for (const auto& P : g.ramified()) {
    LocalTouching lt;
    lt.place = P;
    lt.np = newton_polygon(l_polynomial(localize(g, P), opt));
    lt.hp = local_hodge_polygon(swan.at(P).d, swan.q);
    lt.touching = shares_terminal_point(truncate_below(lt.np, r), truncate_below(lt.hp, r));
    lt.np_above_hp = lies_on_or_above(lt.np, lt.hp) && shares_terminal_point(lt.np, lt.hp);
    all_local = all_local && lt.touching;
    rep.locals.push_back(std::move(lt));
  }
  rep.theorem_consistent = (rep.global == all_local);
  return rep;
}

namespace {

// Image of an element of Z[zeta_{p^{n'}}] in Z[zeta_{p^n}] under zeta' -> zeta^{p^{n-n'}}.
CyclotomicInteger lift_level(const CyclotomicInteger& c, const CycloParams& target) {
  const long stride = target.order / c.params().order;
  std::vector<mpz_class> pw(target.order);
  for (std::size_t i = 0; i < c.coeffs().size(); ++i) pw[i * stride] += c.coeffs()[i];
  return CyclotomicInteger::from_powers(target, std::move(pw));
}

std::vector<CyclotomicInteger> poly_mul(const std::vector<CyclotomicInteger>& a,
                                        const std::vector<CyclotomicInteger>& b) {
  std::vector<CyclotomicInteger> r(a.size() + b.size() - 1, CyclotomicInteger(a[0].params()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

}  // namespace

mpz_class cover_point_count(const ASWCharacter& f, int k, const LOptions& opt) {
  const ASWCharacter g = prepare(f);
  const FieldParams& F = extension_field(g, k, opt);
  const int n = g.n();
  mpz_class witt_count;
  mpz_ui_pow_ui(witt_count.get_mpz_t(), F.size, static_cast<unsigned long>(n));
  if (witt_count > 10000000) throw InfeasibleError("cover point count needs " + witt_count.get_str() + " Witt vectors");
  // Histogram of F(y) - y over all y in W_n(F_{q^k}).
  const witt::WittStructure& ws = witt::structure(g.p(), n);
  std::map<std::vector<std::uint64_t>, std::uint64_t> hist;
  const std::uint64_t total = witt_count.get_ui();
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::vector<FFElem> comps;
    std::uint64_t t = idx;
    for (int i = 0; i < n; ++i) {
      comps.push_back(FFElem::from_index(F, t % F.size));
      t /= F.size;
    }
    const witt::WittVector<FFElem> y(ws, std::move(comps));
    const auto d = witt::witt_add(witt::witt_frobenius(y), witt::witt_neg(y));
    std::vector<std::uint64_t> key;
    for (const auto& c : d.c) key.push_back(c.index());
    ++hist[key];
  }
  std::vector<ExtensionEvaluator> evals;
  for (const auto& fi : g.coords()) evals.emplace_back(fi, F);
  auto fiber = [&](const std::vector<std::optional<FFElem>>& vals) -> std::uint64_t {
    std::vector<std::uint64_t> key;
    for (const auto& v : vals) key.push_back(v->index());
    auto it = hist.find(key);
    return it == hist.end() ? 0 : it->second;
  };
  mpz_class count = static_cast<unsigned long>(g.ramified().size());
  for (std::uint64_t idx = 0; idx < F.size; ++idx) {
    const FFElem x = FFElem::from_index(F, idx);
    std::vector<std::optional<FFElem>> vals;
    bool pole = false;
    for (const auto& e : evals) {
      vals.push_back(e(x));
      pole = pole || !vals.back();
    }
    if (!pole) count += static_cast<unsigned long>(fiber(vals));
  }
  if (!g.ramified_at(Place::at_infinity())) {
    std::vector<std::optional<FFElem>> vals;
    for (const auto& e : evals) vals.push_back(e.at_infinity());
    count += static_cast<unsigned long>(fiber(vals));
  }
  return count;
}

ZetaCoverResult zeta_cover(const ASWCharacter& f, int max_k, const LOptions& opt) {
  const ASWCharacter g = prepare(f);
  const long p = g.p();
  const int n = g.n();
  const CycloParams ring(p, n);
  const long pn = ring.order;
  ZetaCoverResult res;
  std::vector<CyclotomicInteger> prod{CyclotomicInteger::from_integer(ring, 1)};
  for (long j = 1; j < pn; ++j) {
    long jj = j;
    int v = 0;
    while (jj % p == 0) {
      jj /= p;
      ++v;
    }
    // j f has order p^{n-v}: it is j' times the truncation to n - v coordinates.
    const int level = n - v;
    std::vector<RationalFunction> coords(g.coords().begin(), g.coords().begin() + level);
    const witt::WittVector<RationalFunction> w(witt::structure(p, level), coords);
    const auto scaled = witt::witt_scalar(jj, w);
    const ASWCharacter chi(p, level, g.fq(), scaled.c);
    LPolynomial L = l_polynomial(chi, opt);
    std::vector<CyclotomicInteger> lifted;
    for (const auto& c : L.coeffs) lifted.push_back(lift_level(c, ring));
    prod = poly_mul(prod, lifted);
    res.factors.push_back(std::move(L));
    res.multipliers.push_back(j);
  }
  for (std::size_t i = 0; i < prod.size(); ++i) {
    if (!prod[i].is_rational_integer())
      throw MathCheckFailed("zeta numerator coefficient " + std::to_string(i) + " is not a rational integer: " +
                            prod[i].str());
    res.product.push_back(prod[i].coeffs()[0]);
  }
  // N_k = -(sum of k-th powers of reciprocal roots), from k c_k = sum_{i<=k} N_i c_{k-i}.
  std::vector<mpz_class> N(max_k + 1);
  auto coeff = [&](long i) -> mpz_class { return i < static_cast<long>(res.product.size()) ? res.product[i] : 0; };
  for (int k = 1; k <= max_k; ++k) {
    mpz_class acc = k * coeff(k);
    for (int i = 1; i < k; ++i) acc -= N[i] * coeff(k - i);
    N[k] = acc;
    PointCount pc;
    pc.k = k;
    mpz_class qk;
    mpz_pow_ui(qk.get_mpz_t(), g.q().get_mpz_t(), static_cast<unsigned long>(k));
    pc.from_zeta = qk + 1 + N[k];
    pc.direct = cover_point_count(g, k, opt);
    if (pc.from_zeta != pc.direct)
      throw MathCheckFailed("cover point count over F_{q^" + std::to_string(k) + "}: zeta gives " +
                            pc.from_zeta.get_str() + ", direct count gives " + pc.direct.get_str());
    res.counts.push_back(pc);
  }
  return res;
}

}  // namespace nhlab
