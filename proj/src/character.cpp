#include "nhlab/character.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "nhlab/errors.hpp"

namespace nhlab {

namespace {

long ipow(long p, int e) {
  long r = 1;
  for (int i = 0; i < e; ++i) r *= p;
  return r;
}

void add_place(std::vector<Place>& S, const Place& P) {
  if (std::find(S.begin(), S.end(), P) == S.end()) S.push_back(P);
}

}  // namespace

ASWCharacter::ASWCharacter(long p, int n, const FieldParams& fq, std::vector<RationalFunction> coords)
    : p_(p), n_(n), fq_(&fq), f_(std::move(coords)) {
  if (fq.p != p) throw std::invalid_argument("character: field characteristic differs from p");
  if (n < 1) throw std::invalid_argument("character: n must be positive");
  if (static_cast<int>(f_.size()) != n)
    throw std::invalid_argument("character: expected " + std::to_string(n) + " Witt coordinates, got " +
                                std::to_string(f_.size()));
  for (const auto& fi : f_) {
    if (&fi.field() != &fq) throw std::invalid_argument("character: coordinate over a different field");
    for (const auto& P : fi.finite_poles()) add_place(S_, P);
    if (fi.pole_order(Place::at_infinity()) > 0) add_place(S_, Place::at_infinity());
  }
  std::sort(S_.begin(), S_.end());
}

mpz_class ASWCharacter::q() const {
  mpz_class q;
  mpz_ui_pow_ui(q.get_mpz_t(), static_cast<unsigned long>(p_), static_cast<unsigned long>(fq_->k));
  return q;
}

bool ASWCharacter::ramified_at(const Place& P) const { return std::find(S_.begin(), S_.end(), P) != S_.end(); }

std::string ASWCharacter::str() const {
  std::ostringstream os;
  os << "p=" << p_ << " n=" << n_ << " q=" << q() << " f=(";
  for (int i = 0; i < n_; ++i) os << (i ? ", " : "") << f_[i].str();
  os << ") S={";
  for (std::size_t i = 0; i < S_.size(); ++i) os << (i ? ", " : "") << S_[i].str();
  os << "}";
  return os.str();
}

namespace {

// Highest polar exponent divisible by p, or 0.
int p_divisible_polar_exponent(const FFPoly& polar, long p) {
  for (int e = polar.degree(); e >= 1; --e)
    if (e % p == 0 && !polar.coeff(e).is_zero()) return e;
  return 0;
}

RationalFunction reduce_coordinate(RationalFunction f, const std::vector<Place>& S, long p) {
  const FieldParams& fq = f.field();
  const std::uint64_t root_exp = fq.size / static_cast<std::uint64_t>(p);  // c^{1/p} = c^{q/p}
  for (const auto& P : S) {
    for (;;) {
      const FFPoly polar = f.polar_part(P);
      const int e = p_divisible_polar_exponent(polar, p);
      if (e == 0) break;
      const FFElem root = polar.coeff(e).pow(root_exp);
      const RationalFunction g = RationalFunction::from_local(FFPoly::monomial(root, e / static_cast<int>(p)), P);
      f = f - g.pow(p) + g;
    }
  }
  return f;
}

}  // namespace

ASWCharacter reduce(const ASWCharacter& f) {
  std::vector<RationalFunction> out;
  for (const auto& fi : f.coords()) out.push_back(reduce_coordinate(fi, f.ramified(), f.p()));
  return ASWCharacter(f.p(), f.n(), f.fq(), std::move(out));
}

bool is_reduced(const ASWCharacter& f) {
  for (const auto& fi : f.coords())
    for (const auto& P : f.ramified())
      if (p_divisible_polar_exponent(fi.polar_part(P), f.p()) != 0) return false;
  return true;
}

void require_totally_ramified(const ASWCharacter& f) {
  if (f.ramified().empty()) throw std::invalid_argument("character is unramified everywhere (trivial on P^1)");
  for (const auto& P : f.ramified())
    if (f.coords()[0].pole_order(P) == 0)
      throw std::invalid_argument("f_0 has no pole at " + P.str() +
                                  "; total ramification of order p^n cannot be certified there");
}

const LocalSwan& SwanData::at(const Place& P) const {
  for (const auto& l : local)
    if (l.place == P) return l;
  throw std::invalid_argument("no Swan data at " + P.str());
}

SwanData swan_conductors(const ASWCharacter& f) {
  if (!is_reduced(f)) throw std::invalid_argument("swan_conductors: character is not reduced");
  SwanData out;
  out.p = f.p();
  out.n = f.n();
  out.q = f.q();
  const long p = f.p();
  const int n = f.n();
  for (const auto& P : f.ramified()) {
    LocalSwan ls;
    ls.place = P;
    for (int i = 1; i <= n; ++i) {
      long d = 0;
      for (int j = 0; j < i; ++j) d = std::max(d, ipow(p, i - 1 - j) * f.coords()[j].pole_order(P));
      ls.breaks.push_back(d);
    }
    for (int i = 0; i + 1 < n; ++i)
      if (ls.breaks[i + 1] < p * ls.breaks[i])
        throw MathCheckFailed("break sequence at " + P.str() + " violates d_{i+1} >= p d_i");
    ls.d = ls.breaks.back();
    if (ls.d < ipow(p, n - 1))
      throw MathCheckFailed("Swan conductor at " + P.str() + " is below p^{n-1}");
    ls.delta = Rational(ls.d, ipow(p, n - 1));
    out.local.push_back(std::move(ls));
  }
  return out;
}

SlopePolygon local_hodge_polygon(long d, const mpz_class& q) {
  if (d < 1) throw std::invalid_argument("local_hodge_polygon: d must be positive");
  std::vector<Rational> s;
  for (long i = 1; i < d; ++i) s.emplace_back(i, d);
  return SlopePolygon::from_slopes(std::move(s), PolygonUnit::q_adic(q));
}

SlopePolygon global_hodge_polygon(const SwanData& swan, int genus) {
  const long count = genus - 1 + static_cast<long>(swan.local.size());
  if (count < 0) throw std::invalid_argument("global_hodge_polygon: g - 1 + |S| < 0");
  std::vector<Rational> s;
  for (long i = 0; i < count; ++i) {
    s.emplace_back(0);
    s.emplace_back(1);
  }
  SlopePolygon hp = SlopePolygon::from_slopes(std::move(s), PolygonUnit::q_adic(swan.q));
  for (const auto& l : swan.local) hp = concat(hp, local_hodge_polygon(l.d, swan.q));
  return hp;
}

long l_degree(const SwanData& swan, int genus) {
  long D = 2L * genus - 2;
  for (const auto& l : swan.local) D += l.d + 1;
  return D;
}

bool check_equality_conditions(const SwanData& swan, int, bool ordinary) {
  if (!ordinary) return false;
  for (const auto& l : swan.local) {
    if (!l.delta.is_integer()) return false;
    const mpz_class delta = l.delta.num();
    if ((mpz_class(swan.p) - 1) % delta != 0) return false;
  }
  return true;
}

namespace {

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

long parse_long(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long r = std::stol(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    throw std::invalid_argument("character spec: '" + key + "' must be an integer, got '" + v + "'");
  }
}

bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace

CharacterSpec parse_character_spec(const std::string& text) {
  CharacterSpec spec;
  std::map<int, std::string> coords;
  bool have_p = false;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = strip(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("character spec line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = strip(line.substr(0, eq));
    const std::string val = strip(line.substr(eq + 1));
    if (val.empty()) throw std::invalid_argument("character spec line " + std::to_string(lineno) + ": empty value");
    if (key == "p") {
      spec.p = parse_long(key, val);
      have_p = true;
    } else if (key == "n") {
      spec.n = static_cast<int>(parse_long(key, val));
    } else if (key == "q") {
      try {
        spec.q = mpz_class(val);
      } catch (const std::exception&) {
        throw std::invalid_argument("character spec: 'q' must be an integer, got '" + val + "'");
      }
    } else if (key == "f") {
      coords[0] = val;
    } else if (key.size() >= 2 && key[0] == 'f' && key.find_first_not_of("0123456789", 1) == std::string::npos) {
      coords[static_cast<int>(parse_long(key, key.substr(1)))] = val;
    } else {
      throw std::invalid_argument("character spec line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (!have_p) throw std::invalid_argument("character spec: missing 'p'");
  if (!is_prime(spec.p)) throw std::invalid_argument("character spec: p = " + std::to_string(spec.p) + " is not prime");
  if (spec.n < 1 || spec.n > 4) throw std::invalid_argument("character spec: n must be between 1 and 4");
  if (spec.q == 0) spec.q = spec.p;
  for (int i = 0; i < spec.n; ++i) {
    auto it = coords.find(i);
    spec.coords.push_back(it == coords.end() ? std::string("0") : it->second);
  }
  for (const auto& [i, _] : coords)
    if (i >= spec.n)
      throw std::invalid_argument("character spec: coordinate f" + std::to_string(i) + " given but n = " +
                                  std::to_string(spec.n));
  return spec;
}

ASWCharacter build_character(const CharacterSpec& spec) {
  const long m = log_p_exact(spec.q, spec.p);
  const FieldParams& fq = ff::field(spec.p, static_cast<int>(m));
  std::vector<RationalFunction> f;
  for (const auto& s : spec.coords) f.push_back(parse_rational_function(s, fq));
  return ASWCharacter(spec.p, spec.n, fq, std::move(f));
}

}  // namespace nhlab
