#include "nhlab/cli.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "nhlab/character.hpp"
#include "nhlab/dwork.hpp"
#include "nhlab/errors.hpp"
#include "nhlab/lfunction.hpp"
#include "nhlab/polygon.hpp"
#include "nhlab/valmat.hpp"

namespace nhlab::cli {

namespace {

using json = nlohmann::ordered_json;

json slopes_json(const SlopePolygon& a) {
  json out = json::array();
  for (const auto& s : a.slopes()) out.push_back(s.str());
  return out;
}

json vertices_json(const SlopePolygon& a) {
  json out = json::array();
  for (const auto& v : a.vertices()) out.push_back({v.x, v.y.str()});
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot write " + path);
  f << text;
}

struct Verdict {
  json record;
  bool checks_ok = true;

  Verdict(const std::string& command) {
    record["command"] = command;
    record["character"] = nullptr;
    record["np_slopes"] = nullptr;
    record["hp_slopes"] = nullptr;
    record["touching_global"] = nullptr;
    record["touching_local"] = nullptr;
    record["equality_predicted"] = nullptr;
    record["equality_observed"] = nullptr;
    record["details"] = json::object();
  }

  void fail(const std::string& why) {
    checks_ok = false;
    record["details"]["failed_checks"].push_back(why);
  }
};

LOptions l_options(const JobSpec& job) {
  LOptions o;
  o.threads = job.threads;
  return o;
}

ASWCharacter load_character(const JobSpec& job) { return prepare(build_character(parse_character_spec(job.character))); }

void polygon_artifacts(const JobSpec& job, const SlopePolygon& np, const SlopePolygon& hp, const std::string& title) {
  if (!job.csv_path.empty()) write_file(job.csv_path, to_csv(np));
  if (!job.hp_csv_path.empty()) write_file(job.hp_csv_path, to_csv(hp));
  if (!job.svg_path.empty()) write_file(job.svg_path, to_svg({{"NP", np}, {"HP", hp}}, title));
}

void cmd_lfunction(const JobSpec& job, Verdict& v) {
  const ASWCharacter g = load_character(job);
  const SwanData swan = swan_conductors(g);
  const LPolynomial L = l_polynomial(g, l_options(job));
  const SlopePolygon np = newton_polygon(L);
  const SlopePolygon hp = global_hodge_polygon(swan);
  v.record["character"] = g.str();
  v.record["np_slopes"] = slopes_json(np);
  v.record["hp_slopes"] = slopes_json(hp);
  json& d = v.record["details"];
  d["degree"] = L.degree;
  json coeffs = json::array();
  for (const auto& c : L.coeffs) coeffs.push_back(c.str());
  d["coefficients"] = coeffs;
  json sums = json::array();
  for (const auto& s : L.sums) sums.push_back(s.str());
  d["character_sums"] = sums;
  d["listing"] = "L(s) = " + L.str();
  if (!L.warnings.empty()) d["warnings"] = L.warnings;
  if (!lies_on_or_above(np, hp) || !shares_terminal_point(np, hp)) v.fail("NP does not lie above HP with equal endpoints");
  polygon_artifacts(job, np, hp, "L-function polygons");
}

void cmd_polygon(const JobSpec& job, Verdict& v) {
  const ASWCharacter g = load_character(job);
  const SwanData swan = swan_conductors(g);
  SlopePolygon np = newton_polygon(l_polynomial(g, l_options(job)));
  SlopePolygon hp = global_hodge_polygon(swan);
  if (job.r) {
    np = truncate_below(np, *job.r);
    hp = truncate_below(hp, *job.r);
    v.record["details"]["r"] = job.r->str();
  }
  v.record["character"] = g.str();
  v.record["np_slopes"] = slopes_json(np);
  v.record["hp_slopes"] = slopes_json(hp);
  v.record["details"]["np_vertices"] = vertices_json(np);
  v.record["details"]["hp_vertices"] = vertices_json(hp);
  json local = json::array();
  for (const auto& P : swan.local) {
    SlopePolygon lh = local_hodge_polygon(P.d, swan.q);
    if (job.r) lh = truncate_below(lh, *job.r);
    json breaks = json::array();
    for (const long b : P.breaks) breaks.push_back(b);
    local.push_back({{"place", P.place.str()}, {"breaks", breaks}, {"delta", P.delta.str()}, {"hp_slopes", slopes_json(lh)}});
  }
  v.record["details"]["local"] = local;
  polygon_artifacts(job, np, hp, "Newton and Hodge polygons");
}

void cmd_check_touching(const JobSpec& job, Verdict& v) {
  const ASWCharacter g = load_character(job);
  const Rational r = job.r.value_or(Rational(1));
  const TouchingReport rep = check_touching(g, r, l_options(job));
  v.record["character"] = g.str();
  v.record["np_slopes"] = slopes_json(rep.np);
  v.record["hp_slopes"] = slopes_json(rep.hp);
  v.record["touching_global"] = rep.global;
  json local = json::object();
  json details = json::array();
  for (const auto& lt : rep.locals) {
    local[lt.place.str()] = lt.touching;
    details.push_back({{"place", lt.place.str()},
                       {"np_slopes", slopes_json(lt.np)},
                       {"hp_slopes", slopes_json(lt.hp)},
                       {"touching", lt.touching}});
  }
  v.record["touching_local"] = local;
  v.record["details"]["r"] = r.str();
  v.record["details"]["local"] = details;
  v.record["details"]["theorem_consistent"] = rep.theorem_consistent;
  if (!rep.theorem_consistent) v.fail("global touching disagrees with the conjunction of local touching");
  polygon_artifacts(job, truncate_below(rep.np, r), truncate_below(rep.hp, r), "Polygons below r = " + r.str());
}

void cmd_check_equality(const JobSpec& job, Verdict& v) {
  const ASWCharacter g = load_character(job);
  const SwanData swan = swan_conductors(g);
  const SlopePolygon np = newton_polygon(l_polynomial(g, l_options(job)));
  const SlopePolygon hp = global_hodge_polygon(swan);
  const bool predicted = check_equality_conditions(swan);
  const bool observed = np == hp;
  v.record["character"] = g.str();
  v.record["np_slopes"] = slopes_json(np);
  v.record["hp_slopes"] = slopes_json(hp);
  v.record["equality_predicted"] = predicted;
  v.record["equality_observed"] = observed;
  const bool above = lies_on_or_above(np, hp);
  const bool endpoints = shares_terminal_point(np, hp);
  json& d = v.record["details"];
  d["np_above_hp"] = above;
  d["endpoints_equal"] = endpoints;
  d["strictly_above"] = above && endpoints && !observed;
  json deltas = json::object();
  for (const auto& P : swan.local) deltas[P.place.str()] = P.delta.str();
  d["delta"] = deltas;
  if (!above || !endpoints) v.fail("NP does not lie above HP with equal endpoints");
  if (predicted != observed) v.fail("equality criterion disagrees with the computed polygons");
  polygon_artifacts(job, np, hp, "Newton and Hodge polygons");
}

dwork::Backend parse_backend(const std::string& b) {
  if (b == "auto") return dwork::Backend::automatic;
  if (b == "fast") return dwork::Backend::fast;
  if (b == "reference") return dwork::Backend::reference;
  throw std::invalid_argument("unknown backend '" + b + "' (use auto, fast or reference)");
}

void cmd_dwork_oracle(const JobSpec& job, Verdict& v) {
  const ASWCharacter g = load_character(job);
  if (g.n() != 1 || g.fq().k != 1)
    throw std::invalid_argument("dwork-oracle supports order-p characters over F_p only (n = 1, q = p)");
  const SwanData swan = swan_conductors(g);
  const Rational r = job.r.value_or(Rational(1));
  dwork::OracleOptions opt;
  opt.size = job.size;
  opt.precision = job.precision;
  opt.backend = parse_backend(job.backend);
  v.record["character"] = g.str();
  v.record["details"]["r"] = r.str();
  json places = json::array();
  SlopePolygon first_np, first_hp;
  for (const auto& P : g.ramified()) {
    const ASWCharacter local = localize(g, P);
    const FFPoly f = local.coords()[0].num();
    const dwork::OracleResult res = dwork::local_np_oracle(f, r, opt);
    const SlopePolygon hp = truncate_below(local_hodge_polygon(swan.at(P).d, swan.q), r);
    json e;
    e["place"] = P.str();
    e["local_polynomial"] = f.str();
    e["np_slopes"] = slopes_json(res.np);
    e["hp_slopes"] = slopes_json(hp);
    e["fredholm_np_pi_adic"] = slopes_json(res.run.c_np);
    e["matrix_size"] = res.run.size;
    e["precision"] = res.run.precision;
    e["backend"] = res.run.backend;
    e["stabilization"] = {{"matrix_size", res.check.size}, {"precision", res.check.precision},
                          {"np", slopes_json(res.check.c_np)}};
    e["escalations"] = res.escalations;
    e["splitting_growth_holds"] = res.theta_growth.holds;
    e["structure_growth"] = {{"claimed_slope", res.structure_growth.slope.str()},
                             {"holds", res.structure_growth.holds},
                             {"worst_ratio", res.structure_growth.worst_ratio.str()}};
    try {
      const SlopePolygon direct = truncate_below(newton_polygon(l_polynomial(local, l_options(job))), r);
      e["character_sum_np"] = slopes_json(direct);
      e["agrees"] = direct == res.np;
      if (direct != res.np) v.fail("trace-formula NP differs from the character-sum NP at " + P.str());
    } catch (const InfeasibleError& ex) {
      e["character_sum_np"] = nullptr;
      e["agrees"] = nullptr;
      e["character_sum_skipped"] = ex.what();
    }
    if (job.hodge_cutoff) {
      const auto hc = dwork::hodge_bound_check(f, *job.hodge_cutoff, opt);
      e["hodge_bound"] = {{"cutoff", job.hodge_cutoff->str()}, {"ok", hc.ok}, {"diagnostic", hc.diagnostic}};
      if (!hc.ok) v.fail("Fredholm NP dips below HP(delta) at " + P.str());
    }
    if (job.blocks > 0) {
      const auto bc = dwork::block_periodicity_check(f, job.blocks, opt);
      e["block_periodicity"] = {{"blocks", job.blocks}, {"ok", bc.ok}, {"diagnostic", bc.diagnostic}};
      if (!bc.ok) v.fail("block periodicity fails at " + P.str());
    }
    if (places.empty()) {
      first_np = res.np;
      first_hp = hp;
    }
    places.push_back(e);
  }
  if (places.size() == 1) {
    v.record["np_slopes"] = places[0]["np_slopes"];
    v.record["hp_slopes"] = places[0]["hp_slopes"];
  }
  v.record["details"]["places"] = places;
  polygon_artifacts(job, first_np, first_hp, "Local polygons below r = " + r.str());
}

void cmd_zeta_cover(const JobSpec& job, Verdict& v) {
  const ASWCharacter g = load_character(job);
  const ZetaCoverResult z = zeta_cover(g, job.max_k, l_options(job));
  v.record["character"] = g.str();
  json& d = v.record["details"];
  json prod = json::array();
  for (const auto& c : z.product) prod.push_back(c.get_str());
  d["numerator"] = prod;
  json factors = json::array();
  for (std::size_t i = 0; i < z.factors.size(); ++i)
    factors.push_back({{"multiplier", z.multipliers[i]}, {"l_polynomial", z.factors[i].str()}});
  d["factors"] = factors;
  json counts = json::array();
  for (const auto& c : z.counts) {
    counts.push_back({{"k", c.k}, {"from_zeta", c.from_zeta.get_str()}, {"direct", c.direct.get_str()}});
    if (c.from_zeta != c.direct) v.fail("point count over F_{q^" + std::to_string(c.k) + "} disagrees");
  }
  d["point_counts"] = counts;
}

void cmd_perturb_suite(const JobSpec& job, Verdict& v) {
  SuiteReport rep;
  if (job.suite == "perturbation") {
    rep = perturbation_suite(job.trials, job.seed, job.matrix_size ? job.matrix_size : 6, job.prime, job.matrix_precision);
  } else if (job.suite == "hodge") {
    rep = hodge_suite(job.trials, job.seed, job.matrix_size ? job.matrix_size : 6, job.prime);
  } else if (job.suite == "root") {
    rep = root_suite(job.trials, job.seed, job.matrix_size ? job.matrix_size : 3, job.prime, job.matrix_precision);
  } else {
    throw std::invalid_argument("unknown suite '" + job.suite + "' (use perturbation, hodge or root)");
  }
  json& d = v.record["details"];
  d["suite"] = rep.name;
  d["seed"] = job.seed;
  d["trials"] = rep.trials;
  d["passed"] = rep.passed;
  d["nontrivial"] = rep.nontrivial;
  d["redrawn"] = rep.redrawn;
  d["failures"] = rep.failures;
  if (!rep.ok()) v.fail(std::to_string(rep.trials - rep.passed) + " trials failed");
}

}  // namespace

void validate(const JobSpec& job) {
  static const char* commands[] = {"lfunction",    "polygon",    "check-touching", "check-equality",
                                   "dwork-oracle", "zeta-cover", "perturb-suite"};
  bool known = false;
  for (const char* c : commands) known = known || job.command == c;
  if (!known) throw std::invalid_argument("unknown command '" + job.command + "'");
  if (job.command != "perturb-suite" && job.character.empty())
    throw std::invalid_argument(job.command + " needs a character (--spec FILE or --char TEXT)");
  if (job.r && job.r->sign() <= 0) throw std::invalid_argument("r must be positive");
  if (job.command == "dwork-oracle" && job.r && *job.r > Rational(1))
    throw std::invalid_argument("dwork-oracle needs 0 < r <= 1");
  if (job.size < 0 || job.precision < 0) throw std::invalid_argument("size and precision must be non-negative");
  if (job.blocks < 0) throw std::invalid_argument("blocks must be non-negative");
  if (job.max_k < 1) throw std::invalid_argument("max-k must be at least 1");
  if (job.trials < 1) throw std::invalid_argument("trials must be positive");
  if (job.command == "perturb-suite" && (job.matrix_size > 16 || job.matrix_size < 0))
    throw std::invalid_argument("matrix size must be between 1 and 16");
}

int run(const JobSpec& job, std::ostream& out, std::ostream& err) {
  try {
    validate(job);
    Verdict v(job.command);
    static const std::map<std::string, std::function<void(const JobSpec&, Verdict&)>> table = {
        {"lfunction", cmd_lfunction},         {"polygon", cmd_polygon},
        {"check-touching", cmd_check_touching}, {"check-equality", cmd_check_equality},
        {"dwork-oracle", cmd_dwork_oracle},   {"zeta-cover", cmd_zeta_cover},
        {"perturb-suite", cmd_perturb_suite}};
    table.at(job.command)(job, v);
    v.record["status"] = v.checks_ok ? "ok" : "check_failed";
    const std::string text = v.record.dump(2) + "\n";
    if (job.json_path.empty()) out << text;
    else write_file(job.json_path, text);
    if (!v.checks_ok) {
      for (const auto& why : v.record["details"]["failed_checks"]) err << "check failed: " << why.get<std::string>() << "\n";
      return kCheckFailed;
    }
    return kOk;
  } catch (const MathCheckFailed& e) {
    err << "math check failed: " << e.what() << "\n";
    return kCheckFailed;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    return kUsage;
  } catch (const PrecisionExhausted& e) {
    err << "precision exhausted: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace nhlab::cli
