#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "nhlab/cli.hpp"

namespace {

std::string read_spec(const std::string& path) {
  if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot read spec file " + path);
  return std::string(std::istreambuf_iterator<char>(f), {});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Newton and Hodge polygons of Artin-Schreier-Witt L-functions"};
  app.require_subcommand(1);

  nhlab::cli::JobSpec job;
  std::string spec_path, inline_spec, r_text, hodge_text;

  auto character_options = [&](CLI::App* sub) {
    auto* g = sub->add_option_group("character");
    g->add_option("--spec", spec_path, "character spec file ('-' for stdin)");
    g->add_option("--char", inline_spec, "inline character spec; ';' separates lines");
    g->require_option(1);
    sub->add_option("--threads", job.threads, "worker threads (default: $NHLAB_THREADS or all cores)");
    sub->add_option("--json", job.json_path, "write the verdict record here instead of stdout");
  };
  auto polygon_outputs = [&](CLI::App* sub) {
    sub->add_option("--csv", job.csv_path, "NP vertices as CSV");
    sub->add_option("--hp-csv", job.hp_csv_path, "HP vertices as CSV");
    sub->add_option("--svg", job.svg_path, "NP and HP drawn on shared axes");
  };

  auto* lf = app.add_subcommand("lfunction", "L-polynomial, its Newton polygon and the Hodge polygon");
  character_options(lf);
  polygon_outputs(lf);

  auto* poly = app.add_subcommand("polygon", "global NP and HP, optionally truncated below r");
  character_options(poly);
  polygon_outputs(poly);
  poly->add_option("--r", r_text, "truncation bound, e.g. 1/2");

  auto* touch = app.add_subcommand("check-touching", "global and local touching of NP^{<r} and HP^{<r}");
  character_options(touch);
  polygon_outputs(touch);
  touch->add_option("--r", r_text, "truncation bound (default 1)");

  auto* eq = app.add_subcommand("check-equality", "predicted and observed NP = HP");
  character_options(eq);
  polygon_outputs(eq);

  auto* dw = app.add_subcommand("dwork-oracle", "local NP^{<r} through the Dwork trace formula (n = 1, q = p)");
  character_options(dw);
  polygon_outputs(dw);
  dw->add_option("--r", r_text, "truncation bound in (0, 1] (default 1)");
  dw->add_option("--size", job.size, "matrix size (default max(8, 10 d))");
  dw->add_option("--precision", job.precision, "pi-adic precision N (default max(40, 4 (p-1) d))");
  dw->add_option("--backend", job.backend, "auto, fast or reference")->check(CLI::IsMember({"auto", "fast", "reference"}));
  dw->add_option("--hodge-cutoff", hodge_text, "also check the Fredholm NP against HP(d) below this q-adic slope");
  dw->add_option("--blocks", job.blocks, "also check block periodicity for n = 1..blocks");

  auto* zc = app.add_subcommand("zeta-cover", "zeta numerator of the cover as a product of L-functions");
  character_options(zc);
  zc->add_option("--max-k", job.max_k, "point counts over F_{q^k}, k <= max-k (default 2)");

  auto* ps = app.add_subcommand("perturb-suite", "seeded random matrix property suites");
  ps->add_option("--suite", job.suite, "perturbation, hodge or root")->check(CLI::IsMember({"perturbation", "hodge", "root"}));
  ps->add_option("--trials", job.trials, "number of trials (default 200)");
  ps->add_option("--seed", job.seed, "random seed (default 1)");
  ps->add_option("--n", job.matrix_size, "matrix size (suite default when omitted)");
  ps->add_option("--p", job.prime, "prime (default 3)");
  ps->add_option("--N", job.matrix_precision, "residue precision p^N (default 20)");
  ps->add_option("--json", job.json_path, "write the verdict record here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : nhlab::cli::kUsage;
  }

  try {
    job.command = app.get_subcommands().front()->get_name();
    if (!spec_path.empty()) job.character = read_spec(spec_path);
    if (!inline_spec.empty()) {
      job.character = inline_spec;
      for (auto& c : job.character)
        if (c == ';') c = '\n';
    }
    if (!r_text.empty()) job.r = nhlab::Rational::parse(r_text);
    if (!hodge_text.empty()) job.hodge_cutoff = nhlab::Rational::parse(hodge_text);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return nhlab::cli::kUsage;
  }
  return nhlab::cli::run(job, std::cout, std::cerr);
}
