#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nhlab/cli.hpp"

using nlohmann::json;
using namespace nhlab::cli;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_job(const JobSpec& job) {
  std::ostringstream out, err;
  const int code = run(job, out, err);
  return {code, out.str(), err.str()};
}

JobSpec job(const std::string& command, const std::string& character) {
  JobSpec j;
  j.command = command;
  j.character = character;
  j.threads = 2;
  return j;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  return std::string(std::istreambuf_iterator<char>(f), {});
}

}  // namespace

TEST_CASE("check-equality verdicts") {
  const auto eq = run_job(job("check-equality", "p = 5\nf = x^4"));
  REQUIRE(eq.code == kOk);
  const json a = json::parse(eq.out);
  CHECK(a["status"] == "ok");
  CHECK(a["equality_predicted"] == true);
  CHECK(a["equality_observed"] == true);
  CHECK(a["np_slopes"] == json::array({"1/4", "1/2", "3/4"}));

  const auto strict = run_job(job("check-equality", "p = 3\nf = x^5"));
  REQUIRE(strict.code == kOk);
  const json b = json::parse(strict.out);
  CHECK(b["equality_predicted"] == false);
  CHECK(b["equality_observed"] == false);
  CHECK(b["details"]["strictly_above"] == true);
  CHECK(b["details"]["endpoints_equal"] == true);
}

TEST_CASE("output is deterministic") {
  for (const char* cmd : {"lfunction", "polygon", "check-touching", "zeta-cover"}) {
    JobSpec j = job(cmd, "p = 3\nf = x^2 + 1/x");
    const auto first = run_job(j);
    j.threads = 1;
    const auto second = run_job(j);
    CHECK(first.code == kOk);
    CHECK(first.out == second.out);
  }
}

TEST_CASE("touching record lists every place") {
  JobSpec j = job("check-touching", "p = 3\nf = x^4 + 1/x");
  j.r = nhlab::Rational(1, 2);
  const auto o = run_job(j);
  REQUIRE(o.code == kOk);
  const json a = json::parse(o.out);
  CHECK(a["touching_global"] == false);
  CHECK(a["touching_local"]["x-0"] == true);
  CHECK(a["touching_local"]["inf"] == false);
  CHECK(a["details"]["theorem_consistent"] == true);
}

TEST_CASE("bad input exits with the usage code") {
  CHECK(run_job(job("lfunction", "p = 4\nf = x")).code == kUsage);
  CHECK(run_job(job("lfunction", "p = 3\nf = x^")).code == kUsage);
  CHECK(run_job(job("lfunction", "")).code == kUsage);
  CHECK(run_job(job("frobnicate", "p = 3\nf = x")).code == kUsage);
  JobSpec neg = job("polygon", "p = 3\nf = x^2");
  neg.r = nhlab::Rational(-1);
  CHECK(run_job(neg).code == kUsage);
  JobSpec dw = job("dwork-oracle", "p = 3\nq = 9\nf = x^2");
  const auto o = run_job(dw);
  CHECK(o.code == kUsage);
  CHECK(o.err.find("q = p") != std::string::npos);
}

TEST_CASE("artifacts and the dwork oracle record") {
  const auto dir = std::filesystem::temp_directory_path() / "nhlab_cli_test";
  std::filesystem::create_directories(dir);
  JobSpec j = job("dwork-oracle", "p = 5\nf = x^4");
  j.json_path = (dir / "v.json").string();
  j.csv_path = (dir / "np.csv").string();
  j.svg_path = (dir / "p.svg").string();
  j.blocks = 1;
  const auto o = run_job(j);
  REQUIRE(o.code == kOk);
  CHECK(o.out.empty());
  const json a = json::parse(slurp(dir / "v.json"));
  CHECK(a["np_slopes"] == json::array({"1/4", "1/2", "3/4"}));
  CHECK(a["details"]["places"][0]["agrees"] == true);
  CHECK(a["details"]["places"][0]["block_periodicity"]["ok"] == true);
  CHECK(slurp(dir / "np.csv").rfind("index,x,y_num,y_den", 0) == 0);
  CHECK(slurp(dir / "p.svg").find("<svg") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("perturb-suite") {
  JobSpec j;
  j.command = "perturb-suite";
  j.trials = 10;
  const auto o = run_job(j);
  REQUIRE(o.code == kOk);
  const json a = json::parse(o.out);
  CHECK(a["details"]["passed"] == 10);
  CHECK(a["details"]["suite"] == "perturbation");
  j.suite = "hodge";
  CHECK(run_job(j).code == kOk);
  j.suite = "nope";
  CHECK(run_job(j).code == kUsage);
}
