#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "nhlab/rational.hpp"

namespace nhlab::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2 };

struct JobSpec {
  std::string command;    // lfunction, polygon, check-touching, check-equality, dwork-oracle, zeta-cover, perturb-suite
  std::string character;  // character spec text
  std::optional<Rational> r;
  unsigned threads = 0;  // 0: default_threads()

  // dwork-oracle
  long size = 0;
  int precision = 0;
  std::string backend = "auto";
  std::optional<Rational> hodge_cutoff;
  int blocks = 0;

  // zeta-cover
  int max_k = 2;

  // perturb-suite
  std::string suite = "perturbation";
  long trials = 200;
  std::uint64_t seed = 1;
  long matrix_size = 0;  // 0: suite default
  long prime = 3;
  int matrix_precision = 20;

  // artifacts
  std::string json_path;  // verdict record; stdout when empty
  std::string csv_path;   // NP vertices
  std::string hp_csv_path;
  std::string svg_path;
};

/// Rejects malformed jobs with an actionable message (std::invalid_argument).
void validate(const JobSpec& job);

/// Runs the job, writes the verdict record (JSON) to job.json_path or out and
/// the requested artifacts. Errors go to err. Returns an ExitCode.
int run(const JobSpec& job, std::ostream& out, std::ostream& err);

}  // namespace nhlab::cli
