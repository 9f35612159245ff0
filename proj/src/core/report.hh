#pragma once

#include <string>
#include <vector>

#include "config.hh"

namespace sh {

struct RunOptions {
  std::string out_dir;  // empty: compute only, write nothing
  unsigned seed = 1234;
};

struct RunOutcome {
  bool passed = false;
  std::string task;
  std::string summary;
  std::vector<std::string> warnings;
  std::string json;  // full payload
  std::string json_path;
  std::string csv_path;
  std::string svg_path;
};

// FNV-1a 64 over the canonical section/key/value listing; names the output
// files so one config always lands on the same paths.
std::string config_hash_hex(const Config& cfg);

// Parses and validates the whole config before computing anything, runs the
// requested task, and writes report files atomically (temp then rename).
// Tasks: classify, tnorm, conditions, resolvent-check, heat, dg. Unknown
// keys and sections are errors, not surprises.
RunOutcome run_experiment(const Config& cfg, const RunOptions& opt);

}  // namespace sh
