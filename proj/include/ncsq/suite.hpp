#pragma once

#include <string>
#include <vector>

#include "ncsq/instance.hpp"
#include "ncsq/verifier.hpp"

namespace ncsq {

struct SuiteConfig {
  Grid grid{1, 4, 3};
  int R = 64;
  int instances = 100;
  std::uint64_t seed = 42;
  WeightSpec weight{.kind = "random-a1"};
  int lambda_sweep = 8;
  double lambda_scale = 1.0;  // multiplier on the per-instance default level
  Budgets budgets;
  int geometry_trials = 500;
  int ao_instances = 20;
  bool refine = true;              // couple each instance with its J+1 parent
  bool exhaustive_signs = false;   // allowed only when J <= 4
  std::string out_csv = "reports.csv";
  std::string out_summary = "summary.json";
  std::string witness_dir = ".";
  int threads = 0;  // 0: NCSQ_THREADS, else hardware concurrency

  void validate() const;
};

// flat key=value lines; '#' comments; unknown keys are errors
SuiteConfig parse_config(const std::string& text);
SuiteConfig load_config(const std::string& path);

struct SuiteResult {
  std::vector<CheckReport> reports;
  int failures = 0;
  std::string csv;
  std::string summary_json;
};

SuiteResult run_suite(const SuiteConfig& cfg);

// one suite per axis value; rows gain leading axis,value columns
SuiteResult run_sweep(const SuiteConfig& cfg, const std::string& axis,
                      const std::vector<double>& values);

void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace ncsq
