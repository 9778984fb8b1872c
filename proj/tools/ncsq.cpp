// Batch front door: instance generation, verification suites, parameter
// sweeps, one-off norm evaluation.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ncsq/suite.hpp"

namespace {

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

void ensure_parent_dir(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

int cmd_gen(const std::string& config_path, std::uint64_t seed,
            const std::string& out_path) {
  ncsq::SuiteConfig cfg =
      config_path.empty() ? ncsq::SuiteConfig{} : ncsq::load_config(config_path);
  if (seed != 0) cfg.seed = seed;
  ensure_parent_dir(out_path);
  ncsq::Instance inst = ncsq::generate_instance(cfg.grid, cfg.weight, cfg.seed);
  ncsq::save_instance(inst, out_path);
  std::printf("wrote %s (d=%d J=%d m=%d, lambda default %.6g, [w]_A1 %.6g)\n",
              out_path.c_str(), cfg.grid.d, cfg.grid.J, cfg.grid.m,
              ncsq::default_lambda(inst.f), inst.w.a1);
  return 0;
}

int cmd_suite(const std::string& config_path, std::uint64_t seed,
              const std::string& out_dir) {
  ncsq::SuiteConfig cfg =
      config_path.empty() ? ncsq::SuiteConfig{} : ncsq::load_config(config_path);
  if (seed != 0) cfg.seed = seed;
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    cfg.out_csv = out_dir + "/reports.csv";
    cfg.out_summary = out_dir + "/summary.json";
    cfg.witness_dir = out_dir;
  }
  ncsq::SuiteResult res = ncsq::run_suite(cfg);
  ncsq::write_file_atomic(cfg.out_csv, res.csv);
  ncsq::write_file_atomic(cfg.out_summary, res.summary_json);
  std::printf("%zu reports, %d failures -> %s\n", res.reports.size(), res.failures,
              cfg.out_csv.c_str());
  return res.failures == 0 ? 0 : 1;
}

int cmd_sweep(const std::string& config_path, std::uint64_t seed,
              const std::string& axis, const std::string& values_csv,
              const std::string& out_path) {
  ncsq::SuiteConfig cfg =
      config_path.empty() ? ncsq::SuiteConfig{} : ncsq::load_config(config_path);
  if (seed != 0) cfg.seed = seed;
  const auto values = parse_values(values_csv);
  ncsq::SuiteResult res = ncsq::run_sweep(cfg, axis, values);
  const std::string out = out_path.empty() ? "sweep.csv" : out_path;
  ensure_parent_dir(out);
  ncsq::write_file_atomic(out, res.csv);
  std::printf("%zu reports, %d failures -> %s\n", res.reports.size(), res.failures,
              out.c_str());
  return res.failures == 0 ? 0 : 1;
}

int cmd_norms(const std::string& instance_path, int R, std::uint64_t seed) {
  ncsq::Instance inst = ncsq::load_instance(instance_path);
  const ncsq::MatrixField& f = inst.f;
  const ncsq::Weight& w = inst.w;

  nlohmann::json j;
  j["grid"] = {{"d", f.grid.d}, {"J", f.grid.J}, {"m", f.grid.m}};
  j["a1_constant"] = w.a1;
  j["lambda_default"] = ncsq::default_lambda(f);
  j["trace"] = ncsq::trace(f, &w).real();
  j["l1"] = ncsq::lp_norm(f, 1.0, &w);
  j["l2"] = ncsq::lp_norm(f, 2.0, &w);
  j["linf"] = ncsq::lp_norm(f, std::numeric_limits<double>::infinity(), &w);
  j["weak_l1"] = ncsq::weak_l1_quasinorm(f, &w);

  ncsq::FieldSequence seq;
  for (int k = 0; k <= f.grid.J; ++k) seq.push_back(ncsq::t_op(f, k));
  j["tk_column_p1"] = ncsq::column_norm(seq, 1.0, &w);
  j["tk_row_p1"] = ncsq::row_norm(seq, 1.0, &w);
  ncsq::RcOptions opts;
  opts.seed = seed;
  ncsq::Bracket rc1 = ncsq::rc_norm(seq, 1.0, &w, opts);
  j["tk_rc_p1"] = {{"lower", rc1.lower}, {"upper", rc1.upper}};
  ncsq::Bracket rc2 = ncsq::rc_norm(seq, 2.0, &w, opts);
  j["tk_rc_p2"] = rc2.upper;
  ncsq::Bracket weak = ncsq::weak_rc_quasinorm(seq, &w, opts);
  j["tk_weak_rc"] = {{"lower", weak.lower}, {"upper", weak.upper}};

  const ncsq::SignSample signs = ncsq::SignSample::random(f.grid.J, R, seed);
  const ncsq::MatrixField tf = ncsq::linearize(f, signs);
  j["tf_l2"] = ncsq::lp_norm(tf, 2.0, &w);
  j["tf_weak_l1"] = ncsq::weak_l1_quasinorm(tf, &w);

  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dyadic noncommutative square-function verifier"};
  app.require_subcommand(1);

  std::string config, out, axis, values, instance_path;
  std::uint64_t seed = 0;
  int R = 64;

  auto* gen = app.add_subcommand("gen", "generate a serialized instance");
  gen->add_option("--config", config, "suite config file");
  gen->add_option("--seed", seed, "seed override");
  gen->add_option("--out", out, "output path")->required();

  auto* suite = app.add_subcommand("suite", "run every check on N instances");
  suite->add_option("--config", config, "suite config file");
  suite->add_option("--seed", seed, "seed override");
  suite->add_option("--out", out, "output directory");

  auto* sweep = app.add_subcommand("sweep", "run one suite per axis value");
  sweep->add_option("--config", config, "suite config file");
  sweep->add_option("--seed", seed, "seed override");
  sweep->add_option("--axis", axis, "lambda | J | a1-cap")->required();
  sweep->add_option("--values", values, "comma separated axis values")->required();
  sweep->add_option("--out", out, "output csv path");

  auto* norms = app.add_subcommand("norms", "norm evaluation of an instance file");
  norms->add_option("file", instance_path, "instance json")->required();
  norms->add_option("--samples", R, "Rademacher samples");
  norms->add_option("--seed", seed, "sign seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(config, seed, out);
    if (suite->parsed()) return cmd_suite(config, seed, out);
    if (sweep->parsed()) return cmd_sweep(config, seed, axis, values, out);
    if (norms->parsed()) return cmd_norms(instance_path, R, seed);
  } catch (const ncsq::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
