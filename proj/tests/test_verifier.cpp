#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "ncsq/kernels.hpp"
#include "ncsq/suite.hpp"
#include "ncsq/verifier.hpp"

using namespace ncsq;

namespace {

Instance make_instance(std::uint64_t seed, Grid g = {1, 4, 3}) {
  WeightSpec ws;
  ws.kind = "random-a1";
  ws.cap = 4.0;
  return generate_instance(g, ws, seed);
}

}  // namespace

TEST_CASE("cuculescu and cz bundles pass") {
  const Instance inst = make_instance(1);
  const double lambda = default_lambda(inst.f);
  const CzDecomposition cz = cz_run(inst.f, lambda);

  for (const auto& r : check_cuculescu(inst.f, cz.cuc, inst.w)) CHECK(r.pass);
  for (const auto& r : check_cz_proposition(inst.f, cz.cuc, cz.parts)) CHECK(r.pass);
  for (const auto& r : check_zeta(inst.f, cz, inst.w)) CHECK(r.pass);
  for (const auto& r : check_identities(inst.f, cz)) CHECK(r.pass);
}

TEST_CASE("cadilhac checks") {
  const Instance inst = make_instance(2);
  const CuculescuResult cuc = cuculescu(inst.f, default_lambda(inst.f));

  for (const auto& r : check_cadilhac_suite(inst.f, cuc, 7)) CHECK(r.pass);

  // K must sit inside E, E must be a union of cubes
  const Grid& g = inst.f.grid;
  CellSet k(g.cells());
  k.set(0);
  CellSet e(g.cells());
  e.set(1);
  CHECK_THROWS(check_cadilhac(inst.f, cuc, 2, k, e));
}

TEST_CASE("offdiag and good part") {
  const Instance inst = make_instance(3);
  const CzDecomposition cz = cz_run(inst.f, default_lambda(inst.f));
  Budgets b;
  CHECK(check_offdiag_sum(cz, inst.f, inst.w, b).pass);

  const SignSample signs = SignSample::random(inst.f.grid.J, 32, 99);
  for (const auto& r : check_good_part(inst.f, cz, inst.w, signs, b)) CHECK(r.pass);
}

TEST_CASE("main lemma decay") {
  Grid g{1, 5, 2};
  const Instance inst = make_instance(4, g);
  const DeltaCertificate cert = estimate_delta(inst.w, 200, 11);
  const double delta_fit = 0.5 * cert.delta;

  const DecayResult d1 = check_main_lemma(inst.f, 1.0, inst.w, delta_fit, false);
  CHECK(d1.report.pass);
  CHECK(d1.gaps.size() >= 2);
  CHECK(d1.slope < 0.0);
  const DecayResult d2 = check_main_lemma(inst.f, 2.0, inst.w, delta_fit, false);
  CHECK(d2.report.pass);
  const DecayResult dp = check_main_lemma(inst.f, 1.0, inst.w, delta_fit, true);
  CHECK(dp.report.pass);

  // zero field: degenerate family, counts as pass
  const MatrixField zero = MatrixField::zeros(g);
  CHECK(check_main_lemma(zero, 1.0, inst.w, delta_fit, false).report.pass);
}

TEST_CASE("almost orthogonality engine") {
  int hypothesis_failures_reported_as_lemma = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const AoOutcome good = check_almost_orthogonality(make_ao_instance(6, 5, 5, s, true));
    CHECK(good.hypothesis_ok);
    CHECK(good.report.pass);

    const AoOutcome bad = check_almost_orthogonality(make_ao_instance(6, 5, 5, s, false));
    if (!bad.hypothesis_ok && !bad.report.pass) ++hypothesis_failures_reported_as_lemma;
  }
  CHECK(hypothesis_failures_reported_as_lemma == 0);

  // exact single-pair case: S = identity, u = v, kappa(0) = 1
  AoInstance inst;
  inst.s = {Mat::identity(3)};
  inst.u = {{cplx(1, 0), cplx(0, 1), cplx(0.5, 0)}};
  inst.v = inst.u;
  inst.kappa = {1.0};
  inst.j_min = 0;
  const AoOutcome eq = check_almost_orthogonality(inst);
  CHECK(eq.hypothesis_ok);
  CHECK(eq.report.pass);
  CHECK(eq.report.lhs == doctest::Approx(eq.report.rhs));
}

TEST_CASE("ao pipeline on the diagonal bad part") {
  const Instance inst = make_instance(5);
  const CzDecomposition cz = cz_run(inst.f, default_lambda(inst.f));
  const DeltaCertificate cert = estimate_delta(inst.w, 200, 12);
  const AoOutcome out = check_ao_bd_pipeline(inst.f, cz, inst.w, 0.5 * cert.delta);
  CHECK(out.hypothesis_ok);
  CHECK(out.report.pass);
}

TEST_CASE("weak11 and refinement") {
  Grid fine{1, 5, 3};
  WeightSpec ws;
  ws.kind = "random-a1";
  const Instance fine_inst = generate_instance(fine, ws, 21);
  const Instance coarse = coarsen(fine_inst);
  Budgets b;

  const SignSample s4 = SignSample::random(coarse.f.grid.J, 32, 5);
  const SignSample s5 = SignSample::random(fine.J, 32, 6);
  const Weak11Result w4 = check_weak11(coarse.f, coarse.w, s4, b, 8, 0);
  const Weak11Result w5 = check_weak11(fine_inst.f, fine_inst.w, s5, b, 8, 0);
  for (const auto& r : w4.reports) CHECK(r.pass);
  for (const auto& r : w5.reports) CHECK(r.pass);
  CHECK(check_weak11_refinement(w5.max_ratio, w4.max_ratio, b).pass);

  // constant field: linearization vanishes, ratio zero
  const MatrixField c = MatrixField::constant(coarse.f.grid, Mat::identity(3));
  const Weak11Result wc = check_weak11(c, coarse.w, s4, b, 8, 0);
  CHECK(wc.max_ratio <= 1e-12);
}

TEST_CASE("strong pp and khintchine") {
  const Instance inst = make_instance(6, Grid{1, 3, 2});
  const SignSample ex = SignSample::all_patterns(3);
  for (double p : {1.5, 2.0, 3.0}) {
    for (const auto& r : check_strong_pp(inst.f, p, inst.w, ex, 1)) CHECK(r.pass);
  }
  CHECK(check_khintchine_p2(inst.f, inst.w).pass);
  CHECK_THROWS(check_strong_pp(inst.f, 2.5, inst.w, ex, 1));
}

TEST_CASE("geometry bundle") {
  Budgets b;
  for (const auto& r : check_geometry(Grid{1, 4, 1}, 120, 3, b)) CHECK(r.pass);
  for (const auto& r : check_geometry(Grid{2, 3, 1}, 60, 4, b)) CHECK(r.pass);
}

TEST_CASE("rc bracket bundle") {
  const Instance inst = make_instance(7, Grid{1, 3, 2});
  for (const auto& r : check_rc_brackets(inst.f, inst.w, 9)) CHECK(r.pass);
}

TEST_CASE("config parsing") {
  const SuiteConfig cfg = parse_config(
      "d=1\nJ=3\nm=2\nR=8\ninstances=2\nseed=5\nweight_kind=constant\n"
      "weight_a=1.0\n# comment\nlambda_sweep=8\n");
  CHECK(cfg.grid.J == 3);
  CHECK(cfg.R == 8);
  CHECK(cfg.instances == 2);
  CHECK_THROWS_AS((void)parse_config("bogus_key=1\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("d=1\nJ=0\n"), std::exception);
  CHECK_THROWS_AS((void)parse_config("no equals sign\n"), ConfigError);
}

TEST_CASE("small suite end to end") {
  SuiteConfig cfg;
  cfg.grid = {1, 3, 2};
  cfg.R = 8;
  cfg.instances = 2;
  cfg.seed = 77;
  cfg.geometry_trials = 40;
  cfg.ao_instances = 3;
  cfg.refine = true;
  cfg.weight.kind = "random-a1";
  const SuiteResult res = run_suite(cfg);
  CHECK(res.failures == 0);
  CHECK(res.reports.size() > 40);
  // determinism
  const SuiteResult res2 = run_suite(cfg);
  CHECK(res.csv == res2.csv);
}

TEST_CASE("suite csv identical across kernel backends") {
  if (!kernels::avx2_ops()) return;
  SuiteConfig cfg;
  cfg.grid = {1, 3, 2};
  cfg.R = 8;
  cfg.instances = 2;
  cfg.seed = 99;
  cfg.geometry_trials = 30;
  cfg.ao_instances = 2;
  cfg.threads = 1;
  kernels::select("scalar");
  const SuiteResult scalar_run = run_suite(cfg);
  kernels::select("avx2");
  const SuiteResult avx2_run = run_suite(cfg);
  kernels::select("auto");
  CHECK(scalar_run.csv == avx2_run.csv);
}

TEST_CASE("witness files round trip") {
  SuiteConfig cfg;
  cfg.grid = {1, 3, 2};
  cfg.R = 8;
  cfg.instances = 1;
  cfg.seed = 12;
  cfg.geometry_trials = 20;
  cfg.ao_instances = 1;
  cfg.refine = false;
  cfg.budgets.weak11 = 1e-9;  // force a tail-bound failure
  cfg.witness_dir = "wit_test";
  std::filesystem::create_directories(cfg.witness_dir);
  const SuiteResult res = run_suite(cfg);
  CHECK(res.failures > 0);
  std::string witness_path;
  for (const auto& r : res.reports)
    if (!r.pass && !r.witness.empty()) witness_path = r.witness;
  REQUIRE(!witness_path.empty());
  // the witness re-runs to the identical report
  const Instance wit = load_instance(witness_path);
  const SignSample signs =
      SignSample::random(wit.f.grid.J, cfg.R, split_seed(split_seed(cfg.seed, 0), 9));
  const Weak11Result again =
      check_weak11(wit.f, wit.w, signs, cfg.budgets, cfg.lambda_sweep, 0);
  for (const auto& orig : res.reports) {
    if (orig.check_id != "weak11" || orig.pass) continue;
    for (const auto& rerun : again.reports)
      if (rerun.check_id == "weak11") {
        CHECK(rerun.lhs == orig.lhs);
        CHECK(rerun.rhs == orig.rhs);
      }
  }
}

TEST_CASE("generated instances are PSD after a file round trip") {
  WeightSpec ws;
  ws.kind = "random-a1";
  const Instance inst = generate_instance(Grid{1, 3, 3}, ws, 5);
  save_instance(inst, "gen_psd_test.json");
  const Instance back = load_instance("gen_psd_test.json");
  for (int y = 0; y < back.f.grid.cells(); ++y)
    CHECK(min_eigenvalue(back.f.cell(y)) >= -1e-12);
  CHECK(back.f.data == inst.f.data);
}

TEST_CASE("sweep") {
  SuiteConfig cfg;
  cfg.grid = {1, 3, 2};
  cfg.R = 8;
  cfg.instances = 1;
  cfg.seed = 78;
  cfg.geometry_trials = 20;
  cfg.ao_instances = 1;
  cfg.refine = false;
  const SuiteResult res = run_sweep(cfg, "J", {3, 4});
  CHECK(res.failures == 0);
  CHECK_THROWS_AS((void)run_sweep(cfg, "bogus", {1, 2}), ConfigError);
  CHECK_THROWS_AS((void)run_sweep(cfg, "J", {3}), ConfigError);
  const SuiteResult lam = run_sweep(cfg, "lambda", {1.0, 1.5});
  CHECK(lam.failures == 0);
}
