// Acceptance suite: drives every hard criterion at desk scale and prints one
// pass/fail line per criterion. Exit code = number of failed criteria.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "ncsq/suite.hpp"
#include "ncsq/verifier.hpp"
#include "support/scalar_oracle.hpp"

using namespace ncsq;

namespace {

struct Criterion {
  std::string name;
  bool pass = true;
  std::string detail;
};

std::vector<Criterion> criteria;

void report(int idx, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", idx,
              name.c_str(), detail.c_str());
  std::fflush(stdout);
  criteria.push_back({name, pass, detail});
}

constexpr int kInstances = 100;
constexpr std::uint64_t kBaseSeed = 20240901;

struct MainLoopStats {
  int identity_failures = 0;
  int inequality_failures = 0;
  int weak_failures = 0;
  double worst_identity = 0.0;
  double worst_weak_ratio_vs_budget = 0.0;
  double max_ratio_j4 = 0.0;
  double max_ratio_j5 = 0.0;
  double worst_pair_factor = 1.0;  // per-instance coupled factor, tracked
};

// criteria 1, 2 and 7 share the instance loop: d=1, J=4, m=3, R=64,
// 100 seeded instances, each coupled with its J=5 parent
MainLoopStats main_instance_loop() {
  MainLoopStats st;
  Grid fine_grid{1, 5, 3};
  WeightSpec ws;
  ws.kind = "random-a1";
  ws.cap = 4.0;
  Budgets budgets;

  for (int i = 0; i < kInstances; ++i) {
    const std::uint64_t seed = split_seed(kBaseSeed, i);
    const Instance fine = generate_instance(fine_grid, ws, seed);
    const Instance inst = coarsen(fine);
    const double lambda = default_lambda(inst.f);
    const CzDecomposition cz = cz_run(inst.f, lambda);

    for (const auto& r : check_identities(inst.f, cz)) {
      if (!r.pass) ++st.identity_failures;
      st.worst_identity = std::max(st.worst_identity, r.lhs);
    }
    {
      auto zs = check_zeta(inst.f, cz, inst.w);
      if (!zs[0].pass) ++st.identity_failures;  // cancellation is criterion 1
      st.worst_identity = std::max(st.worst_identity, zs[0].lhs);
      if (!zs[1].pass) ++st.inequality_failures;  // mass bound is criterion 2
    }
    for (const auto& r : check_cuculescu(inst.f, cz.cuc, inst.w))
      if (!r.pass) ++st.inequality_failures;
    for (const auto& r : check_cz_proposition(inst.f, cz.cuc, cz.parts))
      if (!r.pass) ++st.inequality_failures;
    for (const auto& r : check_cadilhac_suite(inst.f, cz.cuc, split_seed(seed, 3)))
      if (!r.pass) ++st.inequality_failures;

    // criterion 7: tail bound under budget at J=4 and J=5, stable in between
    const SignSample s4 = SignSample::random(inst.f.grid.J, 64, split_seed(seed, 9));
    const SignSample s5 = SignSample::random(fine_grid.J, 64, split_seed(seed, 10));
    const Weak11Result w4 = check_weak11(inst.f, inst.w, s4, budgets, 8, seed);
    const Weak11Result w5 = check_weak11(fine.f, fine.w, s5, budgets, 8, seed);
    for (const auto& r : w4.reports)
      if (!r.pass) ++st.weak_failures;
    for (const auto& r : w5.reports)
      if (!r.pass) ++st.weak_failures;
    for (const auto& r : w4.reports)
      if (r.check_id == "weak11" && std::isfinite(r.ratio))
        st.worst_weak_ratio_vs_budget = std::max(st.worst_weak_ratio_vs_budget, r.ratio);
    st.max_ratio_j4 = std::max(st.max_ratio_j4, w4.max_ratio);
    st.max_ratio_j5 = std::max(st.max_ratio_j5, w5.max_ratio);
    if (w4.max_ratio > 0.0 && w5.max_ratio > 0.0)
      st.worst_pair_factor =
          std::max(st.worst_pair_factor,
                   std::max(w4.max_ratio / w5.max_ratio, w5.max_ratio / w4.max_ratio));
  }
  return st;
}

void criterion_scalar_oracle() {
  Grid g{1, 4, 1};
  WeightSpec ws;
  ws.kind = "constant";
  ws.a = 1.0;
  int failures = 0;
  double worst = 0.0;
  for (int i = 0; i < 30; ++i) {
    const std::uint64_t seed = split_seed(kBaseSeed + 1, i);
    const Instance inst = generate_instance(g, ws, seed);
    std::vector<double> fv(g.cells());
    for (int y = 0; y < g.cells(); ++y) fv[y] = inst.f.cell(y).at(0, 0).real();
    const double lambda = default_lambda(inst.f);

    const CzDecomposition cz = cz_run(inst.f, lambda);
    const oracle::ScalarCz ref = oracle::scalar_cz(g, fv, lambda);

    auto miss = [&](double a, double b) {
      worst = std::max(worst, std::abs(a - b));
      return std::abs(a - b) > 1e-10;
    };
    bool bad = false;
    for (int n = 0; n <= g.J; ++n)
      for (int y = 0; y < g.cells(); ++y)
        bad |= miss(cz.cuc.q[n].cell(y).at(0, 0).real(), ref.q[n][y]);
    for (int y = 0; y < g.cells(); ++y) {
      bad |= miss(cz.parts.g.cell(y).at(0, 0).real(), ref.g[y]);
      bad |= miss(cz.parts.b_d.cell(y).at(0, 0).real(), ref.bd[y]);
      bad |= miss(cz.parts.b_off.cell(y).at(0, 0).real(), 0.0);
      bad |= miss(cz.zeta.cell(y).at(0, 0).real(), ref.zeta[y]);
    }

    const SignSample signs = SignSample::random(g.J, 64, split_seed(seed, 9));
    Budgets budgets;
    const Weak11Result w11 =
        check_weak11(inst.f, inst.w, signs, budgets, 8, seed);
    std::vector<double> wv(g.cells(), 1.0);
    const double ref_ratio = oracle::scalar_weak11_max_ratio(g, fv, wv, signs, 8);
    bad |= miss(w11.max_ratio, ref_ratio);
    if (bad) ++failures;
  }
  report(3, "scalar pipeline equals the independent oracle", failures == 0,
         "30 instances, worst deviation " + std::to_string(worst));
}

void criterion_khintchine() {
  Grid g{1, 3, 3};
  WeightSpec ws;
  ws.kind = "random-a1";
  int failures = 0;
  double worst = 0.0;
  for (int i = 0; i < kInstances; ++i) {
    const Instance inst = generate_instance(g, ws, split_seed(kBaseSeed + 2, i));
    const CheckReport r = check_khintchine_p2(inst.f, inst.w);
    if (!r.pass) ++failures;
    worst = std::max(worst, r.lhs);
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%d/%d exact at J=3, worst defect %.3g",
                kInstances - failures, kInstances, worst);
  report(4, "exhaustive Rademacher p=2 identity", failures == 0, buf);
}

void criterion_geometry() {
  Budgets budgets;
  int failures = 0;
  for (const auto& r : check_geometry(Grid{1, 4, 3}, 500, kBaseSeed + 3, budgets))
    if (!r.pass) ++failures;
  for (const auto& r : check_geometry(Grid{2, 3, 2}, 200, kBaseSeed + 4, budgets))
    if (!r.pass) ++failures;
  report(5, "boundary inclusion, equivariance, annulus and fibre oracles",
         failures == 0, failures == 0 ? "700 randomized relations exact"
                                      : std::to_string(failures) + " violations");
}

void criterion_decay() {
  Grid g{1, 5, 3};
  WeightSpec gen;
  gen.kind = "random-a1";
  std::vector<Weight> bank;
  bank.push_back(make_weight_constant(g, 1.0));
  bank.push_back(make_weight_two_level(g, 2.0, 1.0));
  bank.push_back(make_weight_power(g, {0.5, 0.5}, 0.5));
  bank.push_back(make_weight_random_a1(g, split_seed(kBaseSeed + 5, 1), 4.0));
  bank.push_back(make_weight_random_a1(g, split_seed(kBaseSeed + 5, 2), 4.0));

  int failures = 0;
  double worst_slope = -1e9;
  for (std::size_t wi = 0; wi < bank.size(); ++wi) {
    for (int i = 0; i < 5; ++i) {
      const Instance inst =
          generate_instance(g, gen, split_seed(kBaseSeed + 6, 10 * wi + i));
      const DeltaCertificate cert =
          estimate_delta(bank[wi], 200, split_seed(kBaseSeed + 7, wi));
      const double delta_fit = 0.5 * cert.delta;
      for (double p : {1.0, 2.0}) {
        const DecayResult d = check_main_lemma(inst.f, p, bank[wi], delta_fit, false);
        if (!d.report.pass) ++failures;
        worst_slope = std::max(worst_slope, d.slope);
      }
      const DecayResult dp = check_main_lemma(inst.f, 1.0, bank[wi], delta_fit, true);
      if (!dp.report.pass) ++failures;
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "5 weights x 5 instances, worst fitted slope %.3f",
                worst_slope);
  report(6, "truncated-average decay trend", failures == 0, buf);
}

void criterion_ao() {
  int conclusion_failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const AoOutcome good = check_almost_orthogonality(
        make_ao_instance(6, 5, 5, split_seed(kBaseSeed + 8, i), true));
    if (!good.hypothesis_ok || !good.report.pass) ++conclusion_failures;
  }
  int false_lemma_failures = 0;
  for (int i = 0; i < 200; ++i) {
    const AoOutcome bad = check_almost_orthogonality(
        make_ao_instance(6, 5, 5, split_seed(kBaseSeed + 9, i), false));
    if (!bad.hypothesis_ok && !bad.report.pass) ++false_lemma_failures;
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "1000 satisfying instances, %d conclusion failures; %d false "
                "lemma failures on violators",
                conclusion_failures, false_lemma_failures);
  report(8, "almost-orthogonality engine", conclusion_failures == 0 && false_lemma_failures == 0,
         buf);
}

void criterion_rc_brackets() {
  Grid g{1, 4, 3};
  WeightSpec ws;
  ws.kind = "random-a1";
  int failures = 0;
  for (int i = 0; i < 25; ++i) {
    const std::uint64_t seed = split_seed(kBaseSeed + 10, i);
    const Instance inst = generate_instance(g, ws, seed);
    for (const auto& r : check_rc_brackets(inst.f, inst.w, seed))
      if (!r.pass) ++failures;
  }
  report(9, "rc-norm bracket soundness", failures == 0,
         failures == 0 ? "25 instances: lower <= upper, degenerate at p=2 and "
                         "on single elements"
                       : std::to_string(failures) + " violations");
}

void criterion_determinism() {
  SuiteConfig cfg;
  cfg.grid = {1, 3, 2};
  cfg.R = 16;
  cfg.instances = 3;
  cfg.seed = kBaseSeed + 11;
  cfg.geometry_trials = 50;
  cfg.ao_instances = 2;
  const SuiteResult a = run_suite(cfg);
  const SuiteResult b = run_suite(cfg);
  report(10, "byte-identical reports for one seed", a.csv == b.csv && a.failures == 0,
         a.csv == b.csv ? "two runs, identical CSV bytes" : "CSV bytes differ");
}

void criterion_d2_smoke(MainLoopStats& st) {
  // d=2, J=3 subset of criteria 1 and 2
  Grid g{2, 3, 2};
  WeightSpec ws;
  ws.kind = "random-a1";
  for (int i = 0; i < 5; ++i) {
    const Instance inst = generate_instance(g, ws, split_seed(kBaseSeed + 12, i));
    const CzDecomposition cz = cz_run(inst.f, default_lambda(inst.f));
    for (const auto& r : check_identities(inst.f, cz))
      if (!r.pass) ++st.identity_failures;
    for (const auto& r : check_cuculescu(inst.f, cz.cuc, inst.w))
      if (!r.pass) ++st.inequality_failures;
    for (const auto& r : check_cz_proposition(inst.f, cz.cuc, cz.parts))
      if (!r.pass) ++st.inequality_failures;
    for (const auto& r : check_zeta(inst.f, cz, inst.w))
      if (!r.pass) ++st.inequality_failures;
  }
}

}  // namespace

int main() {
  std::printf("acceptance suite: d=1 J=4 m=3 R=64, %d instances (+ d=2 J=3 smoke)\n",
              kInstances);

  MainLoopStats st = main_instance_loop();
  criterion_d2_smoke(st);

  {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%d failures, worst residual %.3g",
                  st.identity_failures, st.worst_identity);
    report(1, "exact identities on 105 instances", st.identity_failures == 0, buf);
  }
  {
    report(2, "inequality suite on 105 instances", st.inequality_failures == 0,
           std::to_string(st.inequality_failures) + " violations beyond tolerance");
  }
  criterion_scalar_oracle();
  criterion_khintchine();
  criterion_geometry();
  criterion_decay();
  {
    Budgets budgets;
    const CheckReport refine =
        check_weak11_refinement(st.max_ratio_j5, st.max_ratio_j4, budgets);
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "%d budget violations; measured constant %.3f (J=4) vs %.3f "
                  "(J=5), band factor %.3f; worst per-instance factor %.3f",
                  st.weak_failures, st.max_ratio_j4, st.max_ratio_j5, refine.lhs,
                  st.worst_pair_factor);
    report(7, "end-to-end weak (1,1) with refinement stability",
           st.weak_failures == 0 && refine.pass, buf);
  }
  criterion_ao();
  criterion_rc_brackets();
  criterion_determinism();

  int failures = 0;
  for (const auto& c : criteria)
    if (!c.pass) ++failures;
  std::printf("%zu criteria, %d failed\n", criteria.size(), failures);
  return failures;
}
