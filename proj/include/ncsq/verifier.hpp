#pragma once

#include <vector>

#include "ncsq/cz.hpp"
#include "ncsq/instance.hpp"
#include "ncsq/report.hpp"
#include "ncsq/seqnorm.hpp"

namespace ncsq {

// Multiplicative budgets for the bounds the source estimates state only up
// to an absolute constant. Budgets are defaults under test, not claims.
struct Budgets {
  double weak11 = 64.0;      // lambda * tail <= weak11 * max([w]^2,[w]^3) * ||f||_1w
  double good_l2 = 16.0;     // randomized L2 bound constant
  double good_weak = 16.0;   // good-part tail constant
  double offdiag = -1.0;     // < 0 selects the default 5^d * 2^(d+2)
  double refine_factor = 2.0;
  double slope_slack = 0.5;  // delta_fit = slope_slack * certified delta
  double jset_volume = 8.0;  // discrete slack on the annulus-fibre bound

  double offdiag_for(int d) const {
    return offdiag > 0.0 ? offdiag : std::pow(5.0, d) * std::pow(2.0, d + 2);
  }
};

// ---- Cuculescu / CZ / zeta ------------------------------------------------

std::vector<CheckReport> check_cuculescu(const MatrixField& f,
                                         const CuculescuResult& cuc,
                                         const Weight& w);

std::vector<CheckReport> check_cz_proposition(const MatrixField& f,
                                              const CuculescuResult& cuc,
                                              const CzParts& parts);

std::vector<CheckReport> check_zeta(const MatrixField& f,
                                    const CzDecomposition& cz, const Weight& w);

// exact identities: reconstruction, sum p_n = 1 - q, E_j b_j = 0,
// p_n f_n q_n = 0, M_k b_n^d = M_{k,n} b_n^d, zeta kill for k >= n
std::vector<CheckReport> check_identities(const MatrixField& f,
                                          const CzDecomposition& cz);

CheckReport check_cadilhac(const MatrixField& f, const CuculescuResult& cuc,
                           int k, const CellSet& Kset, const CellSet& Eset);
// suite-facing wrapper: builds boundary-shaped (K, E) pairs internally
std::vector<CheckReport> check_cadilhac_suite(const MatrixField& f,
                                              const CuculescuResult& cuc,
                                              std::uint64_t seed);

CheckReport check_offdiag_sum(const CzDecomposition& cz, const MatrixField& f,
                              const Weight& w, const Budgets& b);

// ---- decay of the truncated averages --------------------------------------

struct DecayResult {
  CheckReport report;
  std::vector<int> gaps;
  std::vector<double> log2_ratio;
  double slope = 0.0;
};

// log2 of ||M_{k,n} h||^p_{p,w} / ||h||^p_{p,w} over the achievable gaps
// n - k; pass iff the fitted slope is <= -delta_fit. `positive_variant`
// compares against ||E_n h||^p instead.
DecayResult check_main_lemma(const MatrixField& h, double p, const Weight& w,
                             double delta_fit, bool positive_variant);

// ---- almost orthogonality --------------------------------------------------

struct AoInstance {
  std::vector<Mat> s;                 // operators on C^D
  std::vector<std::vector<cplx>> u;   // h = sum_n u_n
  std::vector<std::vector<cplx>> v;
  std::vector<double> kappa;          // kappa(j), j = j_min .. j_min+size-1
  int j_min = 0;

  double kappa_at(int j) const {
    const int idx = j - j_min;
    if (idx < 0 || idx >= static_cast<int>(kappa.size())) return 0.0;
    return kappa[idx];
  }
};

struct AoOutcome {
  CheckReport report;
  bool hypothesis_ok = false;
};

AoOutcome check_almost_orthogonality(const AoInstance& inst);

// random instance with S_k rescaled so the hypothesis holds
AoInstance make_ao_instance(int dim, int n_ops, int n_vecs, std::uint64_t seed,
                            bool satisfy_hypothesis);

// the engine applied to S_k = zeta (M_k - E_k)(.) zeta, u_n = b_n^d,
// v_n = lambda p_n, kappa(j) = C 2^{-|j| delta_fit} with C measured
AoOutcome check_ao_bd_pipeline(const MatrixField& f, const CzDecomposition& cz,
                               const Weight& w, double delta_fit);

// ---- linearized square function -------------------------------------------

std::vector<CheckReport> check_good_part(const MatrixField& f,
                                         const CzDecomposition& cz,
                                         const Weight& w, const SignSample& signs,
                                         const Budgets& b);

struct Weak11Result {
  std::vector<CheckReport> reports;
  double max_ratio = 0.0;  // max over the sweep of lhs / ||f||_{1,w}
};

Weak11Result check_weak11(const MatrixField& f, const Weight& w,
                          const SignSample& signs, const Budgets& b,
                          int sweep_points, std::uint64_t seed);

CheckReport check_weak11_refinement(double ratio_fine, double ratio_coarse,
                                    const Budgets& b);

std::vector<CheckReport> check_strong_pp(const MatrixField& f, double p,
                                         const Weight& w, const SignSample& signs,
                                         std::uint64_t seed);

// exact Rademacher p=2 identity under exhaustive signs (J <= 4)
CheckReport check_khintchine_p2(const MatrixField& f, const Weight& w);

// ---- geometry and brackets -------------------------------------------------

std::vector<CheckReport> check_geometry(const Grid& g, int trials,
                                        std::uint64_t seed,
                                        const Budgets& b);

std::vector<CheckReport> check_rc_brackets(const MatrixField& f,
                                           const Weight& w, std::uint64_t seed);

}  // namespace ncsq
