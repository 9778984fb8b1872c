#pragma once

#include <vector>

#include "ncsq/field.hpp"
#include "ncsq/operators.hpp"
#include "ncsq/report.hpp"

namespace ncsq {

struct CuculescuOptions {
  // adds eps*identity with eps = 1e-10*lambda before the construction,
  // recovering the open-interval kernel convention for PSD inputs
  bool regularize = false;
};

// Decreasing projection fields q_0 = 1 >= q_1 >= ... >= q_J cutting the
// martingale at level lambda, with p_n = q_{n-1} - q_n the newly stopped
// pieces.
struct CuculescuResult {
  double lambda = 0.0;
  std::vector<MatrixField> q;  // index 0..J
  std::vector<MatrixField> p;  // index 0..J, p[0] identically zero
  const MatrixField& q_final() const { return q.back(); }
};

// Requires f PSD cellwise and the normalization cond_exp(f, 0) <= lambda
// (both verified; violations throw with the offending cell).
CuculescuResult cuculescu(const MatrixField& f, double lambda,
                          const CuculescuOptions& opts = {});

// f = g + b_d + b_off with
//   g     = q f q + sum_j p_j f_j p_j
//   b_d   = sum_j p_j (f - f_j) p_j
//   b_off = sum_j p_j (f - f_j) q_j + q_j (f - f_j) p_j
struct CzParts {
  MatrixField g, b_d, b_off;
  std::vector<MatrixField> b_d_n;    // per generation, index 0 zero
  std::vector<MatrixField> b_off_n;  // per generation, index 0 zero
};

CzParts cz_decompose(const MatrixField& f, const CuculescuResult& cuc);

struct CzDecomposition {
  CuculescuResult cuc;
  CzParts parts;
  MatrixField zeta;
};

CzDecomposition cz_run(const MatrixField& f, double lambda,
                       const CuculescuOptions& opts = {});

// Complement of the join of the stopped projections p_Q spread over the
// dilated cubes 5Q, at every cell.
MatrixField zeta_projection(const CuculescuResult& cuc);

// lambda * phi_w(1 - q) <= [w]_{A1} * ||f||_{1,w}
CheckReport weighted_cuculescu_bound(const CuculescuResult& cuc,
                                     const MatrixField& f, const Weight& w);

}  // namespace ncsq
