#pragma once

#include <vector>

#include "ncsq/field.hpp"

namespace ncsq {

// Finite sequence (F_0, ..., F_K) of sample-free fields on one grid.
using FieldSequence = std::vector<MatrixField>;

// || (sum_k F_k^* F_k)^{1/2} ||_{p,w}
double column_norm(const FieldSequence& seq, double p, const Weight* w = nullptr);
// || (sum_k F_k F_k^*)^{1/2} ||_{p,w}
double row_norm(const FieldSequence& seq, double p, const Weight* w = nullptr);

// cellwise PSD square roots of the column/row Gram sums
MatrixField col_sqrt_field(const FieldSequence& seq);
MatrixField row_sqrt_field(const FieldSequence& seq);

struct Bracket {
  double lower = 0.0;
  double upper = 0.0;
  bool optimizer_converged = true;
};

struct RcOptions {
  int iters = 500;
  double huber = 1e-6;     // smoothing of the Schatten norm at p = 1
  int random_certs = 4;    // extra sampled dual certificates
  std::uint64_t seed = 1;
};

// Row-column norm. p >= 2: exact max(row, column), degenerate bracket.
// p < 2: certified bracket around the splitting infimum
//   inf { ||(G_k)||_{p,c} + ||(F_k - G_k)||_{p,r} } :
// upper from candidate splittings (all-column, all-row, hermitian split,
// subgradient optimizer), lower from dual certificates of the pairing
// sum_k phi_w(Y_k^* F_k) against max(column, row) p'-norms.
Bracket rc_norm(const FieldSequence& seq, double p, const Weight* w = nullptr,
                const RcOptions& opts = {});

// Weak L1 analogue: upper = min over the candidate splittings of
// weak(col sqrt of G) + weak(row sqrt of F-G); lower from the
// quasi-triangle inequality with factor 1/2. A certified bracket.
Bracket weak_rc_quasinorm(const FieldSequence& seq, const Weight* w = nullptr,
                          const RcOptions& opts = {});

}  // namespace ncsq
