#pragma once

#include <cstdint>
#include <vector>

#include "ncsq/field.hpp"

namespace ncsq {

// Rademacher sign matrix: R samples by J+1 scales, entries +-1,
// reproducible from the seed.
struct SignSample {
  int R = 0;
  int K = 0;  // J + 1
  std::vector<std::int8_t> eps;
  std::uint64_t seed = 0;
  bool exhaustive = false;

  static SignSample random(int J, int R, std::uint64_t seed);
  // all 2^{J+1} patterns; guarded to J <= 4
  static SignSample all_patterns(int J);

  int sign(int s, int k) const { return eps[static_cast<std::size_t>(s) * K + k]; }
};

// Conditional expectation onto generation-k cubes: cells replaced by the
// cube average. Linear, positive, unital, trace preserving, idempotent.
MatrixField cond_exp(const MatrixField& f, int k);

// Average over the discrete ball of radius 2^{-k}. Unital and trace
// preserving by translation invariance.
MatrixField ball_avg(const MatrixField& f, int k);

// Average of f over annulus(x, k, n), normalized by the ball volume.
// Requires k < n.
MatrixField truncated_avg(const MatrixField& f, int k, int n);

// ball_avg - cond_exp at the same scale
MatrixField t_op(const MatrixField& f, int k);

// Rademacher linearization: sample s carries sum_k eps_k(s) * t_op(f, k).
// Input must be sample-free; output has the sign sample's R axis.
MatrixField linearize(const MatrixField& f, const SignSample& signs);

}  // namespace ncsq
