#pragma once

#include <array>
#include <optional>
#include <vector>

#include "ncsq/grid.hpp"

namespace ncsq {

// Empirical mass-concentration certificate: w(S)/w(Q) <= C * (mu(S)/mu(Q))^delta
// held on every sampled pair. A certificate, not an analytic exponent.
struct DeltaCertificate {
  double delta = 0.0;
  double c = 0.0;
  int samples = 0;
  std::uint64_t seed = 0;
};

struct Weight {
  Grid grid;                  // m is ignored; weights are scalar densities
  std::vector<double> values; // strictly positive, one per cell
  double a1 = 1.0;            // cached Muckenhoupt A1 constant
  std::optional<DeltaCertificate> delta;

  double at(int cell) const { return values[cell]; }
  double max_value() const;
  double min_value() const;
};

// max over dyadic cubes (all generations 0..J) of avg_Q w / min_Q w.
double a1_constant(const Grid& g, const std::vector<double>& w);

// max over dyadic cubes of (avg_Q w) * (avg_Q w^{1/(1-p)})^{p-1}; p > 1.
double ap_constant(const Weight& w, double p);

// sum over S of cell_vol * w(cell)
double weighted_measure(const CellSet& s, const Weight& w);

// Samples pairs (S, Q) with S a random union of cells inside a random dyadic
// cube Q, plus deterministic extreme singletons, and returns the largest
// delta on the grid {0.05, ..., 0.95} with the smallest C from a fixed fan
// {1, 1.25, 1.5, 2, 2.5, 3, 4} for which the bound holds on every pair.
// Falls back to delta = 0.05 with the required C when the fan is exhausted.
DeltaCertificate estimate_delta(const Weight& w, int samples, std::uint64_t seed);

Weight make_weight_constant(Grid g, double c);
// a on the generation-1 cube at the origin corner, b elsewhere
Weight make_weight_two_level(Grid g, double a, double b);
// w(x) = max(dist(x, x0), 2^{-J})^{-alpha}, periodic distance; 0 < alpha < d
Weight make_weight_power(Grid g, std::array<double, 2> x0, double alpha);
// rejection-sampled smooth log-normal weight with a1_constant <= cap
Weight make_weight_random_a1(Grid g, std::uint64_t seed, double cap);

}  // namespace ncsq
