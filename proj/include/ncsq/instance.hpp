#pragma once

#include <string>

#include "ncsq/field.hpp"

namespace ncsq {

// Weight construction recipe, CLI-facing.
struct WeightSpec {
  std::string kind = "constant";  // constant | two-level | power | random-a1
  double a = 1.0, b = 1.0;        // constant c = a; two-level (a, b)
  std::array<double, 2> x0 = {0.5, 0.5};
  double alpha = 0.5;
  double cap = 4.0;

  Weight build(const Grid& g, std::uint64_t seed) const;
};

struct Instance {
  MatrixField f;  // PSD, sample-free
  Weight w;
};

// Deterministic PSD instance with spatially inhomogeneous mass, normalized
// so that cond_exp(f, 0) <= default_lambda(f). Strictly positive cellwise.
Instance generate_instance(const Grid& g, const WeightSpec& ws, std::uint64_t seed);

// Test-suite default threshold: max of the median cellwise trace over m and
// a 5% margin above the top eigenvalue of the global average (the latter
// keeps the normalization precondition satisfiable).
double default_lambda(const MatrixField& f);

// Coarsen one generation: cube averages at depth J-1 on a fresh grid.
// Preserves positivity, the global average, and the weight's mass profile.
Instance coarsen(const Instance& inst);

std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& text);

// write-then-rename; partial files never appear at `path`
void save_instance(const Instance& inst, const std::string& path);
Instance load_instance(const std::string& path);

}  // namespace ncsq
