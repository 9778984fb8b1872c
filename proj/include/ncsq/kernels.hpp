#pragma once

#include <cstddef>

namespace ncsq::kernels {

// Elementwise kernels on flat double arrays. Complex data is interleaved
// re/im; `n` counts doubles for the real-scalar ops and complex entries for
// the complex ops. Every kernel has a scalar reference implementation and an
// AVX2 variant selected at runtime; the two are bit-identical (same per
// element operation order, no FMA contraction), which the equivalence tests
// assert with memcmp.
//
// Reductions (traces, norms, dot products) are deliberately not dispatched:
// they run scalar in fixed cell order so results do not depend on the
// instruction set or thread count.
struct Ops {
  const char* name;
  // dst = a + b / dst = a - b, n doubles
  void (*add)(double* dst, const double* a, const double* b, std::size_t n);
  void (*sub)(double* dst, const double* a, const double* b, std::size_t n);
  // dst = s * a, n doubles
  void (*scale)(double* dst, const double* a, double s, std::size_t n);
  // dst += s * x, n doubles
  void (*axpy)(double* dst, const double* x, double s, std::size_t n);
  // dst += (sre + i*sim) * x, n complex entries
  void (*caxpy)(double* dst, const double* x, double sre, double sim,
                std::size_t n);
  // batched complex matrix product: for each of `count` m-by-m row-major
  // complex matrices, dst += A * B
  void (*matmul_acc)(double* dst, const double* a, const double* b, int m,
                     std::size_t count);
};

const Ops& scalar_ops();
const Ops* avx2_ops();  // nullptr when this CPU lacks AVX2

// Active implementation. Honours NCSQ_SIMD=scalar|avx2|auto on first use.
const Ops& active();

// Force a specific implementation ("scalar", "avx2", "auto").
// Throws std::runtime_error on unknown or unsupported names.
void select(const char* name);

}  // namespace ncsq::kernels
