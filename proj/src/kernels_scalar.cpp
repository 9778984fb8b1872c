#include "ncsq/kernels.hpp"

namespace ncsq::kernels {
namespace {

void s_add(double* dst, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] + b[i];
}

void s_sub(double* dst, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] - b[i];
}

void s_scale(double* dst, const double* a, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = s * a[i];
}

void s_axpy(double* dst, const double* x, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += s * x[i];
}

void s_caxpy(double* dst, const double* x, double sre, double sim,
             std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xre = x[2 * i], xim = x[2 * i + 1];
    dst[2 * i] += sre * xre - sim * xim;
    dst[2 * i + 1] += sre * xim + sim * xre;
  }
}

// dst += A*B per matrix; accumulation order over k is the contract the AVX2
// variant reproduces exactly.
void s_matmul_acc(double* dst, const double* a, const double* b, int m,
                  std::size_t count) {
  const std::size_t stride = static_cast<std::size_t>(2 * m * m);
  for (std::size_t c = 0; c < count; ++c) {
    const double* A = a + c * stride;
    const double* B = b + c * stride;
    double* D = dst + c * stride;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        double accre = D[2 * (i * m + j)];
        double accim = D[2 * (i * m + j) + 1];
        for (int k = 0; k < m; ++k) {
          const double are = A[2 * (i * m + k)], aim = A[2 * (i * m + k) + 1];
          const double bre = B[2 * (k * m + j)], bim = B[2 * (k * m + j) + 1];
          accre += are * bre - aim * bim;
          accim += are * bim + aim * bre;
        }
        D[2 * (i * m + j)] = accre;
        D[2 * (i * m + j) + 1] = accim;
      }
    }
  }
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops = {"scalar", s_add,   s_sub,       s_scale,
                          s_axpy,   s_caxpy, s_matmul_acc};
  return ops;
}

}  // namespace ncsq::kernels
