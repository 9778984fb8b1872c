// AVX2 variants of the flat-array kernels. Built with -mavx2 on x86-64 only;
// dispatch checks CPU support at runtime. Products use separate mul/add (no
// FMA) so every lane performs the same rounding sequence as the scalar
// reference, keeping the two paths bit-identical.

#include "ncsq/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__)

#include <immintrin.h>

namespace ncsq::kernels {
namespace {

void v_add(double* dst, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(dst + i, _mm256_add_pd(_mm256_loadu_pd(a + i),
                                            _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) dst[i] = a[i] + b[i];
}

void v_sub(double* dst, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(dst + i, _mm256_sub_pd(_mm256_loadu_pd(a + i),
                                            _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) dst[i] = a[i] - b[i];
}

void v_scale(double* dst, const double* a, double s, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(dst + i, _mm256_mul_pd(vs, _mm256_loadu_pd(a + i)));
  }
  for (; i < n; ++i) dst[i] = s * a[i];
}

void v_axpy(double* dst, const double* x, double s, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_loadu_pd(dst + i);
    d = _mm256_add_pd(d, _mm256_mul_pd(vs, _mm256_loadu_pd(x + i)));
    _mm256_storeu_pd(dst + i, d);
  }
  for (; i < n; ++i) dst[i] += s * x[i];
}

// One complex multiply-accumulate on a vector of 2 complex doubles:
// lanes [re0, im0, re1, im1].
inline __m256d cplx_mul(__m256d b, __m256d sre, __m256d sim) {
  __m256d t1 = _mm256_mul_pd(sre, b);
  __m256d bswap = _mm256_permute_pd(b, 0b0101);
  __m256d t2 = _mm256_mul_pd(sim, bswap);
  return _mm256_addsub_pd(t1, t2);
}

void v_caxpy(double* dst, const double* x, double sre, double sim,
             std::size_t n) {
  const __m256d vre = _mm256_set1_pd(sre);
  const __m256d vim = _mm256_set1_pd(sim);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d d = _mm256_loadu_pd(dst + 2 * i);
    d = _mm256_add_pd(d, cplx_mul(_mm256_loadu_pd(x + 2 * i), vre, vim));
    _mm256_storeu_pd(dst + 2 * i, d);
  }
  for (; i < n; ++i) {
    const double xre = x[2 * i], xim = x[2 * i + 1];
    dst[2 * i] += sre * xre - sim * xim;
    dst[2 * i + 1] += sre * xim + sim * xre;
  }
}

void v_matmul_acc(double* dst, const double* a, const double* b, int m,
                  std::size_t count) {
  const std::size_t stride = static_cast<std::size_t>(2 * m * m);
  for (std::size_t c = 0; c < count; ++c) {
    const double* A = a + c * stride;
    const double* B = b + c * stride;
    double* D = dst + c * stride;
    for (int i = 0; i < m; ++i) {
      int j = 0;
      for (; j + 2 <= m; j += 2) {
        __m256d acc = _mm256_loadu_pd(D + 2 * (i * m + j));
        for (int k = 0; k < m; ++k) {
          const __m256d are = _mm256_set1_pd(A[2 * (i * m + k)]);
          const __m256d aim = _mm256_set1_pd(A[2 * (i * m + k) + 1]);
          const __m256d bv = _mm256_loadu_pd(B + 2 * (k * m + j));
          acc = _mm256_add_pd(acc, cplx_mul(bv, are, aim));
        }
        _mm256_storeu_pd(D + 2 * (i * m + j), acc);
      }
      for (; j < m; ++j) {
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

const Ops* avx2_ops() {
  if (!__builtin_cpu_supports("avx2")) return nullptr;
  static const Ops ops = {"avx2", v_add,   v_sub,       v_scale,
                          v_axpy, v_caxpy, v_matmul_acc};
  return &ops;
}

}  // namespace ncsq::kernels

#else

namespace ncsq::kernels {
const Ops* avx2_ops() { return nullptr; }
}  // namespace ncsq::kernels

#endif
