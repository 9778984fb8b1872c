#pragma once

#include <span>
#include <vector>

#include "ncsq/common.hpp"

namespace ncsq {

// Dense m-by-m complex matrix, row-major. Sized for functional calculus on
// small fibres (m <= 16), not for large-scale linear algebra.
class Mat {
 public:
  Mat() = default;
  explicit Mat(int m) : m_(m), a_(static_cast<std::size_t>(m) * m) {}

  static Mat identity(int m);
  static Mat zero(int m) { return Mat(m); }

  int dim() const { return m_; }
  cplx& at(int i, int j) { return a_[static_cast<std::size_t>(i) * m_ + j]; }
  const cplx& at(int i, int j) const { return a_[static_cast<std::size_t>(i) * m_ + j]; }
  const std::vector<cplx>& data() const { return a_; }
  std::vector<cplx>& data() { return a_; }

  Mat operator+(const Mat& o) const;
  Mat operator-(const Mat& o) const;
  Mat operator*(const Mat& o) const;
  Mat& operator+=(const Mat& o);
  Mat& operator-=(const Mat& o);
  Mat scaled(cplx s) const;
  Mat adjoint() const;
  Mat hermitized() const;  // (A + A*)/2

  cplx trace() const;
  double fro_norm() const;
  double max_abs() const;
  bool finite() const;

 private:
  int m_ = 0;
  std::vector<cplx> a_;
};

struct EigResult {
  std::vector<double> values;  // ascending
  Mat vectors;                 // columns are orthonormal eigenvectors
};

// Cyclic Jacobi for Hermitian matrices. The input is symmetrized first;
// non-finite entries are rejected.
EigResult eig_hermitian(const Mat& a, const Tolerances& t = tol());

enum class SpectralInterval {
  PosToLambda,   // (0, lambda]
  AboveLambda,   // (lambda, inf)
  ZeroToLambda,  // [0, lambda]
};

// Spectral projection with explicit kernel convention: eigenvalues within
// eig_zero * max(1, ||A||) of zero count as zero.
Mat spectral_projection(const Mat& a, SpectralInterval iv, double lambda,
                        const Tolerances& t = tol());
Mat kernel_projection(const Mat& a, const Tolerances& t = tol());

// (x* x)^{1/2}
Mat matrix_abs(const Mat& x);

double min_eigenvalue(const Mat& a);
bool psd_leq(const Mat& a, const Mat& b, double tolerance);

// Orthogonal projection onto the span of the ranges, by rank-revealing
// spectral cutoff on the sum.
Mat proj_join(std::span<const Mat> ps, const Tolerances& t = tol());

std::vector<double> singular_values(const Mat& x);  // descending
double schatten_norm(const Mat& x, double p);       // p in [1, inf]
double operator_norm(const Mat& x);

// hermitian part / anti-hermitian part (times -i) helpers
Mat hermitian_part(const Mat& x);
Mat antihermitian_part(const Mat& x);

}  // namespace ncsq
