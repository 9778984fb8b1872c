#include "ncsq/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ncsq {

Mat Mat::identity(int m) {
  Mat r(m);
  for (int i = 0; i < m; ++i) r.at(i, i) = 1.0;
  return r;
}

Mat Mat::operator+(const Mat& o) const {
  Mat r(m_);
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
  return r;
}

Mat Mat::operator-(const Mat& o) const {
  Mat r(m_);
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
  return r;
}

Mat& Mat::operator+=(const Mat& o) {
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

Mat& Mat::operator-=(const Mat& o) {
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

Mat Mat::operator*(const Mat& o) const {
  Mat r(m_);
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < m_; ++j) {
      cplx acc = 0.0;
      for (int k = 0; k < m_; ++k) acc += at(i, k) * o.at(k, j);
      r.at(i, j) = acc;
    }
  return r;
}

Mat Mat::scaled(cplx s) const {
  Mat r(m_);
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = s * a_[i];
  return r;
}

Mat Mat::adjoint() const {
  Mat r(m_);
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < m_; ++j) r.at(i, j) = std::conj(at(j, i));
  return r;
}

Mat Mat::hermitized() const {
  Mat r(m_);
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < m_; ++j)
      r.at(i, j) = 0.5 * (at(i, j) + std::conj(at(j, i)));
  return r;
}

cplx Mat::trace() const {
  cplx t = 0.0;
  for (int i = 0; i < m_; ++i) t += at(i, i);
  return t;
}

double Mat::fro_norm() const {
  double s = 0.0;
  for (const auto& z : a_) s += std::norm(z);
  return std::sqrt(s);
}

double Mat::max_abs() const {
  double s = 0.0;
  for (const auto& z : a_) s = std::max(s, std::abs(z));
  return s;
}

bool Mat::finite() const {
  for (const auto& z : a_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

EigResult eig_hermitian(const Mat& a, const Tolerances& t) {
  if (!a.finite()) throw std::invalid_argument("eig: non-finite entries");
  const int m = a.dim();
  Mat A = a.hermitized();
  Mat V = Mat::identity(m);
  if (m == 1) {
    return {{A.at(0, 0).real()}, V};
  }

  const double scale = A.fro_norm();
  const double thresh = t.jacobi_threshold * std::max(1.0, scale);

  for (int sweep = 0; sweep < t.jacobi_max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < m; ++p)
      for (int q = p + 1; q < m; ++q) off = std::max(off, std::abs(A.at(p, q)));
    if (off <= thresh) break;

    for (int p = 0; p < m; ++p) {
      for (int q = p + 1; q < m; ++q) {
        const cplx apq = A.at(p, q);
        const double r = std::abs(apq);
        if (r <= thresh) continue;
        const double app = A.at(p, p).real();
        const double aqq = A.at(q, q).real();
        // phase so the pivot becomes real, then a real Jacobi rotation
        const cplx phase = apq / r;  // e^{i alpha}
        const double tau = (aqq - app) / (2.0 * r);
        double tt;
        if (tau >= 0.0)
          tt = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
        else
          tt = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + tt * tt);
        const double s = tt * c;
        // G restricted to columns (p,q):
        //   col p <- c*col_p - s*conj(phase)*col_q
        //   col q <- s*phase*col_p + c*col_q
        const cplx gp = -s * std::conj(phase);
        const cplx gq = s * phase;
        for (int i = 0; i < m; ++i) {
          const cplx aip = A.at(i, p), aiq = A.at(i, q);
          A.at(i, p) = c * aip + gp * aiq;
          A.at(i, q) = gq * aip + c * aiq;
        }
        for (int j = 0; j < m; ++j) {
          const cplx apj = A.at(p, j), aqj = A.at(q, j);
          A.at(p, j) = c * apj + std::conj(gp) * aqj;
          A.at(q, j) = std::conj(gq) * apj + c * aqj;
        }
        for (int i = 0; i < m; ++i) {
          const cplx vip = V.at(i, p), viq = V.at(i, q);
          V.at(i, p) = c * vip + gp * viq;
          V.at(i, q) = gq * vip + c * viq;
        }
        A.at(p, q) = 0.0;
        A.at(q, p) = 0.0;
      }
    }
  }

  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(m);
  for (int i = 0; i < m; ++i) diag[i] = A.at(i, i).real();
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return diag[x] < diag[y]; });

  EigResult res;
  res.values.resize(m);
  res.vectors = Mat(m);
  for (int j = 0; j < m; ++j) {
    res.values[j] = diag[order[j]];
    for (int i = 0; i < m; ++i) res.vectors.at(i, j) = V.at(i, order[j]);
  }
  return res;
}

namespace {

Mat projector_from(const EigResult& e, const std::vector<char>& sel) {
  const int m = e.vectors.dim();
  Mat p(m);
  for (int k = 0; k < m; ++k) {
    if (!sel[k]) continue;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        p.at(i, j) += e.vectors.at(i, k) * std::conj(e.vectors.at(j, k));
  }
  return p;
}

double spectral_scale(const EigResult& e) {
  double s = 0.0;
  for (double v : e.values) s = std::max(s, std::abs(v));
  return s;
}

}  // namespace

Mat spectral_projection(const Mat& a, SpectralInterval iv, double lambda,
                        const Tolerances& t) {
  if (lambda < 0.0) throw std::invalid_argument("spectral_projection: lambda < 0");
  EigResult e = eig_hermitian(a, t);
  const double eps = t.eig_zero * std::max(1.0, spectral_scale(e));
  const int m = a.dim();
  std::vector<char> sel(m, 0);
  for (int k = 0; k < m; ++k) {
    const double v = e.values[k];
    const bool is_zero = std::abs(v) <= eps;
    switch (iv) {
      case SpectralInterval::PosToLambda:
        sel[k] = !is_zero && v > 0.0 && v <= lambda * (1.0 + 1e-12);
        break;
      case SpectralInterval::AboveLambda:
        sel[k] = !is_zero && v > lambda * (1.0 + 1e-12);
        break;
      case SpectralInterval::ZeroToLambda:
        sel[k] = is_zero || (v > 0.0 && v <= lambda * (1.0 + 1e-12));
        break;
    }
  }
  return projector_from(e, sel);
}

Mat kernel_projection(const Mat& a, const Tolerances& t) {
  EigResult e = eig_hermitian(a, t);
  const double eps = t.eig_zero * std::max(1.0, spectral_scale(e));
  std::vector<char> sel(a.dim(), 0);
  for (int k = 0; k < a.dim(); ++k) sel[k] = std::abs(e.values[k]) <= eps;
  return projector_from(e, sel);
}

Mat matrix_abs(const Mat& x) {
  if (!x.finite()) throw std::invalid_argument("abs: non-finite entries");
  const Mat xs = x.adjoint() * x;
  EigResult e = eig_hermitian(xs);
  const int m = x.dim();
  Mat r(m);
  for (int k = 0; k < m; ++k) {
    const double root = std::sqrt(std::max(0.0, e.values[k]));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        r.at(i, j) += root * e.vectors.at(i, k) * std::conj(e.vectors.at(j, k));
  }
  return r.hermitized();
}

double min_eigenvalue(const Mat& a) {
  EigResult e = eig_hermitian(a);
  return e.values.front();
}

bool psd_leq(const Mat& a, const Mat& b, double tolerance) {
  return min_eigenvalue(b - a) >= -tolerance;
}

Mat proj_join(std::span<const Mat> ps, const Tolerances& t) {
  if (ps.empty()) throw std::invalid_argument("proj_join: empty input");
  const int m = ps.front().dim();
  Mat s(m);
  for (const Mat& p : ps) s += p;
  EigResult e = eig_hermitian(s, t);
  std::vector<char> sel(m, 0);
  for (int k = 0; k < m; ++k) sel[k] = e.values[k] > t.join_cutoff;
  return projector_from(e, sel);
}

std::vector<double> singular_values(const Mat& x) {
  EigResult e = eig_hermitian(x.adjoint() * x);
  std::vector<double> sv(e.values.size());
  for (std::size_t i = 0; i < sv.size(); ++i) {
    sv[sv.size() - 1 - i] = std::sqrt(std::max(0.0, e.values[i]));
  }
  return sv;
}

double schatten_norm(const Mat& x, double p) {
  if (p < 1.0) throw std::invalid_argument("schatten_norm: p < 1 unsupported");
  if (!x.finite()) throw std::invalid_argument("schatten_norm: non-finite entries");
  const auto sv = singular_values(x);
  if (std::isinf(p)) return sv.empty() ? 0.0 : sv.front();
  double s = 0.0;
  for (double v : sv) s += std::pow(v, p);
  return std::pow(s, 1.0 / p);
}

double operator_norm(const Mat& x) {
  return schatten_norm(x, std::numeric_limits<double>::infinity());
}

Mat hermitian_part(const Mat& x) { return x.hermitized(); }

Mat antihermitian_part(const Mat& x) {
  Mat r(x.dim());
  for (int i = 0; i < x.dim(); ++i)
    for (int j = 0; j < x.dim(); ++j)
      r.at(i, j) = 0.5 * (x.at(i, j) - std::conj(x.at(j, i)));
  return r;
}

}  // namespace ncsq
