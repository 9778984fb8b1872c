#pragma once

#include <vector>

#include "ncsq/grid.hpp"
#include "ncsq/matrix.hpp"
#include "ncsq/weight.hpp"

namespace ncsq {

// Matrix-valued function on the grid, optionally with a Rademacher sample
// axis. Layout: data[((s * cells) + y) * m*m + i*m + j]. The sample axis is
// averaged with uniform probability 1/samples by every trace and norm, so a
// field with samples == 1 behaves like a plain function.
struct MatrixField {
  Grid grid;
  int samples = 1;
  std::vector<cplx> data;

  static MatrixField zeros(const Grid& g, int samples = 1);
  static MatrixField constant(const Grid& g, const Mat& value);

  std::size_t cell_stride() const { return static_cast<std::size_t>(grid.m) * grid.m; }
  std::size_t ncplx() const { return data.size(); }
  double* raw() { return reinterpret_cast<double*>(data.data()); }
  const double* raw() const { return reinterpret_cast<const double*>(data.data()); }

  cplx* cell_ptr(int s, int y) {
    return data.data() + (static_cast<std::size_t>(s) * grid.cells() + y) * cell_stride();
  }
  const cplx* cell_ptr(int s, int y) const {
    return data.data() + (static_cast<std::size_t>(s) * grid.cells() + y) * cell_stride();
  }

  Mat cell(int s, int y) const;
  void set_cell(int s, int y, const Mat& v);
  Mat cell(int y) const { return cell(0, y); }
  void set_cell(int y, const Mat& v) { set_cell(0, y, v); }

  bool finite() const;
  bool compatible(const MatrixField& o) const {
    return grid == o.grid && samples == o.samples;
  }
};

// kernels-backed arithmetic; sample axes must match unless one side has
// samples == 1, which broadcasts.
MatrixField operator+(const MatrixField& a, const MatrixField& b);
MatrixField operator-(const MatrixField& a, const MatrixField& b);
MatrixField scaled(const MatrixField& a, double s);
void axpy(MatrixField& dst, double s, const MatrixField& x);

// cellwise matrix product a(y) * b(y)
MatrixField mul(const MatrixField& a, const MatrixField& b);
// p(y) * f(y) * p(y)
MatrixField sandwich(const MatrixField& p, const MatrixField& f);
MatrixField adjoint_field(const MatrixField& a);

// weighted trace: sum over cells of vol * w * tr(F), averaged over samples.
cplx trace(const MatrixField& f, const Weight* w = nullptr);

// (phi_w |F|^p)^{1/p}; p = inf gives max over cells/samples of the operator
// norm (weight independent).
double lp_norm(const MatrixField& f, double p, const Weight* w = nullptr);

// phi_w( chi_(lambda,inf)(|F|) ), sample axis averaged
double distribution(const MatrixField& f, double lambda, const Weight* w = nullptr);

// sup_lambda lambda * distribution(F, lambda); exact via the finite set of
// singular-value breakpoints (left limits realized by counting >= sigma).
double weak_l1_quasinorm(const MatrixField& f, const Weight* w = nullptr);

// all singular values of all cells/samples, unsorted
std::vector<double> all_singular_values(const MatrixField& f);

double max_op_norm(const MatrixField& f);

}  // namespace ncsq
