#include "ncsq/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ncsq/kernels.hpp"

namespace ncsq {

MatrixField MatrixField::zeros(const Grid& g, int samples) {
  MatrixField f;
  f.grid = g;
  f.samples = samples;
  f.data.assign(static_cast<std::size_t>(samples) * g.cells() * g.m * g.m, cplx(0.0));
  return f;
}

MatrixField MatrixField::constant(const Grid& g, const Mat& value) {
  MatrixField f = zeros(g);
  for (int y = 0; y < g.cells(); ++y) f.set_cell(0, y, value);
  return f;
}

Mat MatrixField::cell(int s, int y) const {
  Mat v(grid.m);
  const cplx* p = cell_ptr(s, y);
  std::copy(p, p + cell_stride(), v.data().begin());
  return v;
}

void MatrixField::set_cell(int s, int y, const Mat& v) {
  std::copy(v.data().begin(), v.data().end(), cell_ptr(s, y));
}

bool MatrixField::finite() const {
  for (const cplx& z : data)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

namespace {

void require_grid(const MatrixField& a, const MatrixField& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("field grid mismatch");
}

// resolves broadcast: returns output samples count
int broadcast_samples(const MatrixField& a, const MatrixField& b) {
  if (a.samples == b.samples) return a.samples;
  if (a.samples == 1) return b.samples;
  if (b.samples == 1) return a.samples;
  throw std::invalid_argument("field sample-axis mismatch");
}

}  // namespace

MatrixField operator+(const MatrixField& a, const MatrixField& b) {
  require_grid(a, b);
  const int s = broadcast_samples(a, b);
  if (a.samples == b.samples) {
    MatrixField r = MatrixField::zeros(a.grid, s);
    kernels::active().add(r.raw(), a.raw(), b.raw(), 2 * r.ncplx());
    return r;
  }
  const MatrixField& big = a.samples == s ? a : b;
  const MatrixField& one = a.samples == s ? b : a;
  MatrixField r = MatrixField::zeros(a.grid, s);
  const std::size_t block = 2 * one.ncplx();
  for (int i = 0; i < s; ++i)
    kernels::active().add(r.raw() + i * block, big.raw() + i * block, one.raw(), block);
  return r;
}

MatrixField operator-(const MatrixField& a, const MatrixField& b) {
  require_grid(a, b);
  const int s = broadcast_samples(a, b);
  if (a.samples == b.samples) {
    MatrixField r = MatrixField::zeros(a.grid, s);
    kernels::active().sub(r.raw(), a.raw(), b.raw(), 2 * r.ncplx());
    return r;
  }
  MatrixField r = MatrixField::zeros(a.grid, s);
  const std::size_t block = 2 * (static_cast<std::size_t>(a.grid.cells()) * a.cell_stride());
  for (int i = 0; i < s; ++i) {
    const double* pa = a.samples == 1 ? a.raw() : a.raw() + i * block;
    const double* pb = b.samples == 1 ? b.raw() : b.raw() + i * block;
    kernels::active().sub(r.raw() + i * block, pa, pb, block);
  }
  return r;
}

MatrixField scaled(const MatrixField& a, double s) {
  MatrixField r = MatrixField::zeros(a.grid, a.samples);
  kernels::active().scale(r.raw(), a.raw(), s, 2 * r.ncplx());
  return r;
}

void axpy(MatrixField& dst, double s, const MatrixField& x) {
  if (!dst.compatible(x)) throw std::invalid_argument("axpy: field mismatch");
  kernels::active().axpy(dst.raw(), x.raw(), s, 2 * dst.ncplx());
}

MatrixField mul(const MatrixField& a, const MatrixField& b) {
  require_grid(a, b);
  const int s = broadcast_samples(a, b);
  MatrixField r = MatrixField::zeros(a.grid, s);
  const std::size_t per_sample = static_cast<std::size_t>(a.grid.cells());
  const std::size_t block = 2 * per_sample * a.cell_stride();
  for (int i = 0; i < s; ++i) {
    const double* pa = a.samples == 1 ? a.raw() : a.raw() + i * block;
    const double* pb = b.samples == 1 ? b.raw() : b.raw() + i * block;
    kernels::active().matmul_acc(r.raw() + i * block, pa, pb, a.grid.m, per_sample);
  }
  return r;
}

MatrixField sandwich(const MatrixField& p, const MatrixField& f) {
  return mul(p, mul(f, p));
}

MatrixField adjoint_field(const MatrixField& a) {
  MatrixField r = MatrixField::zeros(a.grid, a.samples);
  const int m = a.grid.m;
  for (int s = 0; s < a.samples; ++s)
    for (int y = 0; y < a.grid.cells(); ++y) {
      const cplx* src = a.cell_ptr(s, y);
      cplx* dst = r.cell_ptr(s, y);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) dst[i * m + j] = std::conj(src[j * m + i]);
    }
  return r;
}

namespace {

void require_weight(const MatrixField& f, const Weight* w) {
  if (w && !(w->grid.d == f.grid.d && w->grid.J == f.grid.J))
    throw std::invalid_argument("weight grid mismatch");
}

}  // namespace

cplx trace(const MatrixField& f, const Weight* w) {
  require_weight(f, w);
  const double vol = f.grid.cell_vol();
  const int m = f.grid.m;
  cplx acc = 0.0;
  for (int s = 0; s < f.samples; ++s) {
    for (int y = 0; y < f.grid.cells(); ++y) {
      const cplx* p = f.cell_ptr(s, y);
      cplx tr = 0.0;
      for (int i = 0; i < m; ++i) tr += p[i * m + i];
      acc += (w ? w->values[y] : 1.0) * vol * tr;
    }
  }
  return acc / static_cast<double>(f.samples);
}

std::vector<double> all_singular_values(const MatrixField& f) {
  std::vector<double> sv;
  sv.reserve(static_cast<std::size_t>(f.samples) * f.grid.cells() * f.grid.m);
  for (int s = 0; s < f.samples; ++s)
    for (int y = 0; y < f.grid.cells(); ++y)
      for (double v : singular_values(f.cell(s, y))) sv.push_back(v);
  return sv;
}

double lp_norm(const MatrixField& f, double p, const Weight* w) {
  require_weight(f, w);
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  if (!f.finite()) throw std::invalid_argument("lp_norm: non-finite field");
  if (std::isinf(p)) return max_op_norm(f);
  const double vol = f.grid.cell_vol();
  double acc = 0.0;
  for (int s = 0; s < f.samples; ++s)
    for (int y = 0; y < f.grid.cells(); ++y) {
      double cell = 0.0;
      for (double v : singular_values(f.cell(s, y))) cell += std::pow(v, p);
      acc += (w ? w->values[y] : 1.0) * vol * cell;
    }
  return std::pow(acc / f.samples, 1.0 / p);
}

double max_op_norm(const MatrixField& f) {
  double r = 0.0;
  for (int s = 0; s < f.samples; ++s)
    for (int y = 0; y < f.grid.cells(); ++y)
      r = std::max(r, operator_norm(f.cell(s, y)));
  return r;
}

double distribution(const MatrixField& f, double lambda, const Weight* w) {
  require_weight(f, w);
  if (!(lambda > 0.0)) throw std::invalid_argument("distribution: lambda must be > 0");
  const double vol = f.grid.cell_vol();
  double acc = 0.0;
  for (int s = 0; s < f.samples; ++s)
    for (int y = 0; y < f.grid.cells(); ++y) {
      int count = 0;
      for (double v : singular_values(f.cell(s, y)))
        if (v > lambda) ++count;
      acc += (w ? w->values[y] : 1.0) * vol * count;
    }
  return acc / f.samples;
}

double weak_l1_quasinorm(const MatrixField& f, const Weight* w) {
  require_weight(f, w);
  // lambda * distribution(lambda) is piecewise linear increasing between the
  // singular values, so the sup is attained as a left limit at one of them:
  // value sigma counted with >= (strict threshold just below sigma).
  const double vol = f.grid.cell_vol();
  struct Entry {
    double sv, mass;
  };
  std::vector<Entry> entries;
  for (int s = 0; s < f.samples; ++s)
    for (int y = 0; y < f.grid.cells(); ++y) {
      const double mass = (w ? w->values[y] : 1.0) * vol / f.samples;
      for (double v : singular_values(f.cell(s, y)))
        if (v > 0.0) entries.push_back({v, mass});
    }
  if (entries.empty()) return 0.0;
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.sv > b.sv; });
  double best = 0.0, cum = 0.0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    cum += entries[i].mass;
    // at the last repeat of this value the cumulative mass counts all >= sv
    if (i + 1 < entries.size() && entries[i + 1].sv == entries[i].sv) continue;
    best = std::max(best, entries[i].sv * cum);
  }
  return best;
}

}  // namespace ncsq
