#include "ncsq/seqnorm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace ncsq {

namespace {

void require_seq(const FieldSequence& seq) {
  if (seq.empty()) throw std::invalid_argument("empty field sequence");
  for (const auto& f : seq) {
    if (!(f.grid == seq.front().grid) || f.samples != 1)
      throw std::invalid_argument("field sequence must share one grid, sample-free");
  }
}

// sum_k F_k^* F_k (column) or F_k F_k^* (row) at one cell
Mat gram_at(const FieldSequence& seq, int y, bool column) {
  const int m = seq.front().grid.m;
  Mat s(m);
  for (const auto& f : seq) {
    const Mat v = f.cell(y);
    s += column ? v.adjoint() * v : v * v.adjoint();
  }
  return s.hermitized();
}

Mat psd_sqrt(const Mat& s) {
  EigResult e = eig_hermitian(s);
  const int m = s.dim();
  Mat r(m);
  for (int k = 0; k < m; ++k) {
    const double root = std::sqrt(std::max(0.0, e.values[k]));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        r.at(i, j) += root * e.vectors.at(i, k) * std::conj(e.vectors.at(j, k));
  }
  return r.hermitized();
}

MatrixField gram_sqrt_field(const FieldSequence& seq, bool column) {
  require_seq(seq);
  const Grid& g = seq.front().grid;
  MatrixField out = MatrixField::zeros(g);
  for (int y = 0; y < g.cells(); ++y) out.set_cell(y, psd_sqrt(gram_at(seq, y, column)));
  return out;
}

double gram_norm(const FieldSequence& seq, double p, const Weight* w, bool column) {
  require_seq(seq);
  if (!(p >= 1.0)) throw std::invalid_argument("sequence norm: p must be >= 1");
  return lp_norm(gram_sqrt_field(seq, column), p, w);
}

FieldSequence seq_sub(const FieldSequence& a, const FieldSequence& b) {
  FieldSequence r;
  r.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r.push_back(a[i] - b[i]);
  return r;
}

FieldSequence zero_like(const FieldSequence& seq) {
  FieldSequence r;
  for (std::size_t k = 0; k < seq.size(); ++k)
    r.push_back(MatrixField::zeros(seq.front().grid));
  return r;
}

FieldSequence hermitian_split(const FieldSequence& seq) {
  const Grid& grid = seq.front().grid;
  FieldSequence r;
  for (const auto& f : seq) {
    MatrixField h = MatrixField::zeros(grid);
    for (int y = 0; y < grid.cells(); ++y) h.set_cell(y, hermitian_part(f.cell(y)));
    r.push_back(std::move(h));
  }
  return r;
}

// pairing sum_k phi_w(Y_k^* F_k), real part
double pairing(const FieldSequence& y, const FieldSequence& f, const Weight* w) {
  double acc = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k)
    acc += trace(mul(adjoint_field(y[k]), f[k]), w).real();
  return acc;
}

// V diag(coeff(sigma)) V^* from the spectral data of a Gram matrix; entries
// with sigma at or below the relative cutoff are dropped.
Mat spectral_weight(const EigResult& e, double cutoff,
                    const std::function<double(double)>& coeff) {
  const int m = e.vectors.dim();
  Mat wmat(m);
  for (int k = 0; k < m; ++k) {
    const double sigma = std::sqrt(std::max(0.0, e.values[k]));
    if (sigma <= cutoff) continue;
    const double c = coeff(sigma);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        wmat.at(i, j) += c * e.vectors.at(i, k) * std::conj(e.vectors.at(j, k));
  }
  return wmat;
}

// Schatten duality element of the stacked matrix, realized without forming
// the stack: Y_k = F_k * V g(sigma) V^* (column) or the mirrored left
// multiply (row), g(sigma) = sigma^{p-2}.
FieldSequence duality_certificate(const FieldSequence& f, double p, bool column) {
  const Grid& g = f.front().grid;
  FieldSequence y = zero_like(f);
  for (int cell = 0; cell < g.cells(); ++cell) {
    EigResult e = eig_hermitian(gram_at(f, cell, column));
    const double top = std::sqrt(std::max(0.0, e.values.back()));
    const double cut = 1e-8 * std::max(1e-300, top);
    const Mat wmat = spectral_weight(
        e, cut, [p](double s) { return std::pow(s, p - 2.0); });
    for (std::size_t k = 0; k < f.size(); ++k) {
      const Mat fk = f[k].cell(cell);
      y[k].set_cell(cell, column ? fk * wmat : wmat * fk);
    }
  }
  return y;
}

double dual_value(const FieldSequence& y, const FieldSequence& f, double pprime,
                  const Weight* w) {
  const double pair = std::abs(pairing(y, f, w));
  const double denom = std::max(gram_norm(y, pprime, w, true),
                                gram_norm(y, pprime, w, false));
  if (denom <= 0.0) return 0.0;
  return pair / denom;
}

struct SplitObjective {
  const FieldSequence* f;
  double p;
  double huber;
  const Weight* w;

  double true_value(const FieldSequence& g_part) const {
    return gram_norm(g_part, p, w, true) + gram_norm(seq_sub(*f, g_part), p, w, false);
  }

  double dpow(double sigma) const {
    if (p > 1.0) return p * std::pow(sigma, p - 1.0);
    return sigma <= huber ? sigma / huber : 1.0;  // Huber-smoothed |.|
  }

  // gradient of the smoothed objective with respect to the splitting G
  FieldSequence gradient(const FieldSequence& g_part) const {
    const Grid& grid = f->front().grid;
    const double vol = grid.cell_vol();
    const FieldSequence h_part = seq_sub(*f, g_part);
    FieldSequence grad = zero_like(*f);

    // outer chain factor (||.||_p over cells)^{1/p}: N^{1-p}; absent at p=1
    double oc = 1.0, orow = 1.0;
    if (p > 1.0) {
      const double nc = std::max(gram_norm(g_part, p, w, true), 1e-300);
      const double nr = std::max(gram_norm(h_part, p, w, false), 1e-300);
      oc = std::pow(nc, 1.0 - p) / p;
      orow = std::pow(nr, 1.0 - p) / p;
    }

    for (int y = 0; y < grid.cells(); ++y) {
      const double a = (w ? w->values[y] : 1.0) * vol;
      {
        EigResult e = eig_hermitian(gram_at(g_part, y, true));
        const double top = std::sqrt(std::max(0.0, e.values.back()));
        const Mat wmat = spectral_weight(
            e, 1e-9 * std::max(1e-300, top),
            [this](double s) { return dpow(s) / s; });
        for (std::size_t k = 0; k < g_part.size(); ++k) {
          Mat gk = g_part[k].cell(y) * wmat;
          Mat cur = grad[k].cell(y);
          grad[k].set_cell(y, cur + gk.scaled(a * oc));
        }
      }
      {
        EigResult e = eig_hermitian(gram_at(h_part, y, false));
        const double top = std::sqrt(std::max(0.0, e.values.back()));
        const Mat wmat = spectral_weight(
            e, 1e-9 * std::max(1e-300, top),
            [this](double s) { return dpow(s) / s; });
        for (std::size_t k = 0; k < h_part.size(); ++k) {
          Mat hk = wmat * h_part[k].cell(y);
          Mat cur = grad[k].cell(y);
          grad[k].set_cell(y, cur - hk.scaled(a * orow));
        }
      }
    }
    return grad;
  }
};

double seq_fro(const FieldSequence& seq) {
  double s = 0.0;
  for (const auto& f : seq)
    for (const auto& z : f.data) s += std::norm(z);
  return std::sqrt(s);
}

// keep-best subgradient descent; returns the best splitting found
struct OptResult {
  FieldSequence g;
  double value;
  bool finite;
};

OptResult optimize_splitting(const FieldSequence& seq, double p, const Weight* w,
                             const RcOptions& opts) {
  SplitObjective obj{&seq, p, opts.huber, w};
  const FieldSequence zero = zero_like(seq);
  const FieldSequence herm = hermitian_split(seq);

  OptResult best;
  best.g = seq;
  best.value = obj.true_value(seq);  // all-column
  best.finite = true;
  for (const FieldSequence* cand : {&zero, &herm}) {
    const double v = obj.true_value(*cand);
    if (v < best.value) {
      best.value = v;
      best.g = *cand;
    }
  }

  FieldSequence g_cur = best.g;
  FieldSequence grad = obj.gradient(g_cur);
  const double g0 = seq_fro(grad);
  const double step0 = g0 > 0.0 ? 0.25 * std::max(best.value, 1e-12) / g0 : 0.0;
  for (int it = 1; it <= opts.iters && step0 > 0.0; ++it) {
    const double step = step0 / std::sqrt(static_cast<double>(it));
    for (std::size_t k = 0; k < g_cur.size(); ++k) axpy(g_cur[k], -step, grad[k]);
    const double val = obj.true_value(g_cur);
    if (!std::isfinite(val)) {
      best.finite = false;
      break;
    }
    if (val < best.value) {
      best.value = val;
      best.g = g_cur;
    }
    grad = obj.gradient(g_cur);
  }
  return best;
}

}  // namespace

double column_norm(const FieldSequence& seq, double p, const Weight* w) {
  return gram_norm(seq, p, w, true);
}

double row_norm(const FieldSequence& seq, double p, const Weight* w) {
  return gram_norm(seq, p, w, false);
}

MatrixField col_sqrt_field(const FieldSequence& seq) { return gram_sqrt_field(seq, true); }
MatrixField row_sqrt_field(const FieldSequence& seq) { return gram_sqrt_field(seq, false); }

Bracket rc_norm(const FieldSequence& seq, double p, const Weight* w,
                const RcOptions& opts) {
  require_seq(seq);
  if (!(p >= 1.0)) throw std::invalid_argument("rc_norm: p must be >= 1");
  Bracket b;
  if (p >= 2.0) {
    b.lower = b.upper = std::max(column_norm(seq, p, w), row_norm(seq, p, w));
    return b;
  }

  OptResult opt = optimize_splitting(seq, p, w, opts);
  b.upper = opt.value;
  b.optimizer_converged = opt.finite;

  const double pprime =
      p == 1.0 ? std::numeric_limits<double>::infinity() : p / (p - 1.0);
  double lower = 0.0;
  lower = std::max(lower, dual_value(duality_certificate(seq, p, true), seq, pprime, w));
  lower = std::max(lower, dual_value(duality_certificate(seq, p, false), seq, pprime, w));
  Rng rng(opts.seed);
  for (int t = 0; t < opts.random_certs; ++t) {
    FieldSequence y;
    for (std::size_t k = 0; k < seq.size(); ++k) {
      MatrixField r = MatrixField::zeros(seq.front().grid);
      for (auto& z : r.data) z = rng.cnormal();
      y.push_back(std::move(r));
    }
    lower = std::max(lower, dual_value(y, seq, pprime, w));
  }
  b.lower = lower;
  return b;
}

Bracket weak_rc_quasinorm(const FieldSequence& seq, const Weight* w,
                          const RcOptions& opts) {
  require_seq(seq);
  Bracket b;

  bool all_zero = true;
  for (const auto& f : seq)
    for (const auto& z : f.data)
      if (z != cplx(0.0)) all_zero = false;
  if (all_zero) return b;

  auto weak_split = [&](const FieldSequence& g_part) {
    const FieldSequence h_part = seq_sub(seq, g_part);
    return weak_l1_quasinorm(col_sqrt_field(g_part), w) +
           weak_l1_quasinorm(row_sqrt_field(h_part), w);
  };

  double upper = std::min({weak_split(seq), weak_split(zero_like(seq)),
                           weak_split(hermitian_split(seq))});
  {
    RcOptions ro = opts;
    ro.iters = std::min(opts.iters, 150);
    OptResult opt = optimize_splitting(seq, 1.0, w, ro);
    upper = std::min(upper, weak_split(opt.g));
  }
  b.upper = upper;

  // quasi-triangle with factor 1/2: any splitting dominates half of every
  // single-entry weak norm
  double lower = 0.0;
  for (const auto& f : seq) lower = std::max(lower, weak_l1_quasinorm(f, w));
  b.lower = std::min(0.5 * lower, b.upper);
  return b;
}

}  // namespace ncsq
