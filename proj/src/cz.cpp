#include "ncsq/cz.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ncsq {

namespace {

void require_input(const MatrixField& f, double lambda) {
  if (f.samples != 1) throw std::invalid_argument("cuculescu: input must be sample-free");
  if (!(lambda > 0.0)) throw std::invalid_argument("cuculescu: lambda must be > 0");
  if (!f.finite()) throw std::invalid_argument("cuculescu: non-finite field");
  const double scale = std::max(1.0, max_op_norm(f));
  for (int y = 0; y < f.grid.cells(); ++y) {
    if (min_eigenvalue(f.cell(y)) < -tol().psd_order * scale)
      throw std::invalid_argument("cuculescu: input not PSD at cell " + std::to_string(y));
  }
  const MatrixField e0 = cond_exp(f, 0);
  for (int y = 0; y < f.grid.cells(); ++y) {
    Mat gap = Mat::identity(f.grid.m).scaled(lambda) - e0.cell(y);
    if (min_eigenvalue(gap) < -tol().psd_order * scale)
      throw std::invalid_argument(
          "cuculescu: normalization E_0(f) <= lambda violated at cell " + std::to_string(y));
  }
}

}  // namespace

CuculescuResult cuculescu(const MatrixField& f_in, double lambda,
                          const CuculescuOptions& opts) {
  require_input(f_in, lambda);
  const Grid& g = f_in.grid;

  MatrixField f = f_in;
  if (opts.regularize) {
    const MatrixField eps = MatrixField::constant(g, Mat::identity(g.m).scaled(1e-10 * lambda));
    f = f + eps;
  }

  CuculescuResult res;
  res.lambda = lambda;
  res.q.push_back(MatrixField::constant(g, Mat::identity(g.m)));
  res.p.push_back(MatrixField::zeros(g));

  for (int n = 1; n <= g.J; ++n) {
    const MatrixField en = cond_exp(f, n);
    const MatrixField& q_prev = res.q.back();
    MatrixField q_n = MatrixField::zeros(g);
    for (const Cube& cube : cubes(g, n)) {
      const auto cells = cube_cells(g, cube).members();
      const int rep = cells.front();
      // q_{n-1} and E_n(f) are both constant on this cube
      const Mat qp = q_prev.cell(rep);
      const Mat a = (qp * en.cell(rep) * qp).hermitized();
      // push the complement of q_{n-1} above the cut so the projection stays
      // inside range(q_{n-1})
      const double shift = 2.0 * std::max(lambda, operator_norm(a));
      const Mat b = a + (Mat::identity(g.m) - qp).scaled(shift);
      Mat proj = spectral_projection(b, SpectralInterval::ZeroToLambda, lambda);
      // a genuine stop changes the rank, so the distance jumps to >= 1;
      // anything smaller is eigensolver noise and the cube did not stop
      if ((proj - qp).fro_norm() <= 1e-10) proj = qp;
      for (int y : cells) q_n.set_cell(y, proj);
    }
    res.p.push_back(res.q.back() - q_n);
    res.q.push_back(std::move(q_n));
  }
  return res;
}

CzParts cz_decompose(const MatrixField& f, const CuculescuResult& cuc) {
  const Grid& g = f.grid;
  CzParts parts;
  parts.b_d_n.assign(1, MatrixField::zeros(g));
  parts.b_off_n.assign(1, MatrixField::zeros(g));
  parts.g = sandwich(cuc.q_final(), f);
  parts.b_d = MatrixField::zeros(g);
  parts.b_off = MatrixField::zeros(g);
  for (int n = 1; n <= g.J; ++n) {
    const MatrixField fn = cond_exp(f, n);
    const MatrixField diff = f - fn;
    const MatrixField& pn = cuc.p[n];
    const MatrixField& qn = cuc.q[n];
    MatrixField bd = sandwich(pn, diff);
    MatrixField boff = mul(pn, mul(diff, qn)) + mul(qn, mul(diff, pn));
    parts.g = parts.g + sandwich(pn, fn);
    parts.b_d = parts.b_d + bd;
    parts.b_off = parts.b_off + boff;
    parts.b_d_n.push_back(std::move(bd));
    parts.b_off_n.push_back(std::move(boff));
  }
  return parts;
}

MatrixField zeta_projection(const CuculescuResult& cuc) {
  const Grid& g = cuc.q.front().grid;
  // per cell, the list of stopped projections whose 5Q covers it
  std::vector<std::vector<Mat>> covering(g.cells());
  for (int k = 1; k <= g.J; ++k) {
    const MatrixField& pk = cuc.p[k];
    for (const Cube& q : cubes(g, k)) {
      const int rep = cube_cells(g, q).members().front();
      const Mat pq = pk.cell(rep);
      if (pq.trace().real() < 0.5) continue;  // p_Q = 0, join unchanged
      for (int cell : dilate5(g, q).members()) covering[cell].push_back(pq);
    }
  }
  MatrixField zeta = MatrixField::zeros(g);
  const Mat id = Mat::identity(g.m);
  for (int cell = 0; cell < g.cells(); ++cell) {
    if (covering[cell].empty()) {
      zeta.set_cell(cell, id);
    } else {
      zeta.set_cell(cell, id - proj_join(covering[cell]));
    }
  }
  return zeta;
}

CzDecomposition cz_run(const MatrixField& f, double lambda,
                       const CuculescuOptions& opts) {
  CzDecomposition out;
  out.cuc = cuculescu(f, lambda, opts);
  out.parts = cz_decompose(f, out.cuc);
  out.zeta = zeta_projection(out.cuc);
  return out;
}

CheckReport weighted_cuculescu_bound(const CuculescuResult& cuc,
                                     const MatrixField& f, const Weight& w) {
  const Grid& g = f.grid;
  CheckReport r;
  r.check_id = "cuculescu_weighted";
  r.d = g.d;
  r.J = g.J;
  r.m = g.m;
  r.lambda = cuc.lambda;
  const MatrixField one_minus_q =
      MatrixField::constant(g, Mat::identity(g.m)) - cuc.q_final();
  r.lhs = cuc.lambda * trace(one_minus_q, &w).real();
  r.rhs = w.a1 * lp_norm(f, 1.0, &w);
  r.finalize(1e-9);
  return r;
}

}  // namespace ncsq
