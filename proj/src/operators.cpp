#include "ncsq/operators.hpp"

#include <stdexcept>

#include "ncsq/kernels.hpp"

namespace ncsq {

SignSample SignSample::random(int J, int R, std::uint64_t seed) {
  if (R < 1) throw std::invalid_argument("SignSample: R must be >= 1");
  SignSample s;
  s.R = R;
  s.K = J + 1;
  s.seed = seed;
  s.eps.resize(static_cast<std::size_t>(R) * s.K);
  Rng rng(seed);
  for (auto& e : s.eps) e = static_cast<std::int8_t>(rng.sign());
  return s;
}

SignSample SignSample::all_patterns(int J) {
  if (J > 4) throw std::invalid_argument("exhaustive signs limited to J <= 4");
  SignSample s;
  s.K = J + 1;
  s.R = 1 << s.K;
  s.exhaustive = true;
  s.eps.resize(static_cast<std::size_t>(s.R) * s.K);
  for (int r = 0; r < s.R; ++r)
    for (int k = 0; k < s.K; ++k)
      s.eps[static_cast<std::size_t>(r) * s.K + k] =
          (r >> k) & 1 ? 1 : -1;
  return s;
}

MatrixField cond_exp(const MatrixField& f, int k) {
  if (k < 0 || k > f.grid.J) throw std::invalid_argument("cond_exp: scale out of range");
  if (k == f.grid.J) return f;
  const Grid& g = f.grid;
  MatrixField r = MatrixField::zeros(g, f.samples);
  const std::size_t st = f.cell_stride();
  for (const Cube& q : cubes(g, k)) {
    const auto cells = cube_cells(g, q).members();
    const double inv = 1.0 / static_cast<double>(cells.size());
    for (int s = 0; s < f.samples; ++s) {
      std::vector<cplx> avg(st, cplx(0.0));
      for (int y : cells) {
        const cplx* p = f.cell_ptr(s, y);
        for (std::size_t i = 0; i < st; ++i) avg[i] += p[i];
      }
      for (std::size_t i = 0; i < st; ++i) avg[i] *= inv;
      for (int y : cells) {
        cplx* p = r.cell_ptr(s, y);
        for (std::size_t i = 0; i < st; ++i) p[i] = avg[i];
      }
    }
  }
  return r;
}

MatrixField ball_avg(const MatrixField& f, int k) {
  if (k < 0 || k > f.grid.J) throw std::invalid_argument("ball_avg: scale out of range");
  const Grid& g = f.grid;
  // translation invariance: one offset list serves every center
  const auto base = ball(g, 0, k).members();
  const double inv = 1.0 / static_cast<double>(base.size());
  std::vector<std::array<int, 2>> offsets;
  offsets.reserve(base.size());
  for (int c : base) offsets.push_back(g.coords(c));

  MatrixField r = MatrixField::zeros(g, f.samples);
  const std::size_t st = f.cell_stride();
  for (int s = 0; s < f.samples; ++s) {
    for (int y = 0; y < g.cells(); ++y) {
      const auto cy = g.coords(y);
      cplx* out = r.cell_ptr(s, y);
      for (const auto& off : offsets) {
        const int src = g.index({cy[0] + off[0], cy[1] + off[1]});
        const cplx* p = f.cell_ptr(s, src);
        for (std::size_t i = 0; i < st; ++i) out[i] += p[i];
      }
      for (std::size_t i = 0; i < st; ++i) out[i] *= inv;
    }
  }
  return r;
}

MatrixField truncated_avg(const MatrixField& f, int k, int n) {
  if (k >= n) throw std::invalid_argument("truncated_avg: requires k < n");
  const Grid& g = f.grid;
  const int ball_cells = ball(g, 0, k).count();
  const double inv = 1.0 / static_cast<double>(ball_cells);
  MatrixField r = MatrixField::zeros(g, f.samples);
  const std::size_t st = f.cell_stride();
  for (int y = 0; y < g.cells(); ++y) {
    const auto ann = annulus(g, y, k, n).members();
    for (int s = 0; s < f.samples; ++s) {
      cplx* out = r.cell_ptr(s, y);
      for (int src : ann) {
        const cplx* p = f.cell_ptr(s, src);
        for (std::size_t i = 0; i < st; ++i) out[i] += p[i];
      }
      for (std::size_t i = 0; i < st; ++i) out[i] *= inv;
    }
  }
  return r;
}

MatrixField t_op(const MatrixField& f, int k) {
  return ball_avg(f, k) - cond_exp(f, k);
}

MatrixField linearize(const MatrixField& f, const SignSample& signs) {
  if (f.samples != 1) throw std::invalid_argument("linearize: input must be sample-free");
  if (signs.K != f.grid.J + 1) throw std::invalid_argument("linearize: sign shape mismatch");
  std::vector<MatrixField> parts;
  parts.reserve(signs.K);
  for (int k = 0; k <= f.grid.J; ++k) parts.push_back(t_op(f, k));

  MatrixField out = MatrixField::zeros(f.grid, signs.R);
  const std::size_t block = 2 * parts[0].ncplx();  // doubles per sample
  for (int s = 0; s < signs.R; ++s) {
    double* dst = out.raw() + static_cast<std::size_t>(s) * block;
    for (int k = 0; k < signs.K; ++k) {
      kernels::active().axpy(dst, parts[k].raw(),
                             static_cast<double>(signs.sign(s, k)), block);
    }
  }
  return out;
}

}  // namespace ncsq
