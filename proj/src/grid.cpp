#include "ncsq/grid.hpp"

#include <bit>
#include <stdexcept>

namespace ncsq {

void Grid::validate() const {
  if (d < 1 || d > 2) throw std::invalid_argument("grid dimension must be 1 or 2");
  if (J < 1 || J > 12) throw std::invalid_argument("grid depth J must be in [1, 12]");
  if (m < 1 || m > 16) throw std::invalid_argument("matrix size m must be in [1, 16]");
}

int CellSet::count() const {
  int c = 0;
  for (auto w : bits_) c += std::popcount(w);
  return c;
}

CellSet& CellSet::operator|=(const CellSet& o) {
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= o.bits_[i];
  return *this;
}

CellSet& CellSet::operator&=(const CellSet& o) {
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= o.bits_[i];
  return *this;
}

CellSet CellSet::complement() const {
  CellSet r(n_);
  for (std::size_t i = 0; i < bits_.size(); ++i) r.bits_[i] = ~bits_[i];
  // mask the tail
  const int rem = n_ & 63;
  if (rem) r.bits_.back() &= (1ULL << rem) - 1;
  return r;
}

bool CellSet::intersects(const CellSet& o) const {
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] & o.bits_[i]) return true;
  return false;
}

bool CellSet::subset_of(const CellSet& o) const {
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] & ~o.bits_[i]) return false;
  return true;
}

std::vector<int> CellSet::members() const {
  std::vector<int> v;
  v.reserve(count());
  for (int i = 0; i < n_; ++i)
    if (test(i)) v.push_back(i);
  return v;
}

CellSet CellSet::translated(const Grid& g, std::array<int, 2> shift) const {
  CellSet r(n_);
  for (int i = 0; i < n_; ++i) {
    if (!test(i)) continue;
    auto c = g.coords(i);
    r.set(g.index({c[0] + shift[0], c[1] + shift[1]}));
  }
  return r;
}

std::vector<Cube> cubes(const Grid& g, int k) {
  if (k < 0 || k > g.J) throw std::invalid_argument("cube generation out of range");
  const int n = 1 << k;
  std::vector<Cube> out;
  out.reserve(g.d == 1 ? n : n * n);
  if (g.d == 1) {
    for (int x = 0; x < n; ++x) out.push_back({k, {x, 0}});
  } else {
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) out.push_back({k, {x, y}});
  }
  return out;
}

Cube cube_of_cell(const Grid& g, int cell, int k) {
  if (k < 0 || k > g.J) throw std::invalid_argument("cube generation out of range");
  auto c = g.coords(cell);
  const int shift = g.J - k;
  return {k, {c[0] >> shift, c[1] >> shift}};
}

CellSet cube_cells(const Grid& g, const Cube& q) {
  const int s = 1 << (g.J - q.gen);  // cells per axis
  CellSet r(g.cells());
  if (g.d == 1) {
    const int x0 = q.corner[0] * s;
    for (int x = 0; x < s; ++x) r.set(x0 + x);
  } else {
    const int x0 = q.corner[0] * s, y0 = q.corner[1] * s;
    for (int y = 0; y < s; ++y)
      for (int x = 0; x < s; ++x) r.set(g.index({x0 + x, y0 + y}));
  }
  return r;
}

namespace {

// squared wrapped axis distance in cell units
inline long long axis_dist2(int a, int b, int side) {
  int diff = a - b;
  if (diff < 0) diff = -diff;
  if (diff > side - diff) diff = side - diff;
  return static_cast<long long>(diff) * diff;
}

}  // namespace

CellSet ball(const Grid& g, int center, int k) {
  if (k < 0 || k > g.J) throw std::invalid_argument("ball scale out of range");
  // radius 2^{-k}; in cell units the squared radius is 4^{J-k}
  const long long r2 = 1LL << (2 * (g.J - k));
  const auto c = g.coords(center);
  const int s = g.side();
  CellSet out(g.cells());
  for (int i = 0; i < g.cells(); ++i) {
    const auto p = g.coords(i);
    long long d2 = axis_dist2(p[0], c[0], s);
    if (g.d == 2) d2 += axis_dist2(p[1], c[1], s);
    if (d2 <= r2) out.set(i);
  }
  return out;
}

int min_proper_ball_scale(const Grid& g) {
  for (int k = 0; k <= g.J; ++k) {
    if (ball(g, 0, k).count() < g.cells()) return k;
  }
  return g.J;
}

CellSet discrete_boundary(const Grid& g, const CellSet& e) {
  CellSet out(g.cells());
  const int s = g.side();
  for (int i = 0; i < g.cells(); ++i) {
    if (!e.test(i)) continue;
    auto c = g.coords(i);
    bool bdry = false;
    for (int ax = 0; ax < g.d && !bdry; ++ax) {
      for (int dir = -1; dir <= 1 && !bdry; dir += 2) {
        auto nb = c;
        nb[ax] = ((nb[ax] + dir) % s + s) % s;
        if (!e.test(g.index(nb))) bdry = true;
      }
    }
    if (bdry) out.set(i);
  }
  return out;
}

CellSet q_boundary(const Grid& g, const CellSet& e, int n) {
  if (n < 0 || n > g.J) throw std::invalid_argument("generation out of range");
  CellSet out(g.cells());
  for (const Cube& q : cubes(g, n)) {
    CellSet qc = cube_cells(g, q);
    if (qc.intersects(e) && !qc.subset_of(e)) out |= qc;
  }
  return out;
}

CellSet k_boundary(const Grid& g, const CellSet& e, const CellSet& k) {
  if (k.empty()) throw std::invalid_argument("K-boundary requires nonempty K");
  const CellSet ec = e.complement();
  CellSet out(g.cells());
  for (int y = 0; y < g.cells(); ++y) {
    auto sh = g.coords(y);
    CellSet t = k.translated(g, sh);
    if (t.intersects(e) && t.intersects(ec)) out |= t;
  }
  return out;
}

CellSet annulus(const Grid& g, int center, int k, int n) {
  if (k >= n) throw std::invalid_argument("annulus requires k < n");
  if (n > g.J || k < 0) throw std::invalid_argument("annulus scales out of range");
  const CellSet b = ball(g, center, k);
  const CellSet bdry = discrete_boundary(g, b);
  CellSet out(g.cells());
  if (bdry.empty()) return out;
  for (const Cube& q : cubes(g, n)) {
    CellSet qc = cube_cells(g, q);
    if (qc.intersects(bdry)) out |= (qc & b);
  }
  return out;
}

CellSet dilate5(const Grid& g, const Cube& q) {
  const int s = 1 << (g.J - q.gen);  // cells per axis of the cube
  if (5LL * s >= g.side()) return CellSet::all(g.cells());
  CellSet out(g.cells());
  const int x0 = q.corner[0] * s - 2 * s;
  const int y0 = q.corner[1] * s - 2 * s;
  if (g.d == 1) {
    for (int x = 0; x < 5 * s; ++x) out.set(g.index({x0 + x, 0}));
  } else {
    for (int y = 0; y < 5 * s; ++y)
      for (int x = 0; x < 5 * s; ++x) out.set(g.index({x0 + x, y0 + y}));
  }
  return out;
}

CellSet j_set(const Grid& g, int y, int k, int n) {
  if (k >= n) throw std::invalid_argument("j_set requires k < n");
  CellSet out(g.cells());
  for (int x = 0; x < g.cells(); ++x) {
    if (annulus(g, x, k, n).test(y)) out.set(x);
  }
  return out;
}

}  // namespace ncsq
