#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ncsq/common.hpp"

namespace ncsq {

// Periodic dyadic grid on the torus [0,1)^d at resolution 2^{-J}. Cells are
// indexed in raster order; all coordinates are integers in [0, 2^J).
struct Grid {
  int d = 1;
  int J = 3;
  int m = 1;

  int side() const { return 1 << J; }
  int cells() const { return 1 << (d * J); }
  double cell_vol() const { return std::ldexp(1.0, -d * J); }

  std::array<int, 2> coords(int cell) const {
    if (d == 1) return {cell, 0};
    return {cell % side(), cell / side()};
  }
  int index(std::array<int, 2> c) const {
    const int s = side();
    int x = ((c[0] % s) + s) % s;
    if (d == 1) return x;
    int y = ((c[1] % s) + s) % s;
    return y * s + x;
  }

  void validate() const;
  bool operator==(const Grid&) const = default;
};

// Exact set of cells, bitset semantics.
class CellSet {
 public:
  CellSet() = default;
  explicit CellSet(int n) : n_(n), bits_((n + 63) / 64, 0) {}
  static CellSet all(int n) {
    CellSet s(n);
    for (int i = 0; i < n; ++i) s.set(i);
    return s;
  }

  int universe() const { return n_; }
  void set(int i) { bits_[i >> 6] |= (1ULL << (i & 63)); }
  void reset(int i) { bits_[i >> 6] &= ~(1ULL << (i & 63)); }
  bool test(int i) const { return (bits_[i >> 6] >> (i & 63)) & 1ULL; }

  int count() const;
  bool empty() const { return count() == 0; }

  CellSet& operator|=(const CellSet& o);
  CellSet& operator&=(const CellSet& o);
  CellSet complement() const;
  bool intersects(const CellSet& o) const;
  bool subset_of(const CellSet& o) const;
  bool operator==(const CellSet& o) const { return n_ == o.n_ && bits_ == o.bits_; }

  std::vector<int> members() const;  // ascending
  CellSet translated(const Grid& g, std::array<int, 2> shift) const;

 private:
  int n_ = 0;
  std::vector<std::uint64_t> bits_;
};

inline CellSet operator|(CellSet a, const CellSet& b) { return a |= b; }
inline CellSet operator&(CellSet a, const CellSet& b) { return a &= b; }

// Dyadic cube of generation k: side 2^{-k}, corner multi-index in cube units.
struct Cube {
  int gen = 0;
  std::array<int, 2> corner = {0, 0};
  bool operator==(const Cube&) const = default;
};

// The 2^{dk} cubes of generation k, raster order. Requires 0 <= k <= J.
std::vector<Cube> cubes(const Grid& g, int k);

Cube cube_of_cell(const Grid& g, int cell, int k);
CellSet cube_cells(const Grid& g, const Cube& q);

// Discrete ball of radius 2^{-k} around the center of `center`: all cells
// whose centers are within periodic Euclidean distance 2^{-k} (inclusive).
// Membership is decided in integer arithmetic, so it is exact.
CellSet ball(const Grid& g, int center, int k);

// Smallest k for which ball(.,k) is a proper subset of the torus.
int min_proper_ball_scale(const Grid& g);

// Boundary of a cell set: members with a face-neighbour outside.
CellSet discrete_boundary(const Grid& g, const CellSet& e);

// Union of generation-n cubes meeting both E and its complement
// (relative to containment: Q with Q∩E nonempty and Q not a subset of E).
CellSet q_boundary(const Grid& g, const CellSet& e, int n);

// Union of periodic translates K+y meeting both E and E^c. K must be
// nonempty; translates range over all cell-resolution shifts.
CellSet k_boundary(const Grid& g, const CellSet& e, const CellSet& k);

// Union over generation-n cubes meeting the discrete boundary of the ball
// B_k + center, intersected with the ball. Requires k < n.
CellSet annulus(const Grid& g, int center, int k, int n);

// Concentric 5-fold dilate of a dyadic cube, wrapped periodically and capped
// at the full torus once 5*2^{-k} >= 1.
CellSet dilate5(const Grid& g, const Cube& q);

// All centers x with y in annulus(x, k, n). Requires k < n.
CellSet j_set(const Grid& g, int y, int k, int n);

}  // namespace ncsq
