#include "ncsq/weight.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ncsq {

double Weight::max_value() const {
  return *std::max_element(values.begin(), values.end());
}

double Weight::min_value() const {
  return *std::min_element(values.begin(), values.end());
}

double a1_constant(const Grid& g, const std::vector<double>& w) {
  for (double v : w)
    if (!(v > 0.0)) throw std::invalid_argument("weight must be strictly positive");
  double worst = 1.0;
  for (int k = 0; k <= g.J; ++k) {
    for (const Cube& q : cubes(g, k)) {
      double sum = 0.0, lo = w[0];
      bool first = true;
      for (int cell : cube_cells(g, q).members()) {
        sum += w[cell];
        lo = first ? w[cell] : std::min(lo, w[cell]);
        first = false;
      }
      const int n = 1 << (g.d * (g.J - k));
      worst = std::max(worst, (sum / n) / lo);
    }
  }
  return worst;
}

double ap_constant(const Weight& w, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("ap_constant requires p > 1");
  const Grid& g = w.grid;
  double worst = 1.0;
  const double e = 1.0 / (1.0 - p);
  for (int k = 0; k <= g.J; ++k) {
    for (const Cube& q : cubes(g, k)) {
      double s1 = 0.0, s2 = 0.0;
      int n = 0;
      for (int cell : cube_cells(g, q).members()) {
        s1 += w.values[cell];
        s2 += std::pow(w.values[cell], e);
        ++n;
      }
      worst = std::max(worst, (s1 / n) * std::pow(s2 / n, p - 1.0));
    }
  }
  return worst;
}

double weighted_measure(const CellSet& s, const Weight& w) {
  double acc = 0.0;
  const double v = w.grid.cell_vol();
  for (int cell = 0; cell < w.grid.cells(); ++cell)
    if (s.test(cell)) acc += v * w.values[cell];
  return acc;
}

DeltaCertificate estimate_delta(const Weight& w, int samples, std::uint64_t seed) {
  if (samples < 100) throw std::invalid_argument("estimate_delta needs >= 100 samples");
  const Grid& g = w.grid;
  Rng rng(seed);

  // Each pair contributes (mass ratio, volume ratio).
  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(samples + g.cells());

  auto push_pair = [&](const std::vector<int>& s_cells, const std::vector<int>& q_cells) {
    double ws = 0.0, wq = 0.0;
    for (int c : s_cells) ws += w.values[c];
    for (int c : q_cells) wq += w.values[c];
    pairs.emplace_back(ws / wq, static_cast<double>(s_cells.size()) / q_cells.size());
  };

  // deterministic extremes: heaviest single cell within every cube
  for (int k = 0; k < g.J; ++k) {
    for (const Cube& q : cubes(g, k)) {
      auto qc = cube_cells(g, q).members();
      int hi = qc[0];
      for (int c : qc)
        if (w.values[c] > w.values[hi]) hi = c;
      push_pair({hi}, qc);
    }
  }

  for (int it = 0; it < samples; ++it) {
    const int k = static_cast<int>(rng.below(g.J));  // generations 0..J-1
    const auto qs = cubes(g, k);
    const Cube& q = qs[rng.below(qs.size())];
    auto qc = cube_cells(g, q).members();
    const double keep = rng.uniform(0.05, 0.6);
    std::vector<int> s_cells;
    for (int c : qc)
      if (rng.uniform() < keep) s_cells.push_back(c);
    if (s_cells.empty()) s_cells.push_back(qc[rng.below(qc.size())]);
    push_pair(s_cells, qc);
  }

  static const double kCFan[] = {1.0, 1.25, 1.5, 2.0, 2.5, 3.0, 4.0};
  auto c_needed = [&](double delta) {
    double c = 0.0;
    for (const auto& [mass, volume] : pairs)
      c = std::max(c, mass / std::pow(volume, delta));
    return c;
  };

  DeltaCertificate cert;
  cert.samples = samples;
  cert.seed = seed;
  for (double delta = 0.95; delta >= 0.049; delta -= 0.05) {
    const double need = c_needed(delta);
    for (double c : kCFan) {
      if (need <= c * (1.0 + 1e-12)) {
        cert.delta = delta;
        cert.c = c;
        return cert;
      }
    }
  }
  cert.delta = 0.05;
  cert.c = c_needed(0.05);
  return cert;
}

namespace {

Weight finalize(Grid g, std::vector<double> vals) {
  Weight w;
  w.grid = g;
  w.values = std::move(vals);
  w.a1 = a1_constant(g, w.values);
  return w;
}

}  // namespace

Weight make_weight_constant(Grid g, double c) {
  g.validate();
  if (!(c > 0.0)) throw std::invalid_argument("constant weight must be positive");
  return finalize(g, std::vector<double>(g.cells(), c));
}

Weight make_weight_two_level(Grid g, double a, double b) {
  g.validate();
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("two-level weight values must be positive");
  std::vector<double> vals(g.cells(), b);
  for (int c : cube_cells(g, Cube{1, {0, 0}}).members()) vals[c] = a;
  return finalize(g, std::move(vals));
}

Weight make_weight_power(Grid g, std::array<double, 2> x0, double alpha) {
  g.validate();
  if (!(alpha > 0.0) || alpha >= g.d)
    throw std::invalid_argument("power weight requires 0 < alpha < d");
  const double floor = std::ldexp(1.0, -g.J);
  std::vector<double> vals(g.cells());
  for (int cell = 0; cell < g.cells(); ++cell) {
    auto c = g.coords(cell);
    double d2 = 0.0;
    for (int ax = 0; ax < g.d; ++ax) {
      double x = (c[ax] + 0.5) * floor;
      double diff = std::abs(x - x0[ax]);
      diff = std::min(diff, 1.0 - diff);
      d2 += diff * diff;
    }
    vals[cell] = std::pow(std::max(std::sqrt(d2), floor), -alpha);
  }
  return finalize(g, std::move(vals));
}

Weight make_weight_random_a1(Grid g, std::uint64_t seed, double cap) {
  g.validate();
  if (!(cap >= 1.0)) throw std::invalid_argument("a1 cap must be >= 1");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Rng rng(split_seed(seed, attempt));
    // smooth log-field: random low-frequency bumps
    std::vector<double> logw(g.cells(), 0.0);
    const int n_bumps = 2 + static_cast<int>(rng.below(3));
    const double amp = 0.35;
    for (int b = 0; b < n_bumps; ++b) {
      const int center = static_cast<int>(rng.below(g.cells()));
      const double h = amp * rng.normal();
      const double width = rng.uniform(0.08, 0.3);
      auto cc = g.coords(center);
      for (int cell = 0; cell < g.cells(); ++cell) {
        auto c = g.coords(cell);
        double d2 = 0.0;
        for (int ax = 0; ax < g.d; ++ax) {
          double diff = std::abs(c[ax] - cc[ax]) / static_cast<double>(g.side());
          diff = std::min(diff, 1.0 - diff);
          d2 += diff * diff;
        }
        logw[cell] += h * std::exp(-d2 / (2.0 * width * width));
      }
    }
    std::vector<double> vals(g.cells());
    for (int i = 0; i < g.cells(); ++i) vals[i] = std::exp(logw[i]);
    if (a1_constant(g, vals) <= cap) return finalize(g, std::move(vals));
  }
  throw std::runtime_error("make_weight_random_a1: cap unreachable after 1000 attempts");
}

}  // namespace ncsq
