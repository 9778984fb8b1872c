#include "ncsq/instance.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "ncsq/operators.hpp"

namespace ncsq {

Weight WeightSpec::build(const Grid& g, std::uint64_t seed) const {
  Grid wg = g;
  if (kind == "constant") return make_weight_constant(wg, a);
  if (kind == "two-level") return make_weight_two_level(wg, a, b);
  if (kind == "power") return make_weight_power(wg, x0, alpha);
  if (kind == "random-a1") return make_weight_random_a1(wg, seed, cap);
  throw ConfigError("unknown weight kind '" + kind + "'");
}

Instance generate_instance(const Grid& g, const WeightSpec& ws, std::uint64_t seed) {
  Grid grid = g;
  grid.validate();
  Rng rng(split_seed(seed, 0));

  // spatial mass profile: base level 1 with a few heavy dyadic cubes and a
  // few light cells, so the stopping time is nondegenerate
  std::vector<double> profile(grid.cells(), 1.0);
  const int n_spikes = 1 + static_cast<int>(rng.below(3));
  for (int sp = 0; sp < n_spikes; ++sp) {
    const int gen = std::max(1, grid.J - 1 - static_cast<int>(rng.below(2)));
    const auto qs = cubes(grid, gen);
    const Cube& q = qs[rng.below(qs.size())];
    const double height = rng.uniform(3.0, 7.0);
    for (int c : cube_cells(grid, q).members()) profile[c] = height;
  }
  const int n_dips = grid.cells() / 4;
  for (int dp = 0; dp < n_dips; ++dp) {
    profile[rng.below(grid.cells())] = rng.uniform(0.05, 0.4);
  }

  MatrixField f = MatrixField::zeros(grid);
  const double sigma = 1.0 / std::sqrt(static_cast<double>(grid.m));
  for (int y = 0; y < grid.cells(); ++y) {
    Mat b(grid.m);
    for (auto& z : b.data()) z = sigma * rng.cnormal();
    Mat cell = (b * b.adjoint()).scaled(0.35) + Mat::identity(grid.m).scaled(0.65);
    f.set_cell(y, cell.scaled(profile[y]).hermitized());
  }

  Instance inst;
  inst.f = std::move(f);
  inst.w = ws.build(grid, split_seed(seed, 1));
  return inst;
}

double default_lambda(const MatrixField& f) {
  std::vector<double> traces;
  traces.reserve(f.grid.cells());
  for (int y = 0; y < f.grid.cells(); ++y)
    traces.push_back(f.cell(y).trace().real() / f.grid.m);
  std::sort(traces.begin(), traces.end());
  const double median = traces[traces.size() / 2];
  const MatrixField e0 = cond_exp(f, 0);
  EigResult e = eig_hermitian(e0.cell(0));
  return std::max(median, 1.05 * e.values.back());
}

Instance coarsen(const Instance& inst) {
  const Grid& g = inst.f.grid;
  if (g.J < 2) throw std::invalid_argument("coarsen: depth would drop below 1");
  Grid cg = g;
  cg.J = g.J - 1;
  Instance out;
  out.f = MatrixField::zeros(cg);
  Weight w;
  w.grid = cg;
  w.values.assign(cg.cells(), 0.0);
  for (int yc = 0; yc < cg.cells(); ++yc) {
    const auto cc = cg.coords(yc);
    Mat acc(g.m);
    double wacc = 0.0;
    int n = 0;
    for (int dx = 0; dx < 2; ++dx) {
      for (int dy = 0; dy < (g.d == 2 ? 2 : 1); ++dy) {
        const int yf = g.index({2 * cc[0] + dx, 2 * cc[1] + dy});
        acc += inst.f.cell(yf);
        wacc += inst.w.values[yf];
        ++n;
      }
    }
    out.f.set_cell(yc, acc.scaled(1.0 / n));
    w.values[yc] = wacc / n;
  }
  w.a1 = a1_constant(cg, w.values);
  out.w = std::move(w);
  return out;
}

std::string instance_to_json(const Instance& inst) {
  nlohmann::json j;
  j["grid"] = {{"d", inst.f.grid.d}, {"J", inst.f.grid.J}, {"m", inst.f.grid.m}};
  j["weight"] = inst.w.values;
  nlohmann::json field = nlohmann::json::array();
  for (int y = 0; y < inst.f.grid.cells(); ++y) {
    nlohmann::json cell = nlohmann::json::array();
    const cplx* p = inst.f.cell_ptr(0, y);
    for (std::size_t i = 0; i < inst.f.cell_stride(); ++i)
      cell.push_back({p[i].real(), p[i].imag()});
    field.push_back(std::move(cell));
  }
  j["field"] = std::move(field);
  return j.dump();
}

Instance instance_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Grid g;
  g.d = j.at("grid").at("d").get<int>();
  g.J = j.at("grid").at("J").get<int>();
  g.m = j.at("grid").at("m").get<int>();
  g.validate();

  Instance inst;
  inst.f = MatrixField::zeros(g);
  const auto& field = j.at("field");
  if (static_cast<int>(field.size()) != g.cells())
    throw std::runtime_error("instance field has wrong cell count");
  for (int y = 0; y < g.cells(); ++y) {
    const auto& cell = field.at(y);
    if (cell.size() != inst.f.cell_stride())
      throw std::runtime_error("instance cell has wrong entry count");
    cplx* p = inst.f.cell_ptr(0, y);
    for (std::size_t i = 0; i < inst.f.cell_stride(); ++i)
      p[i] = cplx(cell.at(i).at(0).get<double>(), cell.at(i).at(1).get<double>());
  }

  Weight w;
  w.grid = g;
  w.values = j.at("weight").get<std::vector<double>>();
  if (static_cast<int>(w.values.size()) != g.cells())
    throw std::runtime_error("instance weight has wrong cell count");
  w.a1 = a1_constant(g, w.values);
  inst.w = std::move(w);
  return inst;
}

void save_instance(const Instance& inst, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp + "' for writing");
    out << instance_to_json(inst) << '\n';
    if (!out) throw std::runtime_error("write failed for '" + tmp + "'");
  }
  std::filesystem::rename(tmp, path);
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return instance_from_json(text);
}

}  // namespace ncsq
