#include "wigmix/flowlines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace wigmix {

const char* to_string(Termination t) {
  switch (t) {
    case Termination::boundary:
      return "boundary";
    case Termination::stagnation:
      return "stagnation";
    case Termination::max_steps:
      return "max-steps";
    case Termination::singular_cell:
      return "singular-cell";
  }
  return "?";
}

namespace {

bool inside(const PhaseSpaceGrid& g, double x, double p) {
  return x >= g.x_min && x <= g.x_max && p >= g.p_min && p <= g.p_max;
}

std::array<double, 2> bilinear(const VectorField& f, double x, double p) {
  const PhaseSpaceGrid& g = f.grid;
  double fx = (x - g.x_min) / g.dx();
  double fp = (p - g.p_min) / g.dp();
  int i = std::clamp(static_cast<int>(std::floor(fx)), 0, g.nx - 2);
  int j = std::clamp(static_cast<int>(std::floor(fp)), 0, g.np - 2);
  const double u = std::clamp(fx - i, 0.0, 1.0);
  const double v = std::clamp(fp - j, 0.0, 1.0);
  const std::size_t k00 = g.index(i, j), k10 = g.index(i + 1, j);
  const std::size_t k01 = g.index(i, j + 1), k11 = g.index(i + 1, j + 1);
  const double w00 = (1 - u) * (1 - v), w10 = u * (1 - v);
  const double w01 = (1 - u) * v, w11 = u * v;
  return {w00 * f.jx[k00] + w10 * f.jx[k10] + w01 * f.jx[k01] + w11 * f.jx[k11],
          w00 * f.jp[k00] + w10 * f.jp[k10] + w01 * f.jp[k01] +
              w11 * f.jp[k11]};
}

std::uint64_t cell_key(int i, int j) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
         static_cast<std::uint32_t>(j);
}

struct Tracer {
  const VectorField& field;
  double step;
  double floor;
  int max_steps;
  const std::unordered_set<std::uint64_t>& flagged;

  /// Unit tangent at (x, p); false when |J| is below the stagnation floor.
  bool direction(double x, double p, double sign,
                 std::array<double, 2>& out) const {
    const auto j = bilinear(field, x, p);
    const double n = std::hypot(j[0], j[1]);
    if (n < floor) return false;
    out = {sign * j[0] / n, sign * j[1] / n};
    return true;
  }

  bool cell_flagged(double x, double p) const {
    if (flagged.empty()) return false;
    const PhaseSpaceGrid& g = field.grid;
    int i = std::clamp(
        static_cast<int>(std::floor((x - g.x_min) / g.dx())), 0, g.nx - 2);
    int j = std::clamp(
        static_cast<int>(std::floor((p - g.p_min) / g.dp())), 0, g.np - 2);
    return flagged.count(cell_key(i, j)) > 0;
  }

  /// One half-line from (but excluding) the seed; vertices appended in march
  /// order.
  Termination march(std::array<double, 2> seed, double sign,
                    std::vector<std::array<double, 2>>& vertices) const {
    const PhaseSpaceGrid& g = field.grid;
    double x = seed[0], p = seed[1];
    for (int step_no = 0; step_no < max_steps; ++step_no) {
      std::array<double, 2> k1, k2, k3, k4;
      if (!direction(x, p, sign, k1)) return Termination::stagnation;
      const double h = step;
      double x2 = x + 0.5 * h * k1[0], p2 = p + 0.5 * h * k1[1];
      if (!inside(g, x2, p2)) return Termination::boundary;
      if (!direction(x2, p2, sign, k2)) return Termination::stagnation;
      double x3 = x + 0.5 * h * k2[0], p3 = p + 0.5 * h * k2[1];
      if (!inside(g, x3, p3)) return Termination::boundary;
      if (!direction(x3, p3, sign, k3)) return Termination::stagnation;
      double x4 = x + h * k3[0], p4 = p + h * k3[1];
      if (!inside(g, x4, p4)) return Termination::boundary;
      if (!direction(x4, p4, sign, k4)) return Termination::stagnation;
      const double nx =
          x + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
      const double np =
          p + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
      if (!inside(g, nx, np)) return Termination::boundary;
      x = nx;
      p = np;
      vertices.push_back({x, p});
      if (cell_flagged(x, p)) return Termination::singular_cell;
    }
    return Termination::max_steps;
  }
};

}  // namespace

std::array<double, 2> interpolate(const VectorField& field, double x,
                                  double p) {
  if (!inside(field.grid, x, p)) {
    throw std::invalid_argument("interpolate: point outside the grid window");
  }
  return bilinear(field, x, p);
}

FieldLine integrate_line(const VectorField& field, std::array<double, 2> seed,
                         const IntegrationSettings& settings) {
  const PhaseSpaceGrid& g = field.grid;
  if (!inside(g, seed[0], seed[1])) {
    throw std::invalid_argument("integrate_line: seed outside the grid window");
  }

  std::unordered_set<std::uint64_t> flagged;
  for (const auto& [i, j] : settings.singular_cells) {
    flagged.insert(cell_key(i, j));
  }
  const Tracer tracer{field, settings.step_fraction * std::min(g.dx(), g.dp()),
                      settings.stagnation_rel * field.max_magnitude(),
                      settings.max_steps, flagged};

  std::vector<std::array<double, 2>> back, fwd;
  FieldLine line;
  line.backward_reason = tracer.march(seed, -1.0, back);
  line.forward_reason = tracer.march(seed, +1.0, fwd);

  line.vertices.reserve(back.size() + 1 + fwd.size());
  line.vertices.insert(line.vertices.end(), back.rbegin(), back.rend());
  line.vertices.push_back(seed);
  line.vertices.insert(line.vertices.end(), fwd.begin(), fwd.end());

  line.speed.reserve(line.vertices.size());
  for (const auto& v : line.vertices) {
    const auto j = bilinear(field, v[0], v[1]);
    line.speed.push_back(std::hypot(j[0], j[1]));
  }
  return line;
}

std::vector<std::array<double, 2>> seed_lattice(const PhaseSpaceGrid& grid,
                                                int density) {
  if (density < 1) {
    throw std::invalid_argument("seed_lattice: density must be >= 1");
  }
  std::vector<std::array<double, 2>> seeds;
  seeds.reserve(static_cast<std::size_t>(density) * density);
  const double sx = (grid.x_max - grid.x_min) / density;
  const double sp = (grid.p_max - grid.p_min) / density;
  for (int a = 0; a < density; ++a) {
    for (int b = 0; b < density; ++b) {
      seeds.push_back(
          {grid.x_min + (a + 0.5) * sx, grid.p_min + (b + 0.5) * sp});
    }
  }
  return seeds;
}

std::vector<std::array<double, 2>> seed_lattice(const PhaseSpaceGrid& grid,
                                                int density,
                                                const VectorField& field,
                                                double floor) {
  auto seeds = seed_lattice(grid, density);
  std::erase_if(seeds, [&](const std::array<double, 2>& s) {
    const auto j = bilinear(field, s[0], s[1]);
    return std::hypot(j[0], j[1]) < floor;
  });
  return seeds;
}

}  // namespace wigmix
