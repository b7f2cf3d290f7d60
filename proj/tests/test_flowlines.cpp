#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <stdexcept>

#include "approx.hpp"
#include "wigmix/flowlines.hpp"

using namespace wigmix;
using testsupport::close;

namespace {

PhaseSpaceGrid make_grid(double half, int n) {
  PhaseSpaceGrid g;
  g.x_min = -half;
  g.x_max = half;
  g.p_min = -half;
  g.p_max = half;
  g.nx = n;
  g.np = n;
  return g;
}

VectorField fill(const PhaseSpaceGrid& grid, auto fx, auto fp) {
  VectorField f(grid, Mode::b);
  for (int i = 0; i < grid.nx; ++i)
    for (int j = 0; j < grid.np; ++j) {
      const double x = grid.x(i), p = grid.p(j);
      f.jx[grid.index(i, j)] = fx(x, p);
      f.jp[grid.index(i, j)] = fp(x, p);
    }
  return f;
}

}  // namespace

TEST_CASE("interpolation is exact on bilinear fields") {
  const PhaseSpaceGrid grid = make_grid(3.0, 25);
  const VectorField f =
      fill(
          grid, [](double x, double p) { return 0.3 - 1.2 * x + 0.5 * p + 0.25 * x * p; },
          [](double x, double p) { return -0.7 + 0.4 * x - 0.9 * p - 0.15 * x * p; });
  for (double x : {-2.93, -1.0, 0.123, 2.71}) {
    for (double p : {-2.5, -0.311, 1.7, 2.99}) {
      const auto j = interpolate(f, x, p);
      CHECK(close(j[0], 0.3 - 1.2 * x + 0.5 * p + 0.25 * x * p, 1e-13, 1e-13));
      CHECK(close(j[1], -0.7 + 0.4 * x - 0.9 * p - 0.15 * x * p, 1e-13, 1e-13));
    }
  }
  CHECK_THROWS_AS(interpolate(f, 3.01, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(interpolate(f, 0.0, -3.2), std::invalid_argument);
}

TEST_CASE("a rigid rotation traces a circle to tracer accuracy") {
  // J = (-p, x) is linear, so interpolation is exact and the only error is
  // the integrator's. The orbit through (1.2, 0) is the circle r = 1.2 and
  // never leaves the window, so both half-lines exhaust their step budget.
  const PhaseSpaceGrid grid = make_grid(3.0, 121);
  const VectorField f = fill(
      grid, [](double, double p) { return -p; },
      [](double x, double) { return x; });

  const IntegrationSettings settings;
  const FieldLine line = integrate_line(f, {1.2, 0.0}, settings);
  CHECK(line.backward_reason == Termination::max_steps);
  CHECK(line.forward_reason == Termination::max_steps);
  CHECK(line.vertices.size() == 2u * 4096u + 1u);
  CHECK(line.speed.size() == line.vertices.size());
  CHECK(line.vertices[4096][0] == 1.2);  // the seed sits mid-sequence
  CHECK(line.vertices[4096][1] == 0.0);

  const double h = settings.step_fraction * grid.dx();
  double worst_r = 0.0, worst_spacing = 0.0, worst_speed = 0.0;
  for (std::size_t k = 0; k < line.vertices.size(); ++k) {
    const auto& v = line.vertices[k];
    worst_r = std::max(worst_r, std::abs(std::hypot(v[0], v[1]) - 1.2));
    worst_speed = std::max(worst_speed, std::abs(line.speed[k] - 1.2));
    if (k > 0) {
      const auto& u = line.vertices[k - 1];
      const double spacing = std::hypot(v[0] - u[0], v[1] - u[1]);
      worst_spacing = std::max(worst_spacing, std::abs(spacing - h));
    }
  }
  CHECK(worst_r <= 1e-6);
  CHECK(worst_speed <= 2e-6);
  // Vertices advance by one arc-length step of the unit tangent; the only
  // shortfall is the chord-vs-arc correction, quadratic in h/r.
  CHECK(worst_spacing <= 1e-4 * h);
  MESSAGE("radial drift over 8192 steps: ", worst_r);
}

TEST_CASE("a uniform field exits through both boundaries") {
  const PhaseSpaceGrid grid = make_grid(3.0, 61);
  const VectorField f = fill(
      grid, [](double, double) { return 1.0; }, [](double, double) { return 0.0; });
  const FieldLine line = integrate_line(f, {0.0, 0.25}, {});
  CHECK(line.backward_reason == Termination::boundary);
  CHECK(line.forward_reason == Termination::boundary);
  // The trace is the horizontal segment p = 0.25 between the window edges.
  for (const auto& v : line.vertices) CHECK(close(v[1], 0.25, 0.0, 1e-12));
  CHECK(line.vertices.front()[0] < -2.9);
  CHECK(line.vertices.back()[0] > 2.9);
  for (double s : line.speed) CHECK(close(s, 1.0, 0.0, 1e-12));
}

TEST_CASE("a dead half-window stops the march by stagnation") {
  // Flow points +x and switches off past x = 1.5; the forward march stalls
  // once the interpolated magnitude drops below the relative floor, while
  // the backward march still reaches the boundary.
  const PhaseSpaceGrid grid = make_grid(3.0, 61);
  const VectorField f = fill(
      grid, [](double x, double) { return x < 1.5 ? 1.0 : 0.0; },
      [](double, double) { return 0.0; });
  const FieldLine line = integrate_line(f, {0.0, 0.0}, {});
  CHECK(line.forward_reason == Termination::stagnation);
  CHECK(line.backward_reason == Termination::boundary);
  // The stall happens inside the switch-off ramp, before the dead zone's
  // far side.
  CHECK(line.vertices.back()[0] > 1.4);
  CHECK(line.vertices.back()[0] < 1.7);
}

TEST_CASE("flagged singular cells interrupt the trace") {
  const PhaseSpaceGrid grid = make_grid(3.0, 61);
  const VectorField f = fill(
      grid, [](double, double) { return 1.0; }, [](double, double) { return 0.0; });
  IntegrationSettings settings;
  // Cell (45, 30) spans x in [1.5, 1.6], p in [0, 0.1].
  settings.singular_cells.push_back({45, 30});
  const FieldLine line = integrate_line(f, {0.0, 0.05}, settings);
  CHECK(line.forward_reason == Termination::singular_cell);
  CHECK(line.backward_reason == Termination::boundary);
  CHECK(line.vertices.back()[0] >= 1.5);
  CHECK(line.vertices.back()[0] <= 1.6 + 1e-12);

  CHECK_THROWS_AS(integrate_line(f, {3.5, 0.0}, {}), std::invalid_argument);
}

TEST_CASE("seed lattices cover the window and respect the thinning floor") {
  const PhaseSpaceGrid grid = make_grid(6.0, 61);
  const auto seeds = seed_lattice(grid, 3);
  REQUIRE(seeds.size() == 9);
  // density 3 on [-6, 6]: centers of a 3x3 macro-cell split, {-4, 0, 4}^2.
  for (const auto& s : seeds) {
    CHECK((close(std::abs(s[0]), 4.0, 0.0, 1e-12) || std::abs(s[0]) <= 1e-12));
    CHECK((close(std::abs(s[1]), 4.0, 0.0, 1e-12) || std::abs(s[1]) <= 1e-12));
  }

  // Thinning drops seeds where |J| sits below the floor: with J = (x, 0)
  // and floor 2, the x = 0 column of seeds disappears.
  const VectorField f = fill(
      grid, [](double x, double) { return x; }, [](double, double) { return 0.0; });
  const auto thinned = seed_lattice(grid, 3, f, 2.0);
  CHECK(thinned.size() == 6);
  for (const auto& s : thinned) CHECK(std::abs(s[0]) > 2.0);

  CHECK_THROWS_AS(seed_lattice(grid, 0), std::invalid_argument);
}
