#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace wigmix {

/// Which of the two bosonic modes a quantity refers to.
enum class Mode : std::uint8_t { a, b };

const char* to_string(Mode m);

/// Uniform rectangular sampling lattice in (x, p).
///
/// Points are x_i = x_min + i*dx with dx = (x_max - x_min)/(nx - 1), and the
/// same along p, so both interval endpoints are grid points.
struct PhaseSpaceGrid {
  double x_min = -6.0;
  double x_max = 6.0;
  double p_min = -6.0;
  double p_max = 6.0;
  int nx = 241;
  int np = 241;

  double dx() const { return (x_max - x_min) / (nx - 1); }
  double dp() const { return (p_max - p_min) / (np - 1); }
  double x(int i) const { return x_min + i * dx(); }
  double p(int j) const { return p_min + j * dp(); }
  std::size_t size() const { return static_cast<std::size_t>(nx) * np; }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * np + j;
  }

  bool operator==(const PhaseSpaceGrid&) const = default;

  /// Throws std::invalid_argument unless nx,np >= 2 and extents are ordered.
  void validate() const;

  /// Default window for the bundled scenarios: [-6,6]^2 at 241x241.
  static PhaseSpaceGrid standard() { return PhaseSpaceGrid{}; }
};

/// Semantic tag for scalar grid data.
enum class FieldMeaning : std::uint8_t {
  wigner_distribution,
  weyl_symbol,
  divergence,
  residual,
};

const char* to_string(FieldMeaning m);

/// Real scalar samples over a PhaseSpaceGrid, stored row-major in x.
struct ScalarField {
  PhaseSpaceGrid grid;
  FieldMeaning meaning = FieldMeaning::weyl_symbol;
  std::vector<double> values;

  ScalarField() = default;
  ScalarField(const PhaseSpaceGrid& g, FieldMeaning m)
      : grid(g), meaning(m), values(g.size(), 0.0) {}

  double& at(int i, int j) { return values[grid.index(i, j)]; }
  double at(int i, int j) const { return values[grid.index(i, j)]; }

  /// Plain Riemann sum times the cell area dx*dp.
  double integral() const;
  double max_abs() const;
};

/// Phase-space current samples (J_x, J_p) for one mode at one mixing time.
struct VectorField {
  PhaseSpaceGrid grid;
  Mode mode = Mode::b;
  double tau = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> jx, jp;

  VectorField() = default;
  VectorField(const PhaseSpaceGrid& g, Mode m,
              double t = std::numeric_limits<double>::quiet_NaN())
      : grid(g), mode(m), tau(t), jx(g.size(), 0.0), jp(g.size(), 0.0) {}

  double magnitude(std::size_t k) const;
  double max_magnitude() const;
};

/// Velocity field w = J/W with an explicit validity mask.
///
/// Cells with |W| below the singularity threshold are masked out; cells that
/// are masked but still carry current above j_floor (the lifted-degeneracy
/// cells where w is singular) are listed separately as (i, j) pairs.
struct VelocityField {
  PhaseSpaceGrid grid;
  std::vector<double> wx, wp;
  std::vector<std::uint8_t> valid;
  double threshold = 0.0;
  double j_floor = 0.0;
  std::vector<std::pair<int, int>> singular_cells;
};

}  // namespace wigmix
