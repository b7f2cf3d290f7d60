#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "wigmix/grid.hpp"

namespace wigmix {

/// Why a streamline integration stopped in one direction.
enum class Termination : std::uint8_t {
  boundary,      ///< next step would leave the grid window
  stagnation,    ///< |J| fell below the stagnation floor
  max_steps,     ///< per-direction step cap reached
  singular_cell  ///< entered a cell flagged as a velocity singularity
};

const char* to_string(Termination t);

/// Streamline control parameters.
///
/// The integrator advances with a fixed arc-length step of
/// step_fraction * min(dx, dp) on the direction field J/|J| (portraits are
/// momentary snapshots; only the line geometry matters, so arc-length
/// parameterization keeps vertices evenly spaced). Stagnation is declared
/// below stagnation_rel * max|J|. Cells listed in singular_cells terminate
/// any line that enters them.
struct IntegrationSettings {
  double step_fraction = 0.25;
  int max_steps = 4096;
  double stagnation_rel = 1e-9;
  std::vector<std::pair<int, int>> singular_cells;
};

/// One field line of a momentary current snapshot.
///
/// Vertices run from the backward-direction endpoint through the seed to the
/// forward endpoint; speed[k] is |J| interpolated at vertices[k]. Consecutive
/// vertices are one arc-length step apart (at most). The two termination
/// reasons belong to the backward and forward half-lines.
struct FieldLine {
  std::vector<std::array<double, 2>> vertices;
  std::vector<double> speed;
  Termination backward_reason = Termination::stagnation;
  Termination forward_reason = Termination::stagnation;
};

/// Bilinear interpolation of the current at an arbitrary in-window point.
std::array<double, 2> interpolate(const VectorField& field, double x, double p);

/// Integrates the streamline through `seed` in both directions with fixed-step
/// RK4 on the bilinearly interpolated direction field. Throws
/// std::invalid_argument if the seed lies outside the grid window.
FieldLine integrate_line(const VectorField& field,
                         std::array<double, 2> seed,
                         const IntegrationSettings& settings = {});

/// `density` x `density` seed points, uniformly spaced with half-cell margins
/// so no seed sits on the window edge. Throws unless density >= 1.
std::vector<std::array<double, 2>> seed_lattice(const PhaseSpaceGrid& grid,
                                                int density);

/// Same lattice, keeping only seeds where the interpolated |J| >= floor.
std::vector<std::array<double, 2>> seed_lattice(const PhaseSpaceGrid& grid,
                                                int density,
                                                const VectorField& field,
                                                double floor);

}  // namespace wigmix
