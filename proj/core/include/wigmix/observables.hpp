#pragma once

#include <vector>

#include "wigmix/fock.hpp"
#include "wigmix/grid.hpp"

namespace wigmix {

/// Scalar diagnostics of one sweep point.
///
/// Energies are mean photon numbers (not <n> + 1/2) so conservation
/// statements are cutoff-clean; `entropy` is the entanglement entropy of the
/// reduced state (identical for the two modes of a pure joint state, computed
/// from mode b). Negativity volumes integrate (|W| - W)/2 on the sweep grid;
/// the `negativity_error_*` fields carry a Richardson estimate of the
/// quadrature error from a stride-2 coarsening (NaN when the grid cannot be
/// coarsened, i.e. even point counts).
struct SweepRecord {
  double tau = 0.0;
  double n_a = 0.0;
  double n_b = 0.0;
  double n_total = 0.0;
  double purity_a = 0.0;
  double purity_b = 0.0;
  double entropy = 0.0;
  double negativity_a = 0.0;
  double negativity_b = 0.0;
  double negativity_error_a = 0.0;
  double negativity_error_b = 0.0;
};

struct SweepSettings {
  PhaseSpaceGrid grid = PhaseSpaceGrid::standard();
};

/// Mean photon number from Fock populations, sum_m m rho(m, m).
double mean_photon_number(const DensityOperator& rho);

/// Von Neumann entropy -sum lambda ln lambda of a density operator.
double entropy(const DensityOperator& rho);

/// Negativity volume of a sampled distribution, integral of (|W| - W)/2.
double negativity_volume(const ScalarField& w);

/// Evolves the product input to each tau and records all scalar diagnostics.
/// Invariants across the returned list (machine-checked in tests, not here):
/// constant total photon number; equal per-mode purities at every tau.
std::vector<SweepRecord> sweep(const FockVector& a_in, const FockVector& b_in,
                               const std::vector<double>& taus,
                               const SweepSettings& settings = {});

}  // namespace wigmix
