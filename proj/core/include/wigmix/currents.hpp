#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wigmix/fock.hpp"
#include "wigmix/grid.hpp"

namespace wigmix {

/// Traced Wigner current of one mode of a pure two-mode state.
///
/// For mode b the current is J_b = +(pi/2) (P_x, P_p) where P_x, P_p are the
/// Weyl transforms of the traced first-moment operators Tr_a{x_a rho} and
/// Tr_a{p_a rho}; for mode a the same construction over mode b enters with an
/// overall minus sign. The result is exact in the truncated basis (operator
/// traces, no phase-space quadrature) and finite everywhere. The returned
/// field's tau is left unset; sweep drivers stamp it.
VectorField current(const TwoModeAmplitudes& psi, Mode mode,
                    const PhaseSpaceGrid& grid);

/// Divergence of a sampled vector field: second-order central differences on
/// interior nodes, second-order one-sided stencils on the boundary rows, so
/// the truncation error stays O(dx^2) everywhere and matches the O(dtau^2)
/// time derivative in the continuity residual.
ScalarField divergence(const VectorField& field);

/// Pointwise continuity defect and its norms.
struct ContinuityResidual {
  ScalarField field;     ///< [W(tau+dt) - W(tau-dt)]/(2 dt) + div J(tau)
  double max_abs = 0.0;  ///< max over all nodes
  double l2 = 0.0;       ///< sqrt(sum R^2 dx dp)
};

/// Central-difference check of the continuity equation dW/dtau = -div J.
///
/// `psi_fn` maps a mixing parameter to the evolved two-mode state; it is
/// invoked at tau - dtau, tau, and tau + dtau. The residual vanishes only in
/// the continuum limit: its norms scale as O(dtau^2 + dx^2) under joint
/// refinement because the discrete identity holds exactly at the operator
/// level. Throws std::invalid_argument unless dtau > 0 and both tau +- dtau
/// lie in [0, 1].
ContinuityResidual continuity_residual(
    const std::function<TwoModeAmplitudes(double)>& psi_fn, Mode mode,
    const PhaseSpaceGrid& grid, double tau, double dtau);

/// Velocity field w = J/W with singularity masking.
///
/// Cells with |W| < threshold are masked out of `valid`; the default
/// threshold is the relative 1e-4 * max|W|, which keeps masks
/// resolution-independent. Cells that are masked but still carry current
/// above `j_floor` are the lifted-degeneracy cells (w is singular there);
/// they are listed in `singular_cells`.
VelocityField velocity(const VectorField& current_field,
                       const ScalarField& wigner,
                       std::optional<double> threshold = std::nullopt,
                       double j_floor = 1e-3);

struct RadialProfileSettings {
  double center_x = 0.0;
  double center_p = 0.0;
  double bin_width = 0.0;      ///< <= 0: use max(dx, dp)
  double r_max = 0.0;          ///< <= 0: largest fully sampled (inscribed) radius
  double asymmetry_tol = 1e-8; ///< relative quadrant-imbalance tolerance
};

/// Angular average of the radial field component, binned in radius.
///
/// `r_abs_radial` holds R * |mean_radial|(R): a classical incompressible
/// radial flow has |w| proportional to 1/R, so a non-constant profile of
/// R * |w_r| certifies div w != 0.
struct RadialProfile {
  std::vector<double> radius;        ///< bin centers
  std::vector<double> mean_radial;   ///< angular average of J.r_hat (or w.r_hat)
  std::vector<double> r_abs_radial;  ///< radius * |mean_radial|
  std::vector<int> samples;          ///< contributing cells per bin
  double asymmetry = 0.0;            ///< worst relative quadrant imbalance
  bool symmetric = true;
  std::string annotation;            ///< asymmetry warning when not symmetric
};

/// Radial profile of a current field (all cells contribute).
///
/// Rotational symmetry about the center is checked by comparing per-quadrant
/// bin means; an imbalance above `asymmetry_tol` (relative to the profile's
/// largest mean) sets `symmetric = false` and a warning annotation instead of
/// throwing, since callers also profile deliberately asymmetric fields. Cells
/// on the axes through the center contribute to the means but not to the
/// symmetry check: they belong to no single quadrant.
RadialProfile radial_profile(const VectorField& field,
                             const RadialProfileSettings& settings = {});

/// Radial profile of a velocity field; only unmasked cells contribute.
RadialProfile radial_profile(const VelocityField& field,
                             const RadialProfileSettings& settings = {});

/// Diagnostic report of current inversion over the negative-W region.
///
/// The dominant direction is the probability-weighted mean of the normalized
/// current over W > 0 (cells with |J| <= 1e-12 are skipped as directionless);
/// its magnitude lies in [0, 1] and the report is inconclusive below 1e-6
/// (near-isotropic flow). `inverted_fraction` is the fraction of W < 0 cells
/// whose current opposes the dominant direction, NaN when the negative
/// region is empty. A diagnostic, not a pass/fail gate: the thresholds are
/// this implementation's choices.
struct InversionReport {
  bool conclusive = false;
  std::array<double, 2> dominant{{0.0, 0.0}};  ///< unit vector when conclusive
  double dominant_magnitude = 0.0;
  std::size_t positive_cells = 0;
  std::size_t negative_cells = 0;
  std::size_t inverted_cells = 0;
  double inverted_fraction = 0.0;  ///< NaN when negative_cells == 0
};

InversionReport inversion_detect(const VectorField& j, const ScalarField& w);

}  // namespace wigmix
