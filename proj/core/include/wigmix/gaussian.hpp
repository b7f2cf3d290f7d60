#pragma once

#include <Eigen/Dense>

#include "wigmix/fock.hpp"
#include "wigmix/grid.hpp"

namespace wigmix {

// First and second moments of one mode, ordered (x, p).
struct SingleModeMoments {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Matrix2d cov = 0.5 * Eigen::Matrix2d::Identity();
};

// |0>: Sigma = I/2, zero mean.
SingleModeMoments vacuum_moments();

// |alpha>: displaced vacuum at (x,p) = (sqrt2 Re alpha, sqrt2 Im alpha).
SingleModeMoments coherent_moments(complexd alpha);

// Squeezed vacuum |z, theta>: zero mean and
//   Sigma = 1/2 [[cosh 2z - sinh 2z cos th,  sinh 2z sin th],
//                [sinh 2z sin th,            cosh 2z + sinh 2z cos th]],
// i.e. the variance-(e^{-2z}/2) axis lies along the direction rotated by
// -theta/2 from x.  The off-diagonal sign is pinned by the Fock-basis
// second moments of the number expansion used in make_squeezed_vacuum.
SingleModeMoments squeezed_vacuum_moments(double z, double theta);

// Two-mode Gaussian state: mean ordered (x_a, p_a, x_b, p_b), 4x4 covariance.
struct GaussianMoments {
  Eigen::Vector4d mean = Eigen::Vector4d::Zero();
  Eigen::Matrix4d cov = 0.5 * Eigen::Matrix4d::Identity();

  // Throws if cov is asymmetric, non-positive, or violates the two-mode
  // uncertainty bound (symplectic eigenvalues >= 1/2 - 1e-10).
  void validate() const;
};

// Product state a (x) b: block-diagonal covariance.
GaussianMoments join(const SingleModeMoments& a, const SingleModeMoments& b);

// Beam-splitter action on moments: mean -> S mean, cov -> S cov S^T, where S
// rotates (x_a, x_b) by pi*tau/2 and (p_a, p_b) identically -- the x and p
// sectors never mix.  Matches the Fock-pipeline convention
//   x_a(tau) = t x_a - r x_b,   x_b(tau) = r x_a + t x_b.
GaussianMoments evolve_moments(const GaussianMoments& g, MixerParameter tau);

// The 2x2 covariance block of one mode.
Eigen::Matrix2d reduced_covariance(const GaussianMoments& g, Mode mode);

// Reduced Wigner distribution: W(xi) = exp(-d^T Sigma^{-1} d / 2)/(2 pi sqrt(det Sigma)).
ScalarField reduced_wigner(const GaussianMoments& g, Mode mode,
                           const PhaseSpaceGrid& grid);

// Traced current in closed form.  The conditional mean of a joint Gaussian
// is affine in the kept mode's phase-space point, so
//   J_kept(xi) = (+-pi/2) (m_other + C Sigma^{-1} (xi - m_kept)) W(xi),
// with C the cross-covariance block between the other mode's (x,p) and the
// kept mode's (x,p); + for mode b, - for mode a.
VectorField reduced_current(const GaussianMoments& g, Mode mode,
                            const PhaseSpaceGrid& grid);

// Purity of the reduced Gaussian state, 1/(2 sqrt(det Sigma)).
double reduced_purity(const GaussianMoments& g, Mode mode);

}  // namespace wigmix
