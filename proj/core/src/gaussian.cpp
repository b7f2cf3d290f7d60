#include "wigmix/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wigmix {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Matrix4d mixer_symplectic(MixerParameter tau) {
  const double t = tau.transmission();
  const double r = tau.reflection();
  // ordering (x_a, p_a, x_b, p_b); rotation acts on (x_a, x_b) and (p_a, p_b)
  Eigen::Matrix4d s = Eigen::Matrix4d::Zero();
  s(0, 0) = t;  s(0, 2) = -r;
  s(2, 0) = r;  s(2, 2) = t;
  s(1, 1) = t;  s(1, 3) = -r;
  s(3, 1) = r;  s(3, 3) = t;
  return s;
}

int mode_offset(Mode mode) { return mode == Mode::a ? 0 : 2; }

}  // namespace

SingleModeMoments vacuum_moments() { return {}; }

SingleModeMoments coherent_moments(complexd alpha) {
  SingleModeMoments m;
  m.mean << std::sqrt(2.0) * alpha.real(), std::sqrt(2.0) * alpha.imag();
  return m;
}

SingleModeMoments squeezed_vacuum_moments(double z, double theta) {
  if (z < 0.0) {
    throw std::invalid_argument("squeezed_vacuum_moments: z must be >= 0");
  }
  SingleModeMoments m;
  const double ch = std::cosh(2.0 * z);
  const double sh = std::sinh(2.0 * z);
  // number-basis amplitudes c_{2k} ~ e^{ik(theta+pi)} tanh^k z give
  // <xp+px>/2 = -sinh(2z) sin(theta)/2 with p = (a - a^dag)/(i sqrt2)
  m.cov(0, 0) = 0.5 * (ch - sh * std::cos(theta));
  m.cov(1, 1) = 0.5 * (ch + sh * std::cos(theta));
  m.cov(0, 1) = m.cov(1, 0) = -0.5 * sh * std::sin(theta);
  return m;
}

void GaussianMoments::validate() const {
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("GaussianMoments: covariance not symmetric");
  }
  // two-mode uncertainty bound via the symplectic spectrum: the eigenvalues
  // of Omega * cov come in pairs +-i nu_k with nu_k >= 1/2 for a physical state
  Eigen::Matrix4d omega = Eigen::Matrix4d::Zero();
  omega(0, 1) = 1.0; omega(1, 0) = -1.0;
  omega(2, 3) = 1.0; omega(3, 2) = -1.0;
  Eigen::EigenSolver<Eigen::Matrix4d> solver(omega * cov);
  for (int k = 0; k < 4; ++k) {
    const auto ev = solver.eigenvalues()(k);
    if (std::abs(ev.real()) > 1e-10) {
      throw std::invalid_argument(
          "GaussianMoments: covariance not positive (complex symplectic spectrum)");
    }
    if (ev.imag() > 0.0 && ev.imag() < 0.5 - 1e-10) {
      throw std::invalid_argument(
          "GaussianMoments: uncertainty bound violated (symplectic eigenvalue < 1/2)");
    }
  }
}

GaussianMoments join(const SingleModeMoments& a, const SingleModeMoments& b) {
  GaussianMoments g;
  g.mean << a.mean(0), a.mean(1), b.mean(0), b.mean(1);
  g.cov.setZero();
  g.cov.block<2, 2>(0, 0) = a.cov;
  g.cov.block<2, 2>(2, 2) = b.cov;
  g.validate();
  return g;
}

GaussianMoments evolve_moments(const GaussianMoments& g, MixerParameter tau) {
  tau.validate();
  const Eigen::Matrix4d s = mixer_symplectic(tau);
  GaussianMoments out;
  out.mean = s * g.mean;
  out.cov = s * g.cov * s.transpose();
  return out;
}

Eigen::Matrix2d reduced_covariance(const GaussianMoments& g, Mode mode) {
  const int o = mode_offset(mode);
  return g.cov.block<2, 2>(o, o);
}

ScalarField reduced_wigner(const GaussianMoments& g, Mode mode,
                           const PhaseSpaceGrid& grid) {
  const int o = mode_offset(mode);
  const Eigen::Matrix2d sigma = g.cov.block<2, 2>(o, o);
  const Eigen::Vector2d mu = g.mean.segment<2>(o);
  const double det = sigma.determinant();
  if (det <= 0.0) {
    throw std::invalid_argument("reduced_wigner: covariance block not positive");
  }
  const Eigen::Matrix2d inv = sigma.inverse();
  const double norm = 1.0 / (2.0 * kPi * std::sqrt(det));
  ScalarField out(grid, FieldMeaning::wigner_distribution);
  for (int i = 0; i < grid.nx; ++i) {
    const double dx = grid.x(i) - mu(0);
    for (int j = 0; j < grid.np; ++j) {
      const double dp = grid.p(j) - mu(1);
      const double q =
          dx * (inv(0, 0) * dx + inv(0, 1) * dp) + dp * (inv(1, 0) * dx + inv(1, 1) * dp);
      out.values[grid.index(i, j)] = norm * std::exp(-0.5 * q);
    }
  }
  return out;
}

VectorField reduced_current(const GaussianMoments& g, Mode mode,
                            const PhaseSpaceGrid& grid) {
  const int kept = mode_offset(mode);
  const int other = 2 - kept;
  const Eigen::Matrix2d sigma = g.cov.block<2, 2>(kept, kept);
  const Eigen::Vector2d mu = g.mean.segment<2>(kept);
  const Eigen::Vector2d mu_other = g.mean.segment<2>(other);
  // rows: other mode's (x,p); columns: kept mode's (x,p)
  const Eigen::Matrix2d cross = g.cov.block<2, 2>(other, kept);
  const Eigen::Matrix2d gain = cross * sigma.inverse();
  const double sign = (mode == Mode::b) ? 1.0 : -1.0;

  const ScalarField w = reduced_wigner(g, mode, grid);
  VectorField out(grid, mode);
  for (int i = 0; i < grid.nx; ++i) {
    const double dx = grid.x(i) - mu(0);
    for (int j = 0; j < grid.np; ++j) {
      const double dp = grid.p(j) - mu(1);
      const std::size_t k = grid.index(i, j);
      const double cond_x = mu_other(0) + gain(0, 0) * dx + gain(0, 1) * dp;
      const double cond_p = mu_other(1) + gain(1, 0) * dx + gain(1, 1) * dp;
      const double scale = sign * 0.5 * kPi * w.values[k];
      out.jx[k] = scale * cond_x;
      out.jp[k] = scale * cond_p;
    }
  }
  return out;
}

double reduced_purity(const GaussianMoments& g, Mode mode) {
  const int o = mode_offset(mode);
  const double det = g.cov.block<2, 2>(o, o).determinant();
  if (det <= 0.0) {
    throw std::invalid_argument("reduced_purity: covariance block not positive");
  }
  return 1.0 / (2.0 * std::sqrt(det));
}

}  // namespace wigmix
