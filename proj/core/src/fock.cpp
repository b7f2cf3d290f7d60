#include "wigmix/fock.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace wigmix {

namespace {
constexpr double pi = std::numbers::pi;

// log(n!) via lgamma; exact enough for amplitude prefactors up to huge n.
double log_factorial(int n) { return std::lgamma(n + 1.0); }
}  // namespace

void Cutoff::validate() const {
  if (n_max < 0) throw std::invalid_argument("Cutoff: n_max must be >= 0");
}

double MixerParameter::theta() const { return pi * tau; }
double MixerParameter::reflection() const { return std::sin(pi * tau / 2); }
double MixerParameter::transmission() const { return std::cos(pi * tau / 2); }
double MixerParameter::reflectivity() const {
  double r = reflection();
  return r * r;
}

void MixerParameter::validate() const {
  if (!(tau >= 0.0 && tau <= 1.0))
    throw std::invalid_argument("MixerParameter: tau must lie in [0,1]");
}

MixerParameter MixerParameter::from_reflectivity(double R) {
  if (!(R >= 0.0 && R <= 1.0))
    throw std::invalid_argument("MixerParameter: reflectivity must lie in [0,1]");
  return MixerParameter{(2.0 / pi) * std::asin(std::sqrt(R))};
}

double FockVector::mean_photon_number() const {
  double s = 0.0;
  for (int n = 0; n <= n_max(); ++n) s += n * std::norm(amplitudes[n]);
  return s;
}

double TwoModeAmplitudes::mean_photon_number(Mode mode) const {
  double s = 0.0;
  for (int m = 0; m < dim_a(); ++m)
    for (int n = 0; n < dim_b(); ++n)
      s += (mode == Mode::a ? m : n) * std::norm(c(m, n));
  return s;
}

double TwoModeAmplitudes::total_photon_number() const {
  return mean_photon_number(Mode::a) + mean_photon_number(Mode::b);
}

double DensityOperator::hermiticity_defect() const {
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

void DensityOperator::require_hermitian(double tol) const {
  if (hermiticity_defect() > tol)
    throw std::runtime_error("DensityOperator: Hermiticity defect exceeds tolerance");
}

FockVector make_fock(int n, Cutoff cutoff) {
  cutoff.validate();
  if (n < 0 || n > cutoff.n_max) {
    std::ostringstream msg;
    msg << "make_fock: |" << n << "> not representable with n_max = "
        << cutoff.n_max;
    throw std::invalid_argument(msg.str());
  }
  FockVector v;
  v.amplitudes = Eigen::VectorXcd::Zero(cutoff.dim());
  v.amplitudes[n] = 1.0;
  v.leakage = 0.0;
  return v;
}

FockVector make_coherent(complexd alpha, Cutoff cutoff, double leakage_bound) {
  cutoff.validate();
  FockVector v;
  v.amplitudes.resize(cutoff.dim());
  const double a2 = std::norm(alpha);
  const double mag = std::abs(alpha);
  const double phase = std::arg(alpha);
  for (int n = 0; n <= cutoff.n_max; ++n) {
    // log-space magnitude avoids overflow of alpha^n / sqrt(n!)
    double logmag = -a2 / 2 + (mag > 0 ? n * std::log(mag) : (n ? -1e300 : 0.0))
                    - 0.5 * log_factorial(n);
    v.amplitudes[n] = std::polar(std::exp(logmag), n * phase);
  }
  double kept = v.amplitudes.squaredNorm();
  v.leakage = 1.0 - kept;
  if (v.leakage > leakage_bound) {
    // Poisson tail hint: mass above N falls below `bound` near
    // N ~ |alpha|^2 + k sqrt(|alpha|^2); scan for the first sufficient cutoff.
    int hint = cutoff.n_max;
    double tail = v.leakage;
    double term = std::exp(-a2 + cutoff.n_max * std::log(a2 > 0 ? a2 : 1.0)
                           - log_factorial(cutoff.n_max));
    while (tail > leakage_bound && hint < 100000) {
      ++hint;
      term *= a2 / hint;
      tail -= term;
    }
    std::ostringstream msg;
    msg << "make_coherent: truncation leakage " << v.leakage
        << " exceeds bound " << leakage_bound << " (need n_max >= " << hint
        << ")";
    throw std::runtime_error(msg.str());
  }
  v.amplitudes /= std::sqrt(kept);
  return v;
}

FockVector make_squeezed_vacuum(double z, double theta, Cutoff cutoff,
                                double leakage_bound) {
  cutoff.validate();
  if (z < 0) throw std::invalid_argument("make_squeezed_vacuum: z must be >= 0");
  FockVector v;
  v.amplitudes = Eigen::VectorXcd::Zero(cutoff.dim());
  const double th = std::tanh(z);
  for (int k = 0; 2 * k <= cutoff.n_max; ++k) {
    double logmag = 0.5 * log_factorial(2 * k) - k * std::log(2.0)
                    - log_factorial(k) - 0.5 * std::log(std::cosh(z));
    if (k > 0) logmag += k * std::log(th);
    // (-e^{i theta})^k carries the phase k*(theta + pi)
    v.amplitudes[2 * k] = std::polar(std::exp(logmag), k * (theta + pi));
  }
  double kept = v.amplitudes.squaredNorm();
  v.leakage = 1.0 - kept;
  if (v.leakage > leakage_bound) {
    std::ostringstream msg;
    msg << "make_squeezed_vacuum: truncation leakage " << v.leakage
        << " exceeds bound " << leakage_bound
        << " (even-photon tail of tanh^2k(z) decays slowly; raise n_max or "
           "the bound)";
    throw std::runtime_error(msg.str());
  }
  v.amplitudes /= std::sqrt(kept);
  return v;
}

TwoModeAmplitudes product_state(const FockVector& a, const FockVector& b) {
  TwoModeAmplitudes psi;
  psi.c = a.amplitudes * b.amplitudes.transpose();
  return psi;
}

Eigen::MatrixXcd quadrature_matrix(int dim, QuadratureAxis which) {
  Eigen::MatrixXcd X = Eigen::MatrixXcd::Zero(dim, dim);
  for (int m = 0; m + 1 < dim; ++m) {
    double v = std::sqrt((m + 1) / 2.0);
    if (which == QuadratureAxis::x) {
      X(m, m + 1) = v;
      X(m + 1, m) = v;
    } else {
      // p = (a - a^dag)/(i sqrt2): <m|p|m+1> = -i sqrt((m+1)/2)
      X(m, m + 1) = complexd(0, -1) * v;
      X(m + 1, m) = complexd(0, 1) * v;
    }
  }
  return X;
}

namespace {

struct BlockEigen {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd vectors;
};

/// Eigensystem of the N-block generator restricted to m in [m_lo, m_lo+d).
///
/// G_N is real antisymmetric tridiagonal with G(m, m+1) = a_m,
/// a_m = sqrt((m+1)(N-m)). Conjugating by D = diag(i^m) maps -iG_N to a real
/// symmetric tridiagonal matrix with zero diagonal and off-diagonal a_m,
/// whose eigensystem yields exp((theta/2) G_N) for every theta.
BlockEigen block_eigensystem(int N, int m_lo, int d) {
  BlockEigen blk;
  if (d == 1) {
    blk.eigenvalues = Eigen::VectorXd::Zero(1);
    blk.vectors = Eigen::MatrixXd::Ones(1, 1);
    return blk;
  }
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd offd(d - 1);
  for (int i = 0; i + 1 < d; ++i) {
    double m = m_lo + i;
    offd[i] = std::sqrt((m + 1) * (N - m));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, offd);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("beam splitter: tridiagonal eigensolve failed");
  blk.eigenvalues = solver.eigenvalues();
  blk.vectors = solver.eigenvectors();
  return blk;
}

/// Rotates the N-block of c in place: exp((theta/2) G) =
/// D V exp(i (theta/2) Lambda) V^T D^dag with D = diag(i^m).
void rotate_block(Eigen::MatrixXcd& c, int N, int m_lo, int d,
                  const Eigen::VectorXd& eigenvalues,
                  const Eigen::MatrixXd& vectors, double half_theta) {
  if (d == 1) return;
  Eigen::VectorXcd vec(d);
  for (int i = 0; i < d; ++i) vec[i] = c(m_lo + i, N - (m_lo + i));
  for (int i = 0; i < d; ++i)
    vec[i] *= std::polar(1.0, -pi / 2 * ((m_lo + i) % 4));  // D^dag = i^-m
  Eigen::VectorXcd y = vectors.transpose() * vec;
  for (int i = 0; i < d; ++i)
    y[i] *= std::polar(1.0, half_theta * eigenvalues[i]);
  vec = vectors * y;
  for (int i = 0; i < d; ++i)
    vec[i] *= std::polar(1.0, pi / 2 * ((m_lo + i) % 4));  // D = i^m
  for (int i = 0; i < d; ++i) c(m_lo + i, N - (m_lo + i)) = vec[i];
}

}  // namespace

BeamSplitterPlan::BeamSplitterPlan(int dim) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("BeamSplitterPlan: dim must be >= 1");
  blocks_.resize(2 * dim - 1);
  for (int N = 0; N <= 2 * (dim - 1); ++N) {
    int m_lo = std::max(0, N - (dim - 1));
    int d = std::min(N, dim - 1) - m_lo + 1;
    BlockEigen be = block_eigensystem(N, m_lo, d);
    blocks_[N].eigenvalues = std::move(be.eigenvalues);
    blocks_[N].vectors = std::move(be.vectors);
  }
}

TwoModeAmplitudes BeamSplitterPlan::apply(const TwoModeAmplitudes& psi,
                                          MixerParameter tau) const {
  tau.validate();
  if (psi.dim_a() != dim_ || psi.dim_b() != dim_)
    throw std::invalid_argument("BeamSplitterPlan: state dimension mismatch");
  TwoModeAmplitudes out;
  out.c = psi.c;
  const double half_theta = tau.theta() / 2;
  for (int N = 0; N <= 2 * (dim_ - 1); ++N) {
    int m_lo = std::max(0, N - (dim_ - 1));
    int d = std::min(N, dim_ - 1) - m_lo + 1;
    rotate_block(out.c, N, m_lo, d, blocks_[N].eigenvalues,
                 blocks_[N].vectors, half_theta);
  }
  return out;
}

TwoModeAmplitudes apply_beam_splitter(const TwoModeAmplitudes& psi,
                                      MixerParameter tau) {
  tau.validate();
  // Highest populated total-photon block; exact zeros stay exact under the
  // evolution, so padding never grows under repeated application.
  int n_top = 0;
  for (int m = 0; m < psi.dim_a(); ++m)
    for (int n = 0; n < psi.dim_b(); ++n)
      if (psi.c(m, n) != complexd(0, 0)) n_top = std::max(n_top, m + n);
  int dim = std::max({n_top + 1, psi.dim_a(), psi.dim_b()});
  TwoModeAmplitudes out;
  out.c = Eigen::MatrixXcd::Zero(dim, dim);
  out.c.topLeftCorner(psi.dim_a(), psi.dim_b()) = psi.c;
  // Stream one block at a time instead of building a full plan: blocks above
  // n_top hold exact zeros and are skipped, and nothing larger than the
  // biggest block's eigensystem is ever resident (a plan at the padded
  // dimension would hold O(dim^3) doubles).
  const double half_theta = tau.theta() / 2;
  for (int N = 0; N <= std::min(n_top, 2 * (dim - 1)); ++N) {
    int m_lo = std::max(0, N - (dim - 1));
    int d = std::min(N, dim - 1) - m_lo + 1;
    const BlockEigen be = block_eigensystem(N, m_lo, d);
    rotate_block(out.c, N, m_lo, d, be.eigenvalues, be.vectors, half_theta);
  }
  return out;
}

DensityOperator reduce(const TwoModeAmplitudes& psi, Mode keep) {
  DensityOperator rho;
  if (keep == Mode::b)
    rho.rho = psi.c.transpose() * psi.c.conjugate();
  else
    rho.rho = psi.c * psi.c.adjoint();
  // round Hermiticity to the axis (products above are Hermitian up to
  // floating-point noise)
  rho.rho = ((rho.rho + rho.rho.adjoint()) / 2.0).eval();
  return rho;
}

DensityOperator traced_moment(const TwoModeAmplitudes& psi, Mode traced,
                              QuadratureAxis which) {
  DensityOperator out;
  if (traced == Mode::a) {
    // O(n,n') = sum_{m,m'} X(m',m) c(m,n) conj(c(m',n')) = (X c)^T conj(c)
    Eigen::MatrixXcd X = quadrature_matrix(psi.dim_a(), which);
    out.rho = (X * psi.c).transpose() * psi.c.conjugate();
  } else {
    Eigen::MatrixXcd X = quadrature_matrix(psi.dim_b(), which);
    out.rho = (psi.c * X.transpose()) * psi.c.adjoint();
  }
  out.rho = ((out.rho + out.rho.adjoint()) / 2.0).eval();
  return out;
}

}  // namespace wigmix
