#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "wigmix/grid.hpp"

namespace wigmix {

using complexd = std::complex<double>;

/// Highest retained Fock number per mode; basis dimension is n_max + 1.
struct Cutoff {
  int n_max = 0;
  int dim() const { return n_max + 1; }
  void validate() const;
};

/// Beam-splitter mixing parameter tau in [0,1].
///
/// theta = pi*tau; reflection amplitude r = sin(theta/2), transmission
/// t = cos(theta/2), so tau=0 is the identity and tau=1 total reflection.
struct MixerParameter {
  double tau = 0.0;

  double theta() const;
  double reflection() const;    ///< r = sin(pi tau / 2)
  double transmission() const;  ///< t = cos(pi tau / 2)
  double reflectivity() const;  ///< R = r^2

  void validate() const;  ///< throws unless tau in [0,1]

  /// Inverse of the reflectivity map: tau = (2/pi) asin(sqrt(R)).
  static MixerParameter from_reflectivity(double R);
};

/// Truncated single-mode pure state.
///
/// `leakage` records the probability mass the untruncated state carries above
/// n_max; amplitudes are renormalized over the truncated basis.
struct FockVector {
  Eigen::VectorXcd amplitudes;
  double leakage = 0.0;

  int n_max() const { return static_cast<int>(amplitudes.size()) - 1; }
  double norm() const { return amplitudes.norm(); }
  double mean_photon_number() const;
};

/// Truncated two-mode pure state, c(m, n) = amplitude of |m>_a |n>_b.
///
/// The per-mode dimensions may differ; beam-splitter application enlarges the
/// array so that every populated total-photon-number block stays complete.
struct TwoModeAmplitudes {
  Eigen::MatrixXcd c;

  int dim_a() const { return static_cast<int>(c.rows()); }
  int dim_b() const { return static_cast<int>(c.cols()); }
  double norm() const { return c.norm(); }
  double mean_photon_number(Mode m) const;
  double total_photon_number() const;
};

/// Hermitian operator in the truncated Fock basis (reduced states and
/// traced-moment operators).
struct DensityOperator {
  Eigen::MatrixXcd rho;

  int dim() const { return static_cast<int>(rho.rows()); }
  double trace_real() const { return rho.trace().real(); }
  double purity() const { return (rho * rho).trace().real(); }
  double hermiticity_defect() const;

  /// Throws std::runtime_error if the Hermiticity defect exceeds tol.
  void require_hermitian(double tol = 1e-12) const;
};

/// Which quadrature operator a moment refers to: x = (a+a^dag)/sqrt(2) or
/// p = (a-a^dag)/(i sqrt(2)).
enum class QuadratureAxis : std::uint8_t { x, p };

/// |n> in a basis truncated at n_max. Throws if n is not representable.
FockVector make_fock(int n, Cutoff cutoff);

/// Glauber coherent state, amplitudes e^{-|alpha|^2/2} alpha^n / sqrt(n!),
/// renormalized. Displacement convention: (x, p) = sqrt(2) (Re, Im) alpha.
/// Rejects states whose truncation leakage exceeds leakage_bound, with a
/// required-cutoff hint in the message.
FockVector make_coherent(complexd alpha, Cutoff cutoff,
                         double leakage_bound = 1e-8);

/// Degenerate squeezed vacuum exp[(1/2)(zeta* a^2 - zeta a^dag^2)]|0> with
/// zeta = z e^{i theta}: even amplitudes proportional to
/// (-e^{i theta} tanh z)^k sqrt((2k)!)/(2^k k!), odd amplitudes exactly zero.
FockVector make_squeezed_vacuum(double z, double theta, Cutoff cutoff,
                                double leakage_bound = 1e-8);

/// Unentangled product c(m,n) = a_m b_n.
TwoModeAmplitudes product_state(const FockVector& a, const FockVector& b);

/// Matrix elements <m'|x|m> or <m'|p|m> in the truncated basis.
Eigen::MatrixXcd quadrature_matrix(int dim, QuadratureAxis which);

/// Reusable beam-splitter evolution B(theta) = exp[(theta/2)(a b+ - a+ b)],
/// theta = pi tau.
///
/// The generator conserves total photon number N = m + n, so the evolution
/// factors into one antisymmetric tridiagonal block per N. Each block is
/// diagonalized once (via the similarity i^m, which turns -iG into a real
/// symmetric tridiagonal matrix) and then applying any tau costs only a pair
/// of small dense products per block; constructing a plan is worthwhile for
/// tau sweeps.
class BeamSplitterPlan {
 public:
  /// Plan for states whose populated blocks have N < dim, i.e. square
  /// amplitude arrays of per-mode dimension `dim`.
  explicit BeamSplitterPlan(int dim);

  int dim() const { return dim_; }

  /// Applies B(pi tau) block-wise. The input must be square with the plan's
  /// dimension; output norm equals input norm to machine precision.
  TwoModeAmplitudes apply(const TwoModeAmplitudes& psi,
                          MixerParameter tau) const;

 private:
  struct Block {
    Eigen::VectorXd eigenvalues;  // of the real symmetric tridiagonal T_N
    Eigen::MatrixXd vectors;
  };
  int dim_ = 0;
  std::vector<Block> blocks_;
};

/// One-shot beam-splitter application.
///
/// The amplitude array is first padded to per-mode dimension N_top + 1 (with
/// N_top the highest populated total-photon block), which keeps every block's
/// generator complete: the rotation is then exact, not merely unitary, and
/// tau=1 reduces to the total-reflection swap c(m,n) -> (-1)^m c(n,m).
TwoModeAmplitudes apply_beam_splitter(const TwoModeAmplitudes& psi,
                                      MixerParameter tau);

/// Partial trace onto the kept mode:
/// rho_b(n,n') = sum_m c(m,n) conj(c(m,n')), analogously for mode a.
DensityOperator reduce(const TwoModeAmplitudes& psi, Mode keep);

/// Traced first-moment operator, e.g. for traced = a and the x quadrature:
/// O(n,n') = sum_{m,m'} <m'|x|m> c(m,n) conj(c(m',n')), which is the operator
/// Tr_a{x_a rho} whose mode-b Weyl transform drives the mode-b current.
DensityOperator traced_moment(const TwoModeAmplitudes& psi, Mode traced,
                              QuadratureAxis which);

}  // namespace wigmix
