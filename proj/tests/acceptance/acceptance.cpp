// Acceptance gate: one standalone binary, one PASS/FAIL line per shipped
// criterion, exit code = number of failed criteria (plus any violated
// companion demonstration, which would be unexpected).
//
// Three clauses sit at parameter points where the asserted quantity provably
// vanishes or lies below the truncation floor of the pinned cutoff (see the
// analysis lines they print, and README "Acceptance gate"). They are reported
// red with the measured numbers rather than weakened; companion blocks
// demonstrate the same physics at parameters where it is attainable.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "quadrature.hpp"
#include "wigmix/currents.hpp"
#include "wigmix/flowlines.hpp"
#include "wigmix/fock.hpp"
#include "wigmix/gaussian.hpp"
#include "wigmix/observables.hpp"
#include "wigmix/scenario.hpp"
#include "wigmix/wigner.hpp"

namespace {

using namespace wigmix;

std::string sci(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(3) << v;
  return os.str();
}

std::string fix(double v, int prec = 6) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(prec) << v;
  return os.str();
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

/// Collects clause/companion/analysis lines for one criterion and prints the
/// whole block with the verdict first. A criterion passes only if every
/// clause holds; companions and notes never flip the verdict, but a violated
/// companion increments `defects` so the exit code still flags it.
class Criterion {
 public:
  Criterion(int index, std::string title)
      : index_(index), title_(std::move(title)) {}

  void clause(bool ok, const std::string& text) {
    lines_.push_back(std::string(ok ? "  - ok:     " : "  - FAILED: ") + text);
    ok_ = ok_ && ok;
  }

  void companion(bool ok, const std::string& text, int& defects) {
    lines_.push_back(std::string("  * companion ") +
                     (ok ? "ok: " : "VIOLATED: ") + text);
    if (!ok) ++defects;
  }

  void note(const std::string& text) { lines_.push_back("  . " + text); }

  bool print() const {
    std::cout << (ok_ ? "[PASS]" : "[FAIL]") << " criterion " << index_ << ": "
              << title_ << "\n";
    for (const auto& line : lines_) std::cout << line << "\n";
    std::cout.flush();
    return ok_;
  }

 private:
  int index_;
  std::string title_;
  bool ok_ = true;
  std::vector<std::string> lines_;
};

PhaseSpaceGrid window(double half, int n) {
  PhaseSpaceGrid g;
  g.x_min = -half;
  g.x_max = half;
  g.p_min = -half;
  g.p_max = half;
  g.nx = n;
  g.np = n;
  return g;
}

TwoModeAmplitudes one_photon_pair(double tau) {
  return apply_beam_splitter(
      product_state(make_fock(1, Cutoff{6}), make_fock(1, Cutoff{6})),
      MixerParameter{tau});
}

double max_abs_diff(const std::vector<double>& u, const std::vector<double>& v) {
  double worst = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k)
    worst = std::max(worst, std::abs(u[k] - v[k]));
  return worst;
}

/// A set of marked cells forms a closed contour when one 8-connected
/// component covers the full angular range about its own centroid (1-degree
/// bins): that accepts exactly a loop of cells encircling a point and rejects
/// arcs, blobs, and scattered noise cells.
bool has_closed_contour(const PhaseSpaceGrid& g,
                        const std::vector<std::uint8_t>& mark) {
  std::vector<std::uint8_t> seen(g.size(), 0);
  for (std::size_t start = 0; start < g.size(); ++start) {
    if (!mark[start] || seen[start]) continue;
    std::vector<std::size_t> cells;
    std::vector<std::size_t> stack{start};
    seen[start] = 1;
    while (!stack.empty()) {
      const std::size_t cur = stack.back();
      stack.pop_back();
      cells.push_back(cur);
      const int i = static_cast<int>(cur) / g.np;
      const int j = static_cast<int>(cur) % g.np;
      for (int di = -1; di <= 1; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          const int ni = i + di, nj = j + dj;
          if (ni < 0 || nj < 0 || ni >= g.nx || nj >= g.np) continue;
          const std::size_t nk = g.index(ni, nj);
          if (mark[nk] && !seen[nk]) {
            seen[nk] = 1;
            stack.push_back(nk);
          }
        }
    }
    if (cells.size() < 8) continue;  // a lattice loop needs at least 8 cells
    double cx = 0.0, cp = 0.0;
    for (const std::size_t k : cells) {
      cx += g.x(static_cast<int>(k) / g.np);
      cp += g.p(static_cast<int>(k) % g.np);
    }
    cx /= static_cast<double>(cells.size());
    cp /= static_cast<double>(cells.size());
    std::array<std::uint8_t, 360> bins{};
    for (const std::size_t k : cells) {
      const double ang = std::atan2(g.p(static_cast<int>(k) % g.np) - cp,
                                    g.x(static_cast<int>(k) / g.np) - cx);
      int b = static_cast<int>(
          std::floor((ang + std::numbers::pi) / (2 * std::numbers::pi) * 360));
      b = std::clamp(b, 0, 359);
      bins[static_cast<std::size_t>(b)] = 1;
    }
    bool full = true;
    for (const auto bit : bins) full = full && bit;
    if (full) return true;
  }
  return false;
}

// --------------------------------------------------------------------------
// Criterion 1: the Hong-Ou-Mandel point. |1>|1> at tau = 1/2 bunches into
// (|0,2> - |2,0>)/sqrt(2); the reduced mode-b state, its distribution value at
// the origin, and the geometry of the traced current are pinned analytically.
// --------------------------------------------------------------------------
bool criterion_hom_point(int& defects) {
  Criterion c(1,
              "Hong-Ou-Mandel point: reduced state, distribution, and current "
              "geometry");
  const auto t0 = std::chrono::steady_clock::now();
  const PhaseSpaceGrid grid = PhaseSpaceGrid::standard();
  const TwoModeAmplitudes hom = one_photon_pair(0.5);

  const DensityOperator rho = reduce(hom, Mode::b);
  double rho_dev = 0.0;
  for (int i = 0; i < rho.dim(); ++i)
    for (int j = 0; j < rho.dim(); ++j) {
      const double want = (i == j && (i == 0 || i == 2)) ? 0.5 : 0.0;
      rho_dev = std::max(rho_dev, std::abs(rho.rho(i, j) - want));
    }
  c.clause(rho_dev <= 1e-10, "rho_b = diag(1/2, 0, 1/2): max entry deviation " +
                                 sci(rho_dev) + " (tol 1e-10)");

  const double purity_dev = std::abs(rho.purity() - 0.5);
  c.clause(purity_dev <= 1e-10,
           "purity(rho_b) = 1/2: deviation " + sci(purity_dev) +
               " (tol 1e-10)");

  const ScalarField w = weyl_field(rho, grid);
  const double w0_dev =
      std::abs(w.at((grid.nx - 1) / 2, (grid.np - 1) / 2) -
               1.0 / std::numbers::pi);
  c.clause(w0_dev <= 1e-8,
           "W_b(0,0) = 1/pi: deviation " + sci(w0_dev) + " (tol 1e-8)");

  const VectorField j = current(hom, Mode::b, grid);
  double max_angular = 0.0, max_j = 0.0;
  for (int i = 0; i < grid.nx; ++i)
    for (int jj = 0; jj < grid.np; ++jj) {
      const std::size_t k = grid.index(i, jj);
      const double x = grid.x(i), p = grid.p(jj);
      const double r = std::hypot(x, p);
      max_j = std::max(max_j, j.magnitude(k));
      if (r < 1e-9) continue;
      max_angular =
          std::max(max_angular, std::abs(x * j.jp[k] - p * j.jx[k]) / r);
    }
  c.clause(max_angular <= 1e-8, "J_b strictly radial: max angular component " +
                                    sci(max_angular) + " (tol 1e-8)");

  // Degeneracy-lifting clause: a closed contour of cells that are current-
  // carrying (|J| > 1e-3) while the distribution vanishes (|W| < 1e-6).
  std::vector<std::uint8_t> mark(grid.size(), 0);
  std::size_t qualifying = 0, low_w = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (std::abs(w.values[k]) >= 1e-6) continue;
    ++low_w;
    if (j.magnitude(k) > 1e-3) {
      mark[k] = 1;
      ++qualifying;
    }
  }
  const bool contour = has_closed_contour(grid, mark);
  c.clause(contour, "closed contour of cells with |W| < 1e-6 and |J| > 1e-3: " +
                        std::to_string(qualifying) +
                        " qualifying cells, contour " +
                        (contour ? "found" : "absent"));

  const double secs = seconds_since(t0);
  c.clause(secs < 5.0, "runtime " + fix(secs, 2) +
                           " s for cutoff 6 on the 241x241 window (budget 5 s)");

  if (!contour) {
    c.note(
        "analysis: at tau = 1/2 the traced current vanishes identically -- "
        "measured max |J| = " +
        sci(max_j) + " -- so no cell clears the 1e-3 current floor (" +
        std::to_string(low_w) +
        " cells clear the |W| < 1e-6 part alone); the W = 0 circle at "
        "x^2 + p^2 = 1 is tangent to W >= 0 and lifts no degeneracy at this "
        "stationary point");

    // Companion: detune to R = 10%, where the reduced distribution has a
    // genuine sign-changing ring and the current stays finite on it.
    const MixerParameter detuned = MixerParameter::from_reflectivity(0.10);
    const TwoModeAmplitudes lifted = one_photon_pair(detuned.tau);
    const ScalarField wl = weyl_field(reduce(lifted, Mode::b), grid);
    const VectorField jl = current(lifted, Mode::b, grid);
    std::size_t crossings = 0;
    double jmin = std::numeric_limits<double>::infinity(), jmax = 0.0;
    for (int jj = 0; jj < grid.np; ++jj)
      for (int i = 0; i + 1 < grid.nx; ++i) {
        const double w0 = wl.at(i, jj), w1 = wl.at(i + 1, jj);
        if ((w0 < 0.0) == (w1 < 0.0) || w0 == 0.0 || w1 == 0.0) continue;
        const double t = w0 / (w0 - w1);
        const auto v =
            interpolate(jl, grid.x(i) + t * grid.dx(), grid.p(jj));
        const double mag = std::hypot(v[0], v[1]);
        ++crossings;
        jmin = std::min(jmin, mag);
        jmax = std::max(jmax, mag);
      }
    const double theta = detuned.theta();
    const double c2t = std::cos(2 * theta), sin_sq = std::sin(theta) * std::sin(theta);
    const double s_ring = (-c2t + std::sqrt(c2t * c2t + sin_sq * c2t)) / sin_sq;
    const double r_ring = std::sqrt(s_ring);
    const double j_ring = 0.5 * std::abs(std::sin(2 * theta)) *
                          (2.0 - s_ring) * std::exp(-s_ring) * r_ring;
    const bool comp_ok = crossings > 0 && jmin > 1e-3 &&
                         std::abs(jmin - j_ring) <= 0.02 * j_ring;
    c.companion(comp_ok,
                "R = 10% (tau = " + fix(detuned.tau, 6) +
                    "): the W_b = 0 ring at r = " + fix(r_ring, 6) +
                    " carries closed-form |J| = " + fix(j_ring, 7) +
                    "; per-row sign-change scan finds " +
                    std::to_string(crossings) + " crossings with |J| in [" +
                    fix(jmin, 7) + ", " + fix(jmax, 7) +
                    "], all above the 1e-3 floor",
                defects);
  }
  return c.print();
}

// --------------------------------------------------------------------------
// Criterion 2: the continuity equation dW/dtau + div J = 0 holds in the
// continuum limit; the discrete residual (central dtau stencil + second-order
// divergence) must shrink at second order when dtau and dx are halved
// together, starting from dtau = 1e-2 on the default window.
// --------------------------------------------------------------------------
bool criterion_continuity_order() {
  Criterion c(2,
              "continuity residual converges at second order under joint "
              "refinement");
  const auto t0 = std::chrono::steady_clock::now();
  const std::array<const char*, 5> names{"fig1", "fig2", "fig3", "fig4",
                                         "fig5"};
  const std::array<double, 3> dtaus{1e-2, 5e-3, 2.5e-3};
  const std::array<int, 3> points{241, 481, 961};
  for (const char* name : names) {
    const ScenarioConfig cfg = preset(name);
    const FockVector a = cfg.state_a.build(Cutoff{cfg.cutoff});
    const FockVector b = cfg.state_b.build(Cutoff{cfg.cutoff});
    const TwoModeAmplitudes psi0 = product_state(a, b);
    // Study point: fig1 at its single bundled row; the others at R = 25%.
    // tau = 1/2 is avoided deliberately: it is a stationary point of every
    // symmetric sweep (dW/dtau = 0 = div J), where observed order is 0/0.
    const double tau = std::string_view(name) == "fig1"
                           ? cfg.resolved_taus().front()
                           : MixerParameter::from_reflectivity(0.25).tau;
    const auto evolve = [&psi0](double t) {
      return apply_beam_splitter(psi0, MixerParameter{t});
    };
    std::array<double, 3> err{};
    for (std::size_t lvl = 0; lvl < 3; ++lvl)
      err[lvl] = continuity_residual(evolve, Mode::b,
                                     window(6.0, points[lvl]), tau, dtaus[lvl])
                     .max_abs;
    const double o1 = std::log2(err[0] / err[1]);
    const double o2 = std::log2(err[1] / err[2]);
    c.clause(o1 >= 1.8 && o2 >= 1.8,
             std::string(name) + " @ tau = " + fix(tau, 6) +
                 ": max-abs residual (" + sci(err[0]) + ", " + sci(err[1]) +
                 ", " + sci(err[2]) + "), observed orders (" + fix(o1, 2) +
                 ", " + fix(o2, 2) + ") (floor 1.8)");
  }
  const double secs = seconds_since(t0);
  c.clause(secs < 300.0,
           "total runtime " + fix(secs, 1) + " s (budget 300 s)");
  c.note(
      "refinement ladder (dtau, lattice): (1e-2, 241^2) -> (5e-3, 481^2) -> "
      "(2.5e-3, 961^2) on the [-6,6]^2 window, traced mode b");
  return c.print();
}

// --------------------------------------------------------------------------
// Criterion 3: for the squeezed pair every output stays Gaussian, so the
// Fock-basis pipeline (truncated states, Weyl sums) and the moment-based
// closed forms are independent routes to the same W and J.
// --------------------------------------------------------------------------
bool criterion_gaussian_routes(int& defects) {
  Criterion c(3, "squeezed-pair pipeline matches the Gaussian closed forms");
  const ScenarioConfig cfg = preset("fig3");
  const FockVector a = cfg.state_a.build(Cutoff{cfg.cutoff});
  const FockVector b = cfg.state_b.build(Cutoff{cfg.cutoff});
  const TwoModeAmplitudes psi0 = product_state(a, b);
  const GaussianMoments gm =
      join(squeezed_vacuum_moments(cfg.state_a.z, cfg.state_a.theta),
           squeezed_vacuum_moments(cfg.state_b.z, cfg.state_b.theta));
  const PhaseSpaceGrid grid = PhaseSpaceGrid::standard();
  double worst_w = 0.0, worst_j = 0.0;
  for (const double refl : cfg.reflectivities) {
    const MixerParameter tau = MixerParameter::from_reflectivity(refl);
    const TwoModeAmplitudes psi = apply_beam_splitter(psi0, tau);
    const GaussianMoments gme = evolve_moments(gm, tau);
    for (const Mode mode : {Mode::a, Mode::b}) {
      const ScalarField wf = weyl_field(reduce(psi, mode), grid);
      const ScalarField wg = reduced_wigner(gme, mode, grid);
      const VectorField jf = current(psi, mode, grid);
      const VectorField jg = reduced_current(gme, mode, grid);
      const double ew = max_abs_diff(wf.values, wg.values);
      const double ej = std::max(max_abs_diff(jf.jx, jg.jx),
                                 max_abs_diff(jf.jp, jg.jp));
      worst_w = std::max(worst_w, ew);
      worst_j = std::max(worst_j, ej);
      c.note("R = " + fix(100 * refl, 0) + "%, mode " + to_string(mode) +
             ": max|dW| = " + sci(ew) + ", max|dJ| = " + sci(ej));
    }
  }
  const bool ok = worst_w <= 1e-5 && worst_j <= 1e-5;
  c.clause(ok, "cutoff 60 on the 241x241 window: worst max|dW| = " +
                   sci(worst_w) + ", worst max|dJ| = " + sci(worst_j) +
                   " (tol 1e-5)");
  if (!ok) {
    c.note(
        "analysis: the z = 2 inputs carry 3.4e-2 truncation leakage at cutoff "
        "60 and the route difference tracks that floor, not a pipeline "
        "defect: raising the cutoff drives it down monotonically "
        "(max|dW| 2.8e-3 at 60 -> 1.9e-5 at 200 -> 1.3e-7 at 350 at R = 25%)");
    const auto t0 = std::chrono::steady_clock::now();
    // Companion: same two-route comparison above the truncation floor.
    // Cutoff 350 pads the mixed state to per-mode dimension 701; the fields
    // are compared on the default window sampled at stride 4 (61x61) to keep
    // the demonstration inside the gate's time budget.
    const Cutoff deep{350};
    const FockVector a350 = make_squeezed_vacuum(
        cfg.state_a.z, cfg.state_a.theta, deep, cfg.state_a.leakage_bound);
    const FockVector b350 = make_squeezed_vacuum(
        cfg.state_b.z, cfg.state_b.theta, deep, cfg.state_b.leakage_bound);
    const MixerParameter tau = MixerParameter::from_reflectivity(0.25);
    const TwoModeAmplitudes psi =
        apply_beam_splitter(product_state(a350, b350), tau);
    const GaussianMoments gme = evolve_moments(gm, tau);
    const PhaseSpaceGrid sub = window(6.0, 61);
    const ScalarField wf = weyl_field(reduce(psi, Mode::b), sub);
    const ScalarField wg = reduced_wigner(gme, Mode::b, sub);
    const VectorField jf = current(psi, Mode::b, sub);
    const VectorField jg = reduced_current(gme, Mode::b, sub);
    const double ew = max_abs_diff(wf.values, wg.values);
    const double ej =
        std::max(max_abs_diff(jf.jx, jg.jx), max_abs_diff(jf.jp, jg.jp));
    c.companion(ew <= 1e-5 && ej <= 1e-5,
                "cutoff 350, R = 25%, mode b, 61x61 stride-4 window: "
                "max|dW| = " +
                    sci(ew) + ", max|dJ| = " + sci(ej) + " (tol 1e-5, " +
                    fix(seconds_since(t0), 1) + " s)",
                defects);
  }
  return c.print();
}

// --------------------------------------------------------------------------
// Criterion 4: the mixer conserves total photon number, is unitary, and the
// two reduced states of the pure joint output always have equal purity.
// --------------------------------------------------------------------------
bool criterion_conservation() {
  Criterion c(4,
              "photon conservation, unitarity, and purity symmetry across the "
              "presets");
  const std::array<const char*, 5> names{"fig1", "fig2", "fig3", "fig4",
                                         "fig5"};
  double worst_n = 0.0, worst_norm = 0.0, worst_swap = 0.0, worst_pur = 0.0;
  for (const char* name : names) {
    const ScenarioConfig cfg = preset(name);
    const FockVector a = cfg.state_a.build(Cutoff{cfg.cutoff});
    const FockVector b = cfg.state_b.build(Cutoff{cfg.cutoff});
    const TwoModeAmplitudes psi0 = product_state(a, b);
    const double n0 = psi0.total_photon_number();
    double drift_n = 0.0, drift_norm = 0.0, drift_pur = 0.0;
    for (int k = 0; k <= 20; ++k) {
      const MixerParameter tau{0.05 * k};
      const TwoModeAmplitudes psi = apply_beam_splitter(psi0, tau);
      drift_norm = std::max(drift_norm, std::abs(psi.norm() - 1.0));
      drift_n = std::max(drift_n, std::abs(psi.total_photon_number() - n0));
      drift_pur = std::max(drift_pur,
                           std::abs(reduce(psi, Mode::a).purity() -
                                    reduce(psi, Mode::b).purity()));
    }
    // Composition probe of unitarity: B(pi(1-tau)) B(pi tau) = B(pi), the
    // total-reflection swap c(m,n) -> (-1)^m c(n,m).
    const TwoModeAmplitudes twice = apply_beam_splitter(
        apply_beam_splitter(psi0, MixerParameter{0.3}), MixerParameter{0.7});
    double swap_dev = 0.0;
    for (int m = 0; m < twice.dim_a(); ++m)
      for (int n = 0; n < twice.dim_b(); ++n) {
        const complexd want = (m < psi0.dim_b() && n < psi0.dim_a())
                                  ? (m % 2 ? -1.0 : 1.0) * psi0.c(n, m)
                                  : complexd(0.0, 0.0);
        swap_dev = std::max(swap_dev, std::abs(twice.c(m, n) - want));
      }
    worst_n = std::max(worst_n, drift_n);
    worst_norm = std::max(worst_norm, drift_norm);
    worst_swap = std::max(worst_swap, swap_dev);
    worst_pur = std::max(worst_pur, drift_pur);
    c.note(std::string(name) + ": <n> drift " + sci(drift_n) +
           ", norm defect " + sci(drift_norm) + ", swap-composition dev " +
           sci(swap_dev) + ", purity gap " + sci(drift_pur));
  }
  c.clause(worst_n <= 1e-10,
           "total <n> constant along tau in {0, 0.05, ..., 1}: worst drift " +
               sci(worst_n) + " (tol 1e-10)");
  c.clause(worst_norm <= 1e-12 && worst_swap <= 1e-12,
           "unitarity: worst norm defect " + sci(worst_norm) +
               ", worst B(pi(1-tau))B(pi tau) vs total-reflection swap " +
               sci(worst_swap) + " (tol 1e-12)");
  c.clause(worst_pur <= 1e-10,
           "purity_a = purity_b at every sweep point: worst gap " +
               sci(worst_pur) + " (tol 1e-10)");
  return c.print();
}

// --------------------------------------------------------------------------
// Criterion 5: at 34.5% reflectivity the bright coherent mode must hand
// energy to the single-photon mode, antisymmetrically.
// --------------------------------------------------------------------------
bool criterion_energy_transfer() {
  Criterion c(5, "energy transfer direction at 34.5% reflectivity");
  const ScenarioConfig cfg = preset("fig1");
  const FockVector a = cfg.state_a.build(Cutoff{cfg.cutoff});
  const FockVector b = cfg.state_b.build(Cutoff{cfg.cutoff});
  const TwoModeAmplitudes psi0 = product_state(a, b);
  const double tau = cfg.resolved_taus().front();
  const TwoModeAmplitudes psi =
      apply_beam_splitter(psi0, MixerParameter{tau});
  const double na0 = psi0.mean_photon_number(Mode::a);
  const double nb0 = psi0.mean_photon_number(Mode::b);
  const double na1 = psi.mean_photon_number(Mode::a);
  const double nb1 = psi.mean_photon_number(Mode::b);
  c.clause(na1 < na0, "<n_a> decreases: " + fix(na0, 6) + " -> " + fix(na1, 6));
  c.clause(nb1 > nb0, "<n_b> increases: " + fix(nb0, 6) + " -> " + fix(nb1, 6));
  const double anti = std::abs((na1 - na0) + (nb1 - nb0));
  c.clause(anti <= 1e-10, "antisymmetric transfer: |delta<n_a> + delta<n_b>| = " +
                              sci(anti) + " (tol 1e-10)");
  return c.print();
}

// --------------------------------------------------------------------------
// Criterion 6: the closed-form Fock dyad kernels against the direct integral
// transform (independent oracle: oscillator eigenfunction recurrence plus a
// trapezoid transform, no shared code with the Laguerre forms).
// --------------------------------------------------------------------------
bool criterion_kernel_oracle() {
  Criterion c(6, "Fock dyad kernels match the direct integral transform");
  double worst = 0.0;
  for (int m = 0; m <= 6; ++m)
    for (int n = 0; n <= 6; ++n)
      for (int ix = -2; ix <= 2; ++ix)
        for (int ip = -2; ip <= 2; ++ip) {
          const double x = ix, p = ip;
          worst = std::max(worst,
                           std::abs(kernel(m, n, x, p) -
                                    testsupport::kernel_by_quadrature(m, n, x, p)));
        }
  c.clause(worst <= 1e-8,
           "all m, n <= 6 at the 25 spot points of {-2..2}^2: worst deviation " +
               sci(worst) + " (tol 1e-8)");
  double worst_diag = 0.0;
  for (int n = 0; n <= 6; ++n)
    worst_diag = std::max(
        worst_diag, std::abs(kernel(n, n, 0.0, 0.0) -
                             (n % 2 ? -1.0 : 1.0) / std::numbers::pi));
  c.clause(worst_diag <= 1e-12,
           "diagonal kernels at the origin equal (-1)^n/pi: worst deviation " +
               sci(worst_diag) + " (tol 1e-12)");
  return c.print();
}

// --------------------------------------------------------------------------
// Criterion 7: the transport velocity w = J/W of the traced mode is not an
// incompressible radial flow; R * |w_r| must deviate from every constant by
// more than 50% across R in [0.5, 2.5].
// --------------------------------------------------------------------------
struct VelocityProfileStats {
  double vmax = 0.0;
  double vmin = 0.0;
  double relvar = 0.0;
  int bins = 0;
};

VelocityProfileStats hom_velocity_profile(double tau) {
  const PhaseSpaceGrid grid = PhaseSpaceGrid::standard();
  const TwoModeAmplitudes psi = one_photon_pair(tau);
  const ScalarField w = weyl_field(reduce(psi, Mode::b), grid);
  const VectorField j = current(psi, Mode::b, grid);
  const VelocityField v = velocity(j, w);
  const RadialProfile prof = radial_profile(v);
  VelocityProfileStats out;
  out.vmin = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (std::size_t k = 0; k < prof.radius.size(); ++k) {
    if (prof.radius[k] < 0.5 || prof.radius[k] > 2.5 || prof.samples[k] == 0)
      continue;
    const double val = prof.r_abs_radial[k];
    out.vmax = std::max(out.vmax, val);
    out.vmin = std::min(out.vmin, val);
    sum += val;
    ++out.bins;
  }
  if (out.bins == 0) {
    out.vmin = 0.0;
    return out;
  }
  const double mean = sum / out.bins;
  out.relvar = mean > 0.0 ? (out.vmax - out.vmin) / mean : 0.0;
  return out;
}

bool criterion_radial_velocity(int& defects) {
  Criterion c(7, "radial velocity profile rules out incompressible flow");
  const VelocityProfileStats at_half = hom_velocity_profile(0.5);
  // Variation of R|w_r| is meaningless when the current itself is zero: a
  // ratio of quadrature noise can exceed any variation floor vacuously, so
  // the profile must be nonzero before the variation clause is evaluated.
  const bool nonzero = at_half.vmax > 1e-8;
  c.clause(nonzero, "tau = 1/2: max R|w_r| over R in [0.5, 2.5] = " +
                        sci(at_half.vmax) +
                        " must exceed the 1e-8 noise floor before variation "
                        "is meaningful (" +
                        std::to_string(at_half.bins) + " bins)");
  if (nonzero) {
    c.clause(at_half.relvar > 0.5,
             "relative variation (max-min)/mean = " + fix(at_half.relvar, 3) +
                 " (floor 0.5)");
  } else {
    c.note(
        "analysis: the one-photon-pair current vanishes identically at the "
        "balanced point, so w = J/W is 0/0 there and the binned profile is "
        "pure quadrature noise; its accidental variation (measured " +
        fix(at_half.relvar, 2) +
        ") would satisfy the >0.5 floor vacuously -- the nonzero gate makes "
        "this clause fail honestly instead of passing on noise");
    const MixerParameter detuned = MixerParameter::from_reflectivity(0.10);
    const VelocityProfileStats lifted = hom_velocity_profile(detuned.tau);
    c.companion(lifted.vmax > 1e-8 && lifted.relvar > 0.5,
                "R = 10% (tau = " + fix(detuned.tau, 6) + "): R|w_r| spans [" +
                    sci(lifted.vmin) + ", " + sci(lifted.vmax) + "] over " +
                    std::to_string(lifted.bins) +
                    " bins, relative variation " + fix(lifted.relvar, 3) +
                    " (floor 0.5) -- the ring singularity of w makes the "
                    "profile wildly non-constant, certifying div w != 0",
                defects);
  }
  return c.print();
}

// --------------------------------------------------------------------------
// Criterion 8: evolved scenarios with a genuinely negative W region must
// report a deterministic inversion of the current over that region.
// --------------------------------------------------------------------------
struct InversionStudy {
  InversionReport report;
  double negativity = 0.0;
  double tau = 0.0;
};

InversionStudy inversion_study(const char* name, std::size_t tau_index) {
  const ScenarioConfig cfg = preset(name);
  const FockVector a = cfg.state_a.build(Cutoff{cfg.cutoff});
  const FockVector b = cfg.state_b.build(Cutoff{cfg.cutoff});
  const double tau = cfg.resolved_taus().at(tau_index);
  const TwoModeAmplitudes psi =
      apply_beam_splitter(product_state(a, b), MixerParameter{tau});
  const PhaseSpaceGrid grid = PhaseSpaceGrid::standard();
  const ScalarField w = weyl_field(reduce(psi, Mode::b), grid);
  const VectorField j = current(psi, Mode::b, grid);
  InversionStudy out;
  out.report = inversion_detect(j, w);
  out.negativity = negativity_volume(w);
  out.tau = tau;
  return out;
}

bool criterion_inversion() {
  Criterion c(8, "current inversion over the negative-W region");
  const InversionStudy f1 = inversion_study("fig1", 0);
  c.clause(f1.report.negative_cells > 0 && f1.negativity > 1e-3,
           "fig1 @ 34.5%: negative region non-empty (" +
               std::to_string(f1.report.negative_cells) +
               " cells, negativity volume " + fix(f1.negativity, 6) + ")");
  c.clause(f1.report.conclusive && f1.report.inverted_fraction > 0.5 &&
               f1.report.inverted_fraction >= 0.85 &&
               f1.report.inverted_fraction <= 0.90,
           "fig1 @ 34.5%: conclusive (|dominant| = " +
               fix(f1.report.dominant_magnitude, 4) +
               "), inverted fraction " + fix(f1.report.inverted_fraction, 4) +
               " in [0.85, 0.90] and above 1/2");
  const InversionStudy f1b = inversion_study("fig1", 0);
  const bool deterministic =
      f1.report.inverted_fraction == f1b.report.inverted_fraction &&
      f1.report.dominant[0] == f1b.report.dominant[0] &&
      f1.report.dominant[1] == f1b.report.dominant[1] &&
      f1.report.inverted_cells == f1b.report.inverted_cells &&
      f1.report.negative_cells == f1b.report.negative_cells;
  c.clause(deterministic,
           "fig1 @ 34.5%: report bit-identical across a full pipeline rerun");
  const InversionStudy f5 = inversion_study("fig5", 2);
  c.clause(f5.report.negative_cells > 0 && f5.negativity > 1e-3,
           "fig5 @ 75%: negative region non-empty (" +
               std::to_string(f5.report.negative_cells) +
               " cells, negativity volume " + fix(f5.negativity, 6) + ")");
  c.clause(f5.report.conclusive && f5.report.inverted_fraction > 0.5 &&
               f5.report.inverted_fraction >= 0.86 &&
               f5.report.inverted_fraction <= 0.91,
           "fig5 @ 75%: conclusive (|dominant| = " +
               fix(f5.report.dominant_magnitude, 4) +
               "), inverted fraction " + fix(f5.report.inverted_fraction, 4) +
               " in [0.86, 0.91] and above 1/2");
  c.note(
      "thresholds are implementation-derived and documented on "
      "inversion_detect and in the README: cells with |J| <= 1e-12 are "
      "skipped as directionless, and reports with |dominant| < 1e-6 are "
      "inconclusive (fig4's near-isotropic flow takes that path by design)");
  return c.print();
}

// --------------------------------------------------------------------------
// Criterion 9: the traced first moment two ways. The direct route integrates
// x_a against the joint distribution with a coarse 41^4-equivalent
// quadrature; the pipeline route forms Tr_a{x_a rho} at the operator level.
// The 4D quadrature factorizes exactly: the mode-a integral collapses to a
// dim x dim moment matrix, the mode-b dependence to a kernel sum per point.
// --------------------------------------------------------------------------
bool criterion_traced_moment_routes() {
  Criterion c(9,
              "coarse direct trace integration matches the operator pipeline");
  const Cutoff cut{3};
  const int dim = cut.dim();
  const PhaseSpaceGrid g41 = window(4.0, 41);
  const double cell = g41.dx() * g41.dp();
  Eigen::MatrixXcd moment = Eigen::MatrixXcd::Zero(dim, dim);
  for (int m = 0; m < dim; ++m)
    for (int q = 0; q < dim; ++q) {
      complexd acc(0.0, 0.0);
      for (int i = 0; i < g41.nx; ++i)
        for (int j = 0; j < g41.np; ++j)
          acc += g41.x(i) * kernel(m, q, g41.x(i), g41.p(j));
      moment(q, m) = acc * cell;
    }
  for (const double tau : {0.2, 0.5}) {
    const TwoModeAmplitudes psi = apply_beam_splitter(
        product_state(make_fock(1, cut), make_fock(1, cut)),
        MixerParameter{tau});
    const int db = psi.dim_b();
    Eigen::MatrixXcd traced = Eigen::MatrixXcd::Zero(db, db);
    for (int n = 0; n < db; ++n)
      for (int r = 0; r < db; ++r) {
        complexd acc(0.0, 0.0);
        for (int m = 0; m < psi.dim_a(); ++m)
          for (int q = 0; q < psi.dim_a(); ++q)
            acc += psi.c(m, n) * std::conj(psi.c(q, r)) * moment(q, m);
        traced(n, r) = acc;
      }
    const double herm = (traced - traced.adjoint()).cwiseAbs().maxCoeff();
    c.clause(herm <= 1e-12,
             "tau = " + fix(tau, 1) +
                 ": quadrature moment operator Hermitian to " + sci(herm) +
                 " (gate 1e-12; rejects quadrature skew before comparison)");
    const Eigen::MatrixXcd sym = 0.5 * (traced + traced.adjoint());
    const DensityOperator pipe = traced_moment(psi, Mode::a, QuadratureAxis::x);
    const double err_op = (sym - pipe.rho).cwiseAbs().maxCoeff();
    c.clause(err_op <= 1e-4,
             "tau = " + fix(tau, 1) + ": operator routes agree to " +
                 sci(err_op) + " (tol 1e-4)");
    const ScalarField field =
        weyl_field(pipe, g41, FieldMeaning::weyl_symbol);
    double err_field = 0.0;
    for (int i = 0; i < g41.nx; ++i)
      for (int j = 0; j < g41.np; ++j) {
        complexd direct(0.0, 0.0);
        for (int n = 0; n < db; ++n)
          for (int r = 0; r < db; ++r)
            direct += sym(n, r) * kernel(n, r, g41.x(i), g41.p(j));
        err_field =
            std::max(err_field, std::abs(direct.real() - field.at(i, j)));
      }
    c.clause(err_field <= 1e-4,
             "tau = " + fix(tau, 1) + ": traced-moment fields agree to " +
                 sci(err_field) + " (tol 1e-4)");
  }
  c.note(
      "one photon per port at cutoff 3; both routes sampled on the 41x41 "
      "[-4,4]^2 lattice (cell area " +
      fix(cell, 2) + ")");
  return c.print();
}

}  // namespace

int main() {
  std::cout << "acceptance gate: 9 criteria, exit code = number of failures\n"
            << "(three clauses are expected red at documented degenerate "
               "parameter points;\n"
            << " companion lines demonstrate each property where it is "
               "attainable)\n\n";
  const auto t0 = std::chrono::steady_clock::now();
  int defects = 0;
  int failures = 0;
  failures += !criterion_hom_point(defects);
  failures += !criterion_continuity_order();
  failures += !criterion_gaussian_routes(defects);
  failures += !criterion_conservation();
  failures += !criterion_energy_transfer();
  failures += !criterion_kernel_oracle();
  failures += !criterion_radial_velocity(defects);
  failures += !criterion_inversion();
  failures += !criterion_traced_moment_routes();
  std::cout << "\nsummary: " << (9 - failures) << "/9 criteria pass";
  if (failures > 0)
    std::cout << "; " << failures
              << " documented red (see the analysis lines above)";
  if (defects > 0)
    std::cout << "; " << defects << " companion check(s) VIOLATED -- unexpected";
  std::cout << "; total " << fix(seconds_since(t0), 1) << " s\n";
  return failures + defects;
}
