#include "wigmix/currents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "wigmix/wigner.hpp"

namespace wigmix {

namespace {

void require_same_grid(const PhaseSpaceGrid& a, const PhaseSpaceGrid& b,
                       const char* what) {
  if (!(a == b)) {
    throw std::invalid_argument(std::string(what) +
                                ": fields live on different grids");
  }
}

/// d/dx along the first index: central interior, second-order one-sided rows.
void add_derivative_x(const PhaseSpaceGrid& g, const std::vector<double>& f,
                      std::vector<double>& out) {
  const double inv2h = 1.0 / (2.0 * g.dx());
  const int nx = g.nx, np = g.np;
  for (int j = 0; j < np; ++j) {
    out[g.index(0, j)] +=
        (-3.0 * f[g.index(0, j)] + 4.0 * f[g.index(1, j)] - f[g.index(2, j)]) *
        inv2h;
    out[g.index(nx - 1, j)] += (3.0 * f[g.index(nx - 1, j)] -
                                4.0 * f[g.index(nx - 2, j)] +
                                f[g.index(nx - 3, j)]) *
                               inv2h;
  }
  for (int i = 1; i < nx - 1; ++i) {
    for (int j = 0; j < np; ++j) {
      out[g.index(i, j)] +=
          (f[g.index(i + 1, j)] - f[g.index(i - 1, j)]) * inv2h;
    }
  }
}

/// d/dp along the second index, same stencils.
void add_derivative_p(const PhaseSpaceGrid& g, const std::vector<double>& f,
                      std::vector<double>& out) {
  const double inv2h = 1.0 / (2.0 * g.dp());
  const int nx = g.nx, np = g.np;
  for (int i = 0; i < nx; ++i) {
    out[g.index(i, 0)] +=
        (-3.0 * f[g.index(i, 0)] + 4.0 * f[g.index(i, 1)] - f[g.index(i, 2)]) *
        inv2h;
    out[g.index(i, np - 1)] += (3.0 * f[g.index(i, np - 1)] -
                                4.0 * f[g.index(i, np - 2)] +
                                f[g.index(i, np - 3)]) *
                               inv2h;
    for (int j = 1; j < np - 1; ++j) {
      out[g.index(i, j)] +=
          (f[g.index(i, j + 1)] - f[g.index(i, j - 1)]) * inv2h;
    }
  }
}

}  // namespace

VectorField current(const TwoModeAmplitudes& psi, Mode mode,
                    const PhaseSpaceGrid& grid) {
  const Mode traced = (mode == Mode::b) ? Mode::a : Mode::b;
  const double sign = (mode == Mode::b) ? 1.0 : -1.0;
  std::vector<DensityOperator> ops;
  ops.push_back(traced_moment(psi, traced, QuadratureAxis::x));
  ops.push_back(traced_moment(psi, traced, QuadratureAxis::p));
  const auto fields = weyl_fields(
      ops, grid, {FieldMeaning::weyl_symbol, FieldMeaning::weyl_symbol});

  VectorField out(grid, mode);
  const double scale = sign * std::numbers::pi / 2.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    out.jx[k] = scale * fields[0].values[k];
    out.jp[k] = scale * fields[1].values[k];
  }
  return out;
}

ScalarField divergence(const VectorField& field) {
  const PhaseSpaceGrid& g = field.grid;
  if (g.nx < 3 || g.np < 3) {
    throw std::invalid_argument(
        "divergence: need at least 3 grid points per axis");
  }
  ScalarField out(g, FieldMeaning::divergence);
  add_derivative_x(g, field.jx, out.values);
  add_derivative_p(g, field.jp, out.values);
  return out;
}

ContinuityResidual continuity_residual(
    const std::function<TwoModeAmplitudes(double)>& psi_fn, Mode mode,
    const PhaseSpaceGrid& grid, double tau, double dtau) {
  if (!(dtau > 0.0)) {
    throw std::invalid_argument("continuity_residual: dtau must be positive");
  }
  if (tau - dtau < 0.0 || tau + dtau > 1.0) {
    throw std::invalid_argument(
        "continuity_residual: tau +- dtau leaves the mixing domain [0, 1]");
  }

  const TwoModeAmplitudes psi_plus = psi_fn(tau + dtau);
  const TwoModeAmplitudes psi_minus = psi_fn(tau - dtau);
  const TwoModeAmplitudes psi_mid = psi_fn(tau);
  const Mode traced = (mode == Mode::b) ? Mode::a : Mode::b;
  const double sign = (mode == Mode::b) ? 1.0 : -1.0;

  // One batched Weyl evaluation: the Laguerre ladder is shared between the
  // two distribution snapshots and the two current components.
  std::vector<DensityOperator> ops;
  ops.push_back(reduce(psi_plus, mode));
  ops.push_back(reduce(psi_minus, mode));
  ops.push_back(traced_moment(psi_mid, traced, QuadratureAxis::x));
  ops.push_back(traced_moment(psi_mid, traced, QuadratureAxis::p));
  const auto fields = weyl_fields(
      ops, grid,
      {FieldMeaning::wigner_distribution, FieldMeaning::wigner_distribution,
       FieldMeaning::weyl_symbol, FieldMeaning::weyl_symbol});

  VectorField j(grid, mode, tau);
  const double scale = sign * std::numbers::pi / 2.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    j.jx[k] = scale * fields[2].values[k];
    j.jp[k] = scale * fields[3].values[k];
  }

  ContinuityResidual res;
  res.field = divergence(j);
  res.field.meaning = FieldMeaning::residual;
  const double inv2dt = 1.0 / (2.0 * dtau);
  double sumsq = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    double r = (fields[0].values[k] - fields[1].values[k]) * inv2dt +
               res.field.values[k];
    res.field.values[k] = r;
    res.max_abs = std::max(res.max_abs, std::abs(r));
    sumsq += r * r;
  }
  res.l2 = std::sqrt(sumsq * grid.dx() * grid.dp());
  return res;
}

VelocityField velocity(const VectorField& current_field,
                       const ScalarField& wigner,
                       std::optional<double> threshold, double j_floor) {
  require_same_grid(current_field.grid, wigner.grid, "velocity");
  const PhaseSpaceGrid& g = current_field.grid;

  VelocityField out;
  out.grid = g;
  out.wx.assign(g.size(), 0.0);
  out.wp.assign(g.size(), 0.0);
  out.valid.assign(g.size(), 0);
  out.threshold = threshold ? *threshold : 1e-4 * wigner.max_abs();
  out.j_floor = j_floor;

  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j < g.np; ++j) {
      const std::size_t k = g.index(i, j);
      const double w = wigner.values[k];
      if (std::abs(w) >= out.threshold) {
        out.valid[k] = 1;
        out.wx[k] = current_field.jx[k] / w;
        out.wp[k] = current_field.jp[k] / w;
      } else if (current_field.magnitude(k) > j_floor) {
        out.singular_cells.emplace_back(i, j);
      }
    }
  }
  return out;
}

namespace {

struct ProfileInput {
  const PhaseSpaceGrid* grid;
  const std::vector<double>* fx;
  const std::vector<double>* fp;
  const std::vector<std::uint8_t>* valid;  // nullptr: every cell contributes
};

RadialProfile profile_impl(const ProfileInput& in,
                           const RadialProfileSettings& s) {
  const PhaseSpaceGrid& g = *in.grid;
  const double width = s.bin_width > 0.0 ? s.bin_width
                                         : std::max(g.dx(), g.dp());
  double r_max = s.r_max;
  if (r_max <= 0.0) {
    r_max = std::min(std::min(s.center_x - g.x_min, g.x_max - s.center_x),
                     std::min(s.center_p - g.p_min, g.p_max - s.center_p));
  }
  const int nbins = static_cast<int>(std::floor(r_max / width));
  if (nbins < 1) {
    throw std::invalid_argument(
        "radial_profile: window too small for one radius bin");
  }

  RadialProfile out;
  out.radius.resize(nbins);
  out.mean_radial.assign(nbins, 0.0);
  out.r_abs_radial.assign(nbins, 0.0);
  out.samples.assign(nbins, 0);
  for (int b = 0; b < nbins; ++b) out.radius[b] = (b + 0.5) * width;

  // Per-bin, per-quadrant sums: the four open quadrants of a square-celled
  // lattice are exact 90-degree rotation images of each other about a
  // symmetric center, so a rotationally symmetric field must give them
  // identical means. Cells on the axes belong to no single quadrant and
  // would skew whichever one they were assigned to; they contribute to the
  // ring means but not to the symmetry check. The axis test allows for the
  // rounding of x_min + i*dx, which never lands exactly on zero.
  std::vector<double> qsum(static_cast<std::size_t>(nbins) * 4, 0.0);
  std::vector<int> qcount(static_cast<std::size_t>(nbins) * 4, 0);
  std::vector<double> bin_sum(static_cast<std::size_t>(nbins), 0.0);
  std::vector<int> bin_count(static_cast<std::size_t>(nbins), 0);
  const double axis_tol = 1e-9 * width;

  for (int i = 0; i < g.nx; ++i) {
    const double x = g.x(i) - s.center_x;
    for (int j = 0; j < g.np; ++j) {
      const std::size_t k = g.index(i, j);
      if (in.valid && !(*in.valid)[k]) continue;
      const double p = g.p(j) - s.center_p;
      const double r = std::hypot(x, p);
      if (r < 1e-12) continue;
      // Nudged binning: cells whose radius lands exactly on a bin edge
      // (Pythagorean index pairs) must fall into the same bin in all four
      // quadrants despite the rounding of x_min + i*dx, or the symmetry
      // check below would compare rings of different membership.
      const double scaled = r / width + 1e-9;
      if (scaled >= static_cast<double>(nbins)) continue;
      const int b = static_cast<int>(scaled);
      const double radial = ((*in.fx)[k] * x + (*in.fp)[k] * p) / r;
      bin_sum[b] += radial;
      ++bin_count[b];
      if (std::abs(x) <= axis_tol || std::abs(p) <= axis_tol) continue;
      const int q = (x > 0.0 ? (p > 0.0 ? 0 : 3) : (p > 0.0 ? 1 : 2));
      qsum[static_cast<std::size_t>(b) * 4 + q] += radial;
      ++qcount[static_cast<std::size_t>(b) * 4 + q];
    }
  }

  for (int b = 0; b < nbins; ++b) {
    out.samples[b] = bin_count[b];
    if (bin_count[b] > 0) {
      out.mean_radial[b] = bin_sum[b] / bin_count[b];
      out.r_abs_radial[b] = out.radius[b] * std::abs(out.mean_radial[b]);
    }
  }

  double scale = 0.0;
  for (int b = 0; b < nbins; ++b) {
    scale = std::max(scale, std::abs(out.mean_radial[b]));
  }
  double imbalance = 0.0;
  for (int b = 0; b < nbins; ++b) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    bool complete = true;
    for (int q = 0; q < 4; ++q) {
      const std::size_t idx = static_cast<std::size_t>(b) * 4 + q;
      if (qcount[idx] == 0) {
        complete = false;
        break;
      }
      const double mean = qsum[idx] / qcount[idx];
      lo = std::min(lo, mean);
      hi = std::max(hi, mean);
    }
    if (complete) imbalance = std::max(imbalance, hi - lo);
  }
  out.asymmetry = scale > 0.0 ? imbalance / scale : 0.0;
  out.symmetric = out.asymmetry <= s.asymmetry_tol;
  if (!out.symmetric) {
    out.annotation = "angular asymmetry " + std::to_string(out.asymmetry) +
                     " exceeds tolerance " + std::to_string(s.asymmetry_tol) +
                     "; the angular average is not a faithful summary";
  }
  return out;
}

}  // namespace

RadialProfile radial_profile(const VectorField& field,
                             const RadialProfileSettings& settings) {
  return profile_impl({&field.grid, &field.jx, &field.jp, nullptr}, settings);
}

RadialProfile radial_profile(const VelocityField& field,
                             const RadialProfileSettings& settings) {
  return profile_impl({&field.grid, &field.wx, &field.wp, &field.valid},
                      settings);
}

InversionReport inversion_detect(const VectorField& j, const ScalarField& w) {
  require_same_grid(j.grid, w.grid, "inversion_detect");

  InversionReport rep;
  double wsum = 0.0;
  double mx = 0.0, mp = 0.0;
  for (std::size_t k = 0; k < w.grid.size(); ++k) {
    if (w.values[k] <= 0.0) continue;
    ++rep.positive_cells;
    wsum += w.values[k];
    const double jn = j.magnitude(k);
    if (jn > 1e-12) {
      mx += w.values[k] * j.jx[k] / jn;
      mp += w.values[k] * j.jp[k] / jn;
    }
  }
  if (wsum > 0.0) {
    mx /= wsum;
    mp /= wsum;
  }
  rep.dominant_magnitude = std::hypot(mx, mp);
  rep.conclusive = rep.dominant_magnitude > 1e-6;
  if (rep.conclusive) {
    rep.dominant = {mx / rep.dominant_magnitude, mp / rep.dominant_magnitude};
  }

  for (std::size_t k = 0; k < w.grid.size(); ++k) {
    if (w.values[k] >= 0.0) continue;
    ++rep.negative_cells;
    if (j.jx[k] * rep.dominant[0] + j.jp[k] * rep.dominant[1] < 0.0) {
      ++rep.inverted_cells;
    }
  }
  rep.inverted_fraction =
      rep.negative_cells > 0
          ? static_cast<double>(rep.inverted_cells) / rep.negative_cells
          : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

}  // namespace wigmix
