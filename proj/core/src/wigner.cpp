#include "wigmix/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <list>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace wigmix {

namespace {

constexpr double kPi = std::numbers::pi;

// The Laguerre recurrence holds values up to ~binom(m+d,m)*exp(s) before the
// exp(-s) in Z_d pulls the product back inside [-1/pi, 1/pi].  Keep every
// intermediate below DBL_MAX: s + dim*ln2 must stay clear of ln(DBL_MAX).
void require_no_overflow(double s_max, int dim, const char* where) {
  if (s_max + 0.7 * static_cast<double>(dim) > 700.0) {
    throw std::invalid_argument(
        std::string(where) +
        ": grid window too large for this cutoff (Laguerre recurrence would "
        "overflow); shrink the window or the cutoff");
  }
}

double grid_s_max(const PhaseSpaceGrid& grid) {
  const double x2 = std::max(grid.x_min * grid.x_min, grid.x_max * grid.x_max);
  const double p2 = std::max(grid.p_min * grid.p_min, grid.p_max * grid.p_max);
  return x2 + p2;
}

}  // namespace

complexd kernel(int m, int n, double x, double p) {
  if (m < 0 || n < 0) {
    throw std::invalid_argument("kernel: Fock indices must be non-negative");
  }
  if (m < n) return std::conj(kernel(n, m, x, p));

  const int d = m - n;
  const double s = x * x + p * p;
  if (s + 0.7 * (m + 1) > 700.0) {
    // true magnitude out here is below ~1e-260; avoid inf*0 in the recurrence
    return {0.0, 0.0};
  }
  const double r = std::hypot(x, p);
  if (d > 0 && r == 0.0) return {0.0, 0.0};

  // L_n^d(2s) by the stable upward three-term recurrence
  const double u = 2.0 * s;
  double lk = 1.0;       // L_0^d
  double lkm1 = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double next =
        ((2.0 * (k - 1) + d + 1.0 - u) * lk - (k - 1.0 + d) * lkm1) / k;
    lkm1 = lk;
    lk = next;
  }

  // ((-1)^n/pi) * sqrt(n!/m!) * (sqrt2 (x - i p))^d * exp(-s) * L; the
  // prefactor and power are combined in log-magnitude/phase form so that
  // large d never overflows on its own.
  double log_mag = 0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0)) - s;
  double phase = 0.0;
  if (d > 0) {
    log_mag += d * (0.5 * std::numbers::ln2 + std::log(r));
    phase = d * std::atan2(-p, x);
  }
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  const double mag = std::exp(log_mag) * lk;
  return (sign / kPi) * mag * complexd(std::cos(phase), std::sin(phase));
}

// ---------------------------------------------------------------------------
// WignerKernelTable

namespace {

std::size_t upper_pair_count(int dim) {
  return static_cast<std::size_t>(dim) * (dim + 1) / 2;
}

std::size_t upper_index(int m, int n, int dim) {
  // row-wise upper triangle, m <= n
  return static_cast<std::size_t>(m) * dim - static_cast<std::size_t>(m) * (m - 1) / 2 +
         static_cast<std::size_t>(n - m);
}

}  // namespace

WignerKernelTable::WignerKernelTable(const PhaseSpaceGrid& grid, Cutoff cutoff,
                                     std::size_t budget_bytes)
    : grid_(grid), cutoff_(cutoff) {
  grid_.validate();
  cutoff_.validate();
  const int dim = cutoff_.dim();
  require_no_overflow(grid_s_max(grid_), dim, "WignerKernelTable");
  const std::size_t bytes =
      upper_pair_count(dim) * grid_.size() * sizeof(complexd);
  if (bytes > budget_bytes) {
    throw std::invalid_argument(
        "WignerKernelTable: table would need " + std::to_string(bytes >> 20) +
        " MB (budget " + std::to_string(budget_bytes >> 20) +
        " MB); use weyl_field's batched evaluation for large cutoffs");
  }
  planes_.resize(upper_pair_count(dim));
  for (int m = 0; m < dim; ++m) {
    for (int n = m; n < dim; ++n) {
      auto& plane = planes_[upper_index(m, n, dim)];
      plane.resize(grid_.size());
      for (int i = 0; i < grid_.nx; ++i) {
        const double x = grid_.x(i);
        for (int j = 0; j < grid_.np; ++j) {
          plane[grid_.index(i, j)] = kernel(m, n, x, grid_.p(j));
        }
      }
    }
  }
}

complexd WignerKernelTable::at(int m, int n, std::size_t k) const {
  const int dim = cutoff_.dim();
  if (m < 0 || n < 0 || m >= dim || n >= dim) {
    throw std::invalid_argument("WignerKernelTable::at: index out of range");
  }
  if (m <= n) return planes_[upper_index(m, n, dim)][k];
  return std::conj(planes_[upper_index(n, m, dim)][k]);
}

const std::vector<complexd>& WignerKernelTable::plane(int m, int n) const {
  const int dim = cutoff_.dim();
  if (m < 0 || n < m || n >= dim) {
    throw std::invalid_argument(
        "WignerKernelTable::plane: requires 0 <= m <= n <= n_max");
  }
  return planes_[upper_index(m, n, dim)];
}

ScalarField WignerKernelTable::evaluate(const DensityOperator& op,
                                        FieldMeaning meaning) const {
  const int dim = cutoff_.dim();
  if (op.dim() != dim) {
    throw std::invalid_argument(
        "WignerKernelTable::evaluate: operator dimension does not match table");
  }
  op.require_hermitian();
  ScalarField out(grid_, meaning);
  const std::size_t size = grid_.size();
  for (int m = 0; m < dim; ++m) {
    // diagonal term: plane(m,m) is real up to rounding
    const double wmm = op.rho(m, m).real();
    if (wmm != 0.0) {
      const auto& pl = planes_[upper_index(m, m, dim)];
      for (std::size_t k = 0; k < size; ++k) out.values[k] += wmm * pl[k].real();
    }
    for (int n = m + 1; n < dim; ++n) {
      // op[m,n] K_{m,n} + op[n,m] K_{n,m} = 2 Re(op[m,n] K_{m,n})
      const complexd w = op.rho(m, n);
      if (w == complexd(0.0, 0.0)) continue;
      const auto& pl = planes_[upper_index(m, n, dim)];
      for (std::size_t k = 0; k < size; ++k) {
        out.values[k] += 2.0 * (w.real() * pl[k].real() - w.imag() * pl[k].imag());
      }
    }
  }
  return out;
}

std::size_t WignerKernelTable::memory_bytes() const {
  std::size_t bytes = 0;
  for (const auto& plane : planes_) bytes += plane.size() * sizeof(complexd);
  return bytes;
}

namespace {

struct TableCache {
  std::mutex mutex;
  // most recently used at the front
  std::list<std::shared_ptr<const WignerKernelTable>> entries;
};

TableCache& table_cache() {
  static TableCache cache;
  return cache;
}

}  // namespace

std::shared_ptr<const WignerKernelTable> WignerKernelTable::shared(
    const PhaseSpaceGrid& grid, Cutoff cutoff) {
  auto& cache = table_cache();
  std::lock_guard<std::mutex> lock(cache.mutex);
  for (auto it = cache.entries.begin(); it != cache.entries.end(); ++it) {
    if ((*it)->grid() == grid && (*it)->cutoff().n_max == cutoff.n_max) {
      cache.entries.splice(cache.entries.begin(), cache.entries, it);
      return cache.entries.front();
    }
  }
  auto table = std::make_shared<const WignerKernelTable>(grid, cutoff);
  cache.entries.push_front(table);
  std::size_t total = 0;
  for (const auto& entry : cache.entries) total += entry->memory_bytes();
  while (total > default_budget_bytes && cache.entries.size() > 1) {
    total -= cache.entries.back()->memory_bytes();
    cache.entries.pop_back();
  }
  return cache.entries.front();
}

// ---------------------------------------------------------------------------
// Batched Weyl evaluation
//
// weyl(op) = sum_{m,n} op[m,n] K_{m,n}
//          = sum_{d>=0} kappa_d Re{ Z_d(x,p) * sum_m coef[d][m] L_m^d(2s) },
//
// with Z_d = (sqrt2 (x - i p))^d exp(-s)/sqrt(d!)   (|Z_d| <= exp(d/2 - d^2/(4s))-ish, bounded),
//      coef[d][m] = ((-1)^m/pi) sqrt(m! d!/(m+d)!) op[m+d, m],
//      kappa_0 = 1, kappa_{d>0} = 2.
//
// Z_d carries the (x - i p)^d phase of the lower-triangle kernel K_{m+d,m},
// so each sub-diagonal of op pairs with it; the conjugate upper triangle is
// folded in by the Re{...} (op is Hermitian, checked below).
//
// Z_d is carried by the incremental update Z_{d+1} = Z_d * sqrt2 (x-ip)/sqrt(d+1),
// so no factorial or power is ever formed explicitly.  All operators in the
// batch share the per-point Laguerre ladder, which dominates the cost.

std::vector<ScalarField> weyl_fields(const std::vector<DensityOperator>& ops,
                                     const PhaseSpaceGrid& grid,
                                     const std::vector<FieldMeaning>& meanings) {
  grid.validate();
  if (ops.empty()) {
    throw std::invalid_argument("weyl_fields: no operators given");
  }
  if (meanings.size() != ops.size()) {
    throw std::invalid_argument(
        "weyl_fields: one meaning tag per operator required");
  }
  const int dim = ops.front().dim();
  for (const auto& op : ops) {
    if (op.dim() != dim) {
      throw std::invalid_argument(
          "weyl_fields: all operators must share one dimension");
    }
    op.require_hermitian();
  }
  require_no_overflow(grid_s_max(grid), dim, "weyl_fields");

  const std::size_t n_ops = ops.size();
  const int np = grid.np;

  // coefficient diagonals; coef[k][d] empty when the whole diagonal is zero
  std::vector<std::vector<std::vector<complexd>>> coef(n_ops);
  int max_d = -1;
  for (std::size_t k = 0; k < n_ops; ++k) {
    coef[k].resize(dim);
    for (int d = 0; d < dim; ++d) {
      double diag_max = 0.0;
      for (int m = 0; m + d < dim; ++m) {
        diag_max = std::max(diag_max, std::abs(ops[k].rho(m + d, m)));
      }
      if (diag_max == 0.0) continue;
      auto& cd = coef[k][d];
      cd.resize(dim - d);
      for (int m = 0; m + d < dim; ++m) {
        const double pref =
            ((m % 2 == 0) ? 1.0 : -1.0) / kPi *
            std::exp(0.5 * (std::lgamma(m + 1.0) + std::lgamma(d + 1.0) -
                            std::lgamma(m + d + 1.0)));
        cd[m] = pref * ops[k].rho(m + d, m);
      }
      max_d = std::max(max_d, d);
    }
  }

  std::vector<ScalarField> out;
  out.reserve(n_ops);
  for (std::size_t k = 0; k < n_ops; ++k) out.emplace_back(grid, meanings[k]);
  if (max_d < 0) return out;  // zero operators: zero fields

  // per-row axis samples shared by all rows
  std::vector<double> p_axis(np), sqrt2_p(np);
  for (int j = 0; j < np; ++j) {
    p_axis[j] = grid.p(j);
    sqrt2_p[j] = std::sqrt(2.0) * p_axis[j];
  }

#pragma omp parallel
  {
    std::vector<double> u(np), zr(np), zi(np), l0(np), l1(np);
    std::vector<std::vector<double>> accr(n_ops, std::vector<double>(np)),
        acci(n_ops, std::vector<double>(np));

#pragma omp for schedule(static)
    for (int i = 0; i < grid.nx; ++i) {
      const double x = grid.x(i);
      const double sqrt2_x = std::sqrt(2.0) * x;
      for (int j = 0; j < np; ++j) {
        const double s = x * x + p_axis[j] * p_axis[j];
        u[j] = 2.0 * s;
        zr[j] = std::exp(-s);  // Z_0 = exp(-s)
        zi[j] = 0.0;
      }
      for (int d = 0; d <= max_d; ++d) {
        bool any_live = false;
        for (std::size_t k = 0; k < n_ops; ++k) {
          if (!coef[k][d].empty()) {
            any_live = true;
            std::fill(accr[k].begin(), accr[k].end(), 0.0);
            std::fill(acci[k].begin(), acci[k].end(), 0.0);
          }
        }
        if (any_live) {
          const int m_count = dim - d;
          for (int m = 0; m < m_count; ++m) {
            // advance the shared ladder to L_m^d(u)
            if (m == 0) {
              std::fill(l0.begin(), l0.end(), 1.0);
            } else if (m == 1) {
              for (int j = 0; j < np; ++j) l1[j] = (1.0 + d) - u[j];
            } else {
              const double a = 2.0 * (m - 1) + d + 1.0;
              const double b = m - 1.0 + d;
              const double inv_m = 1.0 / m;
              for (int j = 0; j < np; ++j) {
                const double next = ((a - u[j]) * l1[j] - b * l0[j]) * inv_m;
                l0[j] = l1[j];
                l1[j] = next;
              }
            }
            const std::vector<double>& lm = (m == 0) ? l0 : l1;
            for (std::size_t k = 0; k < n_ops; ++k) {
              if (coef[k][d].empty()) continue;
              const complexd c = coef[k][d][m];
              if (c == complexd(0.0, 0.0)) continue;
              const double cr = c.real(), ci = c.imag();
              double* ar = accr[k].data();
              double* ai = acci[k].data();
              const double* lv = lm.data();
              for (int j = 0; j < np; ++j) {
                ar[j] += cr * lv[j];
                ai[j] += ci * lv[j];
              }
            }
          }
          const double kappa = (d == 0) ? 1.0 : 2.0;
          for (std::size_t k = 0; k < n_ops; ++k) {
            if (coef[k][d].empty()) continue;
            double* row = out[k].values.data() + grid.index(i, 0);
            const double* ar = accr[k].data();
            const double* ai = acci[k].data();
            for (int j = 0; j < np; ++j) {
              // kappa_d Re(Z_d * acc)
              row[j] += kappa * (zr[j] * ar[j] - zi[j] * ai[j]);
            }
          }
        }
        if (d < max_d) {
          // Z_{d+1} = Z_d * sqrt2 (x - i p)/sqrt(d+1)
          const double inv = 1.0 / std::sqrt(d + 1.0);
          const double a = sqrt2_x * inv;
          for (int j = 0; j < np; ++j) {
            const double b = -sqrt2_p[j] * inv;
            const double nr = zr[j] * a - zi[j] * b;
            zi[j] = zr[j] * b + zi[j] * a;
            zr[j] = nr;
          }
        }
      }
    }
  }
  return out;
}

ScalarField weyl_field(const DensityOperator& op, const PhaseSpaceGrid& grid,
                       FieldMeaning meaning) {
  std::vector<DensityOperator> ops{op};
  return std::move(weyl_fields(ops, grid, {meaning}).front());
}

std::vector<double> marginal(const ScalarField& field, QuadratureAxis axis) {
  if (field.meaning != FieldMeaning::wigner_distribution) {
    throw std::invalid_argument(
        "marginal: field must carry meaning wigner-distribution");
  }
  const PhaseSpaceGrid& grid = field.grid;
  std::vector<double> out;
  if (axis == QuadratureAxis::x) {
    out.assign(grid.nx, 0.0);
    for (int i = 0; i < grid.nx; ++i) {
      double sum = 0.0;
      for (int j = 0; j < grid.np; ++j) {
        const double w = (j == 0 || j == grid.np - 1) ? 0.5 : 1.0;
        sum += w * field.at(i, j);
      }
      out[i] = sum * grid.dp();
    }
  } else {
    out.assign(grid.np, 0.0);
    for (int j = 0; j < grid.np; ++j) {
      double sum = 0.0;
      for (int i = 0; i < grid.nx; ++i) {
        const double w = (i == 0 || i == grid.nx - 1) ? 0.5 : 1.0;
        sum += w * field.at(i, j);
      }
      out[j] = sum * grid.dx();
    }
  }
  return out;
}

}  // namespace wigmix
