#pragma once

#include <memory>
#include <vector>

#include "wigmix/fock.hpp"
#include "wigmix/grid.hpp"

namespace wigmix {

// Weyl transform of the Fock dyad |m><n|, scaled by 1/(2*pi) so that
// weyl_field(rho) integrates to Tr(rho):
//
//   for m >= n, with s = x^2 + p^2 and d = m - n:
//     K_{m,n}(x,p) = ((-1)^n / pi) * sqrt(n!/m!) * (sqrt(2)(x - i p))^d
//                    * exp(-s) * L_n^d(2 s)
//   and K_{m,n} = conj(K_{n,m}) for m < n.
//
// The sign/conjugation convention was fixed by direct numerical integration
// of the defining Wigner transform (see tests/support/oracles.*); diagonal
// kernels satisfy K_{n,n}(0,0) = (-1)^n / pi.
complexd kernel(int m, int n, double x, double p);

// Materialized kernel planes for one (grid, cutoff) pair.
//
// Stores the upper triangle m <= n (the lower triangle follows from
// K_{m,n} = conj(K_{n,m})) as row-major complex planes.  Construction
// enforces a memory budget: a table of (n_max+1)(n_max+2)/2 complex planes
// must fit in at most budget_bytes (default 100 MB), which limits tables to
// small cutoffs; large-cutoff evaluation goes through weyl_field's batched
// path instead and needs no table.
class WignerKernelTable {
 public:
  WignerKernelTable(const PhaseSpaceGrid& grid, Cutoff cutoff,
                    std::size_t budget_bytes = default_budget_bytes);

  // Process-wide cache keyed by value equality of (grid metadata, cutoff).
  // Entries are immutable once built; the registry evicts oldest entries to
  // keep the cached total under the budget.
  static std::shared_ptr<const WignerKernelTable> shared(
      const PhaseSpaceGrid& grid, Cutoff cutoff);

  const PhaseSpaceGrid& grid() const { return grid_; }
  Cutoff cutoff() const { return cutoff_; }

  // Kernel value K_{m,n} at flattened grid index k.
  complexd at(int m, int n, std::size_t k) const;

  // Stored plane for m <= n, length grid().size(), row-major.
  const std::vector<complexd>& plane(int m, int n) const;

  // weyl(op) evaluated by direct dot products against the cached planes.
  // Same contract as weyl_field below; used as an independent route by the
  // test suite and for repeated small-cutoff evaluations.
  ScalarField evaluate(const DensityOperator& op,
                       FieldMeaning meaning = FieldMeaning::wigner_distribution) const;

  std::size_t memory_bytes() const;

  static constexpr std::size_t default_budget_bytes = 100u << 20;

 private:
  PhaseSpaceGrid grid_;
  Cutoff cutoff_;
  std::vector<std::vector<complexd>> planes_;  // upper triangle, m <= n
};

// weyl(op)(x,p) = sum_{m,n} op[m,n] * K_{m,n}(x,p).
//
// op must be Hermitian (checked; violation above 1e-12 relative is
// rejected), which makes the result exactly real: the (m,n)/(n,m) terms are
// evaluated as one conjugate pair, so no imaginary residue is ever formed.
// For a trace-1 operator on a grid that captures its support the field
// integrates to ~1.
ScalarField weyl_field(const DensityOperator& op, const PhaseSpaceGrid& grid,
                       FieldMeaning meaning = FieldMeaning::wigner_distribution);

// Batched variant: evaluates several Hermitian operators of equal dimension
// in one sweep over the grid, sharing the Laguerre recurrences and the
// geometric factors between all outputs.  This is the workhorse for current
// components and continuity stencils, where 2-4 fields per grid are needed.
std::vector<ScalarField> weyl_fields(const std::vector<DensityOperator>& ops,
                                     const PhaseSpaceGrid& grid,
                                     const std::vector<FieldMeaning>& meanings);

// Integrate out the other axis by the trapezoid rule.  Requires
// meaning == wigner_distribution; the result samples the position (axis x)
// or momentum (axis p) probability density on the grid's axis points.
std::vector<double> marginal(const ScalarField& field, QuadratureAxis axis);

}  // namespace wigmix
