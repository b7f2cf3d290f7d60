#include "wigmix/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wigmix {

const char* to_string(Mode m) { return m == Mode::a ? "a" : "b"; }

const char* to_string(FieldMeaning m) {
  switch (m) {
    case FieldMeaning::wigner_distribution: return "wigner-distribution";
    case FieldMeaning::weyl_symbol: return "weyl-symbol";
    case FieldMeaning::divergence: return "divergence";
    case FieldMeaning::residual: return "residual";
  }
  return "unknown";
}

void PhaseSpaceGrid::validate() const {
  if (nx < 2 || np < 2)
    throw std::invalid_argument("PhaseSpaceGrid: nx and np must be >= 2");
  if (!(x_max > x_min) || !(p_max > p_min))
    throw std::invalid_argument("PhaseSpaceGrid: extents must be ordered");
}

double ScalarField::integral() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * grid.dx() * grid.dp();
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double VectorField::magnitude(std::size_t k) const {
  return std::hypot(jx[k], jp[k]);
}

double VectorField::max_magnitude() const {
  double m = 0.0;
  for (std::size_t k = 0; k < jx.size(); ++k)
    m = std::max(m, jx[k] * jx[k] + jp[k] * jp[k]);
  return std::sqrt(m);
}

}  // namespace wigmix
