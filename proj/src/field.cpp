#include "nlse/field.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "nlse/error.hpp"

namespace nlse {

Grid Grid::periodic(std::size_t n, double x0, double length) {
  Grid g{n, x0, n > 0 ? length / static_cast<double>(n) : 0.0};
  g.validate();
  return g;
}

void Grid::validate() const {
  if (!std::has_single_bit(n)) {
    throw DomainError("grid size must be a power of two, got " + std::to_string(n));
  }
  if (!(dx > 0.0) || !std::isfinite(dx) || !std::isfinite(x0)) {
    throw DomainError("grid spacing must be positive and finite");
  }
}

ComplexField1D ComplexField1D::sample(const Grid& grid,
                                      const std::function<std::complex<double>(double)>& f,
                                      double time) {
  grid.validate();
  ComplexField1D field{grid, std::vector<std::complex<double>>(grid.n), time};
  for (std::size_t i = 0; i < grid.n; ++i) {
    field.values[i] = f(grid.x(i));
  }
  field.validate();
  return field;
}

double ComplexField1D::norm() const {
  double sum = 0.0;
  for (const auto& v : values) {
    sum += std::norm(v);
  }
  return sum * grid.dx;
}

void ComplexField1D::validate() const {
  grid.validate();
  if (values.size() != grid.n) {
    throw DomainError("field sample count does not match its grid");
  }
  for (const auto& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw DomainError("field contains non-finite samples");
    }
  }
}

}  // namespace nlse
