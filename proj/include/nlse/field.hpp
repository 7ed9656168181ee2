#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace nlse {

/// Uniform periodic grid x_i = x0 + i dx, i = 0..n-1, period n dx.
struct Grid {
  std::size_t n = 0;
  double x0 = 0.0;
  double dx = 0.0;

  static Grid periodic(std::size_t n, double x0, double length);

  double length() const noexcept { return static_cast<double>(n) * dx; }
  double x(std::size_t i) const noexcept { return x0 + static_cast<double>(i) * dx; }
  /// Throws DomainError unless n is a power of two and dx > 0.
  void validate() const;
};

struct ComplexField1D {
  Grid grid;
  std::vector<std::complex<double>> values;
  double time = 0.0;

  static ComplexField1D sample(const Grid& grid,
                               const std::function<std::complex<double>(double)>& f,
                               double time = 0.0);

  std::size_t size() const noexcept { return values.size(); }
  /// Grid sum dx sum |Psi|^2 (exact for band-limited periodic fields).
  double norm() const;
  /// Throws DomainError on grid/size mismatch or non-finite samples.
  void validate() const;
};

}  // namespace nlse
