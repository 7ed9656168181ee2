#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nlse {

struct Peak {
  double x;
  double y;
};

/// Interior local maxima of y(x), refined by a three-point parabola.
std::vector<Peak> local_maxima(std::span<const double> x, std::span<const double> y);

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  std::size_t points = 0;
};

/// Least-squares fit of log y = p log x + log C over points with x, y > 0.
/// Throws DomainError with fewer than two usable points.
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

}  // namespace nlse
