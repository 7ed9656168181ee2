#include "nlse/fit.hpp"

#include <cmath>

#include "nlse/error.hpp"

namespace nlse {

std::vector<Peak> local_maxima(std::span<const double> x, std::span<const double> y) {
  std::vector<Peak> peaks;
  const std::size_t n = std::min(x.size(), y.size());
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(y[i] > y[i - 1] && y[i] >= y[i + 1])) {
      continue;
    }
    // Parabola through the three samples (uniform or not).
    const double x0 = x[i - 1], x1 = x[i], x2 = x[i + 1];
    const double y0 = y[i - 1], y1 = y[i], y2 = y[i + 1];
    const double d01 = (y1 - y0) / (x1 - x0);
    const double d12 = (y2 - y1) / (x2 - x1);
    const double a = (d12 - d01) / (x2 - x0);
    Peak p{x1, y1};
    if (a < 0.0) {
      const double b = d01 - a * (x0 + x1);
      const double xv = -b / (2.0 * a);
      if (xv > x0 && xv < x2) {
        p.x = xv;
        p.y = y1 + (xv - x1) * (d01 + a * (xv - x0));
      }
    }
    peaks.push_back(p);
  }
  return peaks;
}

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) {
      continue;
    }
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) {
    throw DomainError("power-law fit needs at least two positive points");
  }
  const double dn = static_cast<double>(n);
  const double denom = dn * sxx - sx * sx;
  if (denom == 0.0) {
    throw DomainError("power-law fit: abscissae are degenerate");
  }
  PowerLawFit fit;
  fit.exponent = (dn * sxy - sx * sy) / denom;
  fit.prefactor = std::exp((sy - fit.exponent * sx) / dn);
  fit.points = n;
  return fit;
}

}  // namespace nlse
