#include "nlse/lse_oracle.hpp"

#include <cmath>

#include "nlse/error.hpp"
#include "nlse/fit.hpp"

namespace nlse::lse {

std::complex<double> psi(double x, double t, double alpha) {
  if (!(t >= 0.0)) {
    throw DomainError("lse::psi requires t >= 0");
  }
  const std::complex<double> w(1.0, 2.0 * t);
  return std::polar(1.0, -0.5 * t) * std::cos(x) + alpha * std::exp(-x * x / w) / std::sqrt(w);
}

double peak_density(double t, double alpha) {
  if (!(t >= 0.0)) {
    throw DomainError("lse::peak_density requires t >= 0");
  }
  const double r = std::sqrt(1.0 + 4.0 * t * t);
  const std::complex<double> cross =
      alpha * std::sqrt(std::complex<double>(1.0, -2.0 * t)) / r * std::polar(1.0, 0.5 * t);
  return 1.0 + alpha * alpha / r + 2.0 * cross.real();
}

PeakSeries peak_series(double alpha, double t0, double t1, std::size_t samples) {
  if (!(t0 >= 0.0 && t1 > t0) || samples < 2) {
    throw DomainError("peak_series: need 0 <= t0 < t1 and >= 2 samples");
  }
  PeakSeries s;
  s.t.resize(samples);
  s.peak.resize(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(samples - 1);
    s.t[i] = t;
    s.peak[i] = peak_density(t, alpha);
  }
  return s;
}

EnvelopeFit envelope_exponent(double alpha, double t0, double t1, std::size_t samples) {
  PeakSeries s = peak_series(alpha, t0, t1, samples);
  for (double& v : s.peak) {
    v -= 1.0;
  }
  std::vector<double> px, py;
  for (const Peak& p : local_maxima(s.t, s.peak)) {
    if (p.y > 0.0) {
      px.push_back(p.x);
      py.push_back(p.y);
    }
  }
  const PowerLawFit fit = fit_power_law(px, py);
  return {fit.exponent, fit.prefactor, fit.points};
}

}  // namespace nlse::lse
