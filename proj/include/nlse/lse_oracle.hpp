#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace nlse::lse {

/// psi(x, t) = e^{-it/2} cos x + alpha e^{-x^2/(1+2it)} / sqrt(1+2it), the
/// free evolution i psi_t = -psi_xx / 2 of cos x + alpha e^{-x^2}.
/// Principal square-root branch. Throws DomainError for t < 0.
std::complex<double> psi(double x, double t, double alpha);

/// |psi(0, t)|^2 written as
/// 1 + alpha^2/sqrt(1+4t^2) + alpha sqrt(1-2it)/sqrt(1+4t^2) e^{it/2} + c.c.
double peak_density(double t, double alpha);

struct EnvelopeFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  std::size_t maxima = 0;
};

/// Power-law fit to the local maxima of |psi(0,t)|^2 - 1 on [t0, t1].
EnvelopeFit envelope_exponent(double alpha, double t0, double t1, std::size_t samples = 200001);

struct PeakSeries {
  std::vector<double> t;
  std::vector<double> peak;
};

PeakSeries peak_series(double alpha, double t0, double t1, std::size_t samples);

}  // namespace nlse::lse
