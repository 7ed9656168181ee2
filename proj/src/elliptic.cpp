#include "nlse/elliptic.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "nlse/error.hpp"

namespace nlse {
namespace {

constexpr int kMaxAgmIterations = 64;
constexpr double kAgmTolerance = 1e-15;

bool in_unit_interval(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

}  // namespace

EllipticParameter::EllipticParameter(double m) : m_(m), mc_(1.0 - m) {
  if (!in_unit_interval(m)) {
    throw DomainError("elliptic parameter m must lie in [0, 1]");
  }
}

EllipticParameter EllipticParameter::from_complement(double mc) {
  if (!in_unit_interval(mc)) {
    throw DomainError("complementary elliptic parameter must lie in [0, 1]");
  }
  return EllipticParameter(1.0 - mc, mc);
}

double complete_elliptic_K(EllipticParameter p) {
  if (p.complement() == 0.0) {
    throw DivergenceError("K(m) diverges at m = 1");
  }
  double a = 1.0;
  double b = std::sqrt(p.complement());
  for (int i = 0; i < kMaxAgmIterations; ++i) {
    const double next_a = 0.5 * (a + b);
    const double next_b = std::sqrt(a * b);
    const bool done = std::abs(next_a - a) <= kAgmTolerance * next_a;
    a = next_a;
    b = next_b;
    if (done || a == b) {
      break;
    }
  }
  return std::numbers::pi / (a + b);
}

double complete_elliptic_K(double m) {
  if (m == 1.0) {
    throw DivergenceError("K(m) diverges at m = 1");
  }
  if (!(m >= 0.0 && m < 1.0)) {
    throw DomainError("K(m) requires 0 <= m < 1");
  }
  return complete_elliptic_K(EllipticParameter(m));
}

JacobiValues jacobi_elliptic(double u, EllipticParameter p) {
  if (!std::isfinite(u)) {
    throw DomainError("jacobi_elliptic: argument must be finite");
  }
  const double m = p.m();
  const double mc = p.complement();
  if (m == 0.0) {
    return {std::sin(u), std::cos(u), 1.0};
  }
  if (mc == 0.0) {
    const double sech = 1.0 / std::cosh(u);
    return {std::tanh(u), sech, sech};
  }

  // Reduce to one real period [-2K, 2K].
  const double period = 4.0 * complete_elliptic_K(p);
  u = std::remainder(u, period);

  // Descending Landen / AGM sweep; c_{n+1} = c_n^2 / (4 a_{n+1}) avoids
  // the cancellation of (a_n - b_n) / 2.
  std::array<double, kMaxAgmIterations + 1> a{};
  std::array<double, kMaxAgmIterations + 1> c{};
  a[0] = 1.0;
  c[0] = std::sqrt(m);
  double b = std::sqrt(mc);
  int n = 0;
  while (n < kMaxAgmIterations && c[n] > 1e-17 * a[n]) {
    a[n + 1] = 0.5 * (a[n] + b);
    c[n + 1] = c[n] * c[n] / (4.0 * a[n + 1]);
    b = std::sqrt(a[n] * b);
    ++n;
  }

  double phi = std::ldexp(a[n] * u, n);
  for (int i = n; i > 0; --i) {
    phi = 0.5 * (phi + std::asin(c[i] / a[i] * std::sin(phi)));
  }
  const double sn = std::sin(phi);
  const double cn = std::cos(phi);
  // 1 - m sn^2 = mc + m cn^2: both terms non-negative.
  const double dn = std::sqrt(mc + m * cn * cn);
  return {sn, cn, dn};
}

JacobiValues jacobi_elliptic(double u, double m) {
  return jacobi_elliptic(u, EllipticParameter(m));
}

double jacobi_cn(double u, EllipticParameter p) { return jacobi_elliptic(u, p).cn; }

double jacobi_cn(double u, double m) { return jacobi_elliptic(u, m).cn; }

std::vector<double> cn_zeros(EllipticParameter p, int n) {
  if (n < 1) {
    throw DomainError("cn_zeros: count must be >= 1");
  }
  if (p.complement() == 0.0) {
    throw DivergenceError("cn(., 1) = sech has no finite zeros");
  }
  const double K = complete_elliptic_K(p);
  std::vector<double> zeros;
  zeros.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    zeros.push_back((2.0 * k + 1.0) * K);
  }
  return zeros;
}

}  // namespace nlse
