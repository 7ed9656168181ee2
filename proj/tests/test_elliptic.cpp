#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include "nlse/elliptic.hpp"
#include "nlse/error.hpp"

using namespace nlse;

namespace {

// sn' = cn dn, cn' = -sn dn, dn' = -m sn cn from (0, 1, 1).
std::array<double, 3> jacobi_by_ode(double u, double m) {
  namespace odeint = boost::numeric::odeint;
  using state = std::array<double, 3>;
  state y{0.0, 1.0, 1.0};
  auto rhs = [m](const state& s, state& d, double) {
    d[0] = s[1] * s[2];
    d[1] = -s[0] * s[2];
    d[2] = -m * s[0] * s[1];
  };
  odeint::integrate_adaptive(
      odeint::make_controlled(1e-15, 1e-15, odeint::runge_kutta_fehlberg78<state>()), rhs, y, 0.0, u,
      u < 0.0 ? -1e-3 : 1e-3);
  return y;
}

double K_by_quadrature(double m) {
  using boost::math::quadrature::gauss_kronrod;
  auto f = [m](double t) { return 1.0 / std::sqrt(1.0 - m * std::sin(t) * std::sin(t)); };
  return gauss_kronrod<double, 61>::integrate(f, 0.0, std::numbers::pi / 2, 15, 1e-15);
}

}  // namespace

TEST_CASE("K at the origin and near the logarithmic singularity") {
  CHECK(complete_elliptic_K(0.0) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-16));
  CHECK(complete_elliptic_K(0.999999) > 7.0);
  CHECK(complete_elliptic_K(0.9) < complete_elliptic_K(0.99));
  CHECK_THROWS_AS(complete_elliptic_K(1.0), DivergenceError);
  CHECK_THROWS_AS(complete_elliptic_K(-0.1), DomainError);
  CHECK_THROWS_AS(complete_elliptic_K(1.1), DomainError);
}

TEST_CASE("K agrees with adaptive quadrature") {
  for (double m : {0.0, 0.1, 0.5, 0.9, 0.99}) {
    CAPTURE(m);
    CHECK(std::abs(complete_elliptic_K(m) - K_by_quadrature(m)) < 1e-12 * K_by_quadrature(m));
  }
}

TEST_CASE("K matches high-precision reference values") {
  CHECK(complete_elliptic_K(0.5) == doctest::Approx(1.8540746773013719184).epsilon(1e-15));
  CHECK(complete_elliptic_K(0.9) == doctest::Approx(2.5780921133481732927).epsilon(1e-15));
  CHECK(complete_elliptic_K(0.1) == doctest::Approx(1.6124413487202194007).epsilon(1e-15));
  // Built from the complement so 1 - m is represented exactly.
  CHECK(complete_elliptic_K(EllipticParameter::from_complement(1e-10)) ==
        doctest::Approx(12.899219826387599535).epsilon(1e-14));
}

TEST_CASE("cn closed-form limits") {
  CHECK(jacobi_cn(0.0, 0.3) == 1.0);
  CHECK(jacobi_cn(0.0, 1.0) == 1.0);
  CHECK(jacobi_cn(std::numbers::pi / 3, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(jacobi_cn(1.0, 1.0) == doctest::Approx(1.0 / std::cosh(1.0)).epsilon(1e-15));
  CHECK(1.0 / std::cosh(1.0) == doctest::Approx(0.6480542737).epsilon(1e-10));
  CHECK_THROWS_AS(jacobi_cn(NAN, 0.5), DomainError);
  CHECK_THROWS_AS(jacobi_cn(INFINITY, 0.5), DomainError);
  CHECK_THROWS_AS(EllipticParameter(1.5), DomainError);
}

TEST_CASE("sn, cn, dn against the defining ODE") {
  for (auto [u, m] : {std::pair{0.5, 0.3}, {1.7, 0.9}, {3.2, 0.99}, {-2.1, 0.6}, {9.0, 0.2}}) {
    CAPTURE(u);
    CAPTURE(m);
    const auto ref = jacobi_by_ode(u, m);
    const JacobiValues v = jacobi_elliptic(u, m);
    CHECK(std::abs(v.sn - ref[0]) < 1e-10);
    CHECK(std::abs(v.cn - ref[1]) < 1e-10);
    CHECK(std::abs(v.dn - ref[2]) < 1e-10);
  }
}

TEST_CASE("sn, cn, dn match high-precision reference values") {
  struct Ref {
    double u, m, sn, cn, dn;
  };
  const Ref refs[] = {
      {0.5, 0.3, 0.47421562271182062559, 0.88040873642646242999, 0.96567896474595120007},
      {1.7, 0.9, 0.95223054210801865053, 0.3053800823181972353, 0.42887211987841085076},
      {3.2, 0.99, 0.99866920939168485181, 0.051573347893918197582, 0.11239756274429287765},
      {0.25, 0.0001, 0.24740371006894832224, 0.96891248533813401292, 0.99999693956552907641},
      {7.5, 0.5, 0.083554971810256492643, 0.99650316943087905206, 0.99825311586936387655},
  };
  for (const Ref& r : refs) {
    CAPTURE(r.u);
    const JacobiValues v = jacobi_elliptic(r.u, r.m);
    CHECK(std::abs(v.sn - r.sn) < 1e-13);
    CHECK(std::abs(v.cn - r.cn) < 1e-13);
    CHECK(std::abs(v.dn - r.dn) < 1e-13);
  }
}

TEST_CASE("Pythagorean identities and periodicity over random arguments") {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> U(-20.0, 20.0), M(0.0, 1.0);
  double worst_a = 0.0, worst_b = 0.0, worst_p = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double u = U(rng), m = M(rng);
    const JacobiValues v = jacobi_elliptic(u, m);
    worst_a = std::max(worst_a, std::abs(v.sn * v.sn + v.cn * v.cn - 1.0));
    worst_b = std::max(worst_b, std::abs(v.dn * v.dn + m * v.sn * v.sn - 1.0));
    if (m < 0.999) {
      worst_p = std::max(worst_p, std::abs(jacobi_cn(u + 4.0 * complete_elliptic_K(m), m) - v.cn));
    }
  }
  CHECK(worst_a < 1e-12);
  CHECK(worst_b < 1e-12);
  CHECK(worst_p < 1e-10);
}

TEST_CASE("cn approaches cos and sech at the ends of the parameter range") {
  double prev_cos = INFINITY, prev_sech = INFINITY;
  for (double eps : {1e-2, 1e-4, 1e-6}) {
    double d_cos = 0.0, d_sech = 0.0;
    for (double u = 0.0; u <= 5.0; u += 0.01) {
      d_cos = std::max(d_cos, std::abs(jacobi_cn(u, eps) - std::cos(u)));
      d_sech = std::max(d_sech, std::abs(jacobi_cn(u, EllipticParameter::from_complement(eps)) -
                                         1.0 / std::cosh(u)));
    }
    CHECK(d_cos < prev_cos);
    CHECK(d_sech < prev_sech);
    prev_cos = d_cos;
    prev_sech = d_sech;
  }
  CHECK(prev_cos < 1e-5);
  CHECK(prev_sech < 1e-4);
}

TEST_CASE("cn zeros") {
  const auto z0 = cn_zeros(EllipticParameter(0.0), 2);
  REQUIRE(z0.size() == 2);
  CHECK(z0[0] == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
  CHECK(z0[1] == doctest::Approx(3 * std::numbers::pi / 2).epsilon(1e-15));

  const double K = complete_elliptic_K(0.9);
  const auto z = cn_zeros(EllipticParameter(0.9), 3);
  REQUIRE(z.size() == 3);
  CHECK(z[0] == doctest::Approx(K).epsilon(1e-15));
  CHECK(z[1] == doctest::Approx(3 * K).epsilon(1e-15));
  CHECK(z[2] == doctest::Approx(5 * K).epsilon(1e-15));

  for (double m : {0.0, 0.3, 0.9, 0.999}) {
    for (double x : cn_zeros(EllipticParameter(m), 4)) {
      const JacobiValues v = jacobi_elliptic(x, m);
      CHECK(std::abs(v.cn) < 1e-13);
      // cn' = -sn dn is nonzero at every zero.
      CHECK(std::abs(v.sn * v.dn) > 1e-3);
    }
  }
  CHECK_THROWS_AS(cn_zeros(EllipticParameter(1.0), 1), DivergenceError);
}
