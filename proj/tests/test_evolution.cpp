#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

#include "nlse/error.hpp"
#include "nlse/evolution.hpp"
#include "nlse/lse_oracle.hpp"
#include "nlse/stitching.hpp"

using namespace nlse;
using cplx = std::complex<double>;

namespace {

constexpr double pi = std::numbers::pi;

double l2_distance(const ComplexField1D& f, const std::function<cplx(double)>& g) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    s += std::norm(f.values[i] - g(f.grid.x(i)));
  }
  return std::sqrt(s * f.grid.dx);
}

WaveParams soliton_params(double c = 0.0) {
  WaveParams p;
  p.omega = -2.0;
  p.E = 0.0;
  p.c = c;
  return p;
}

PropagationSettings linear_half() {
  PropagationSettings s;
  s.params.lambda = 0.0;
  s.params.epsilon = 0.5;
  return s;
}

}  // namespace

TEST_CASE("plane waves are exact under linear evolution") {
  const Grid g = Grid::periodic(64, 0.0, 2 * pi);
  PropagationSettings s;
  s.params.lambda = 0.0;
  s.params.epsilon = 0.7;
  const double k = 3.0;
  ComplexField1D f = ComplexField1D::sample(g, [k](double x) { return std::polar(1.0, k * x); });
  SplitStepper stepper(g, s, 0.37);
  stepper.advance(f, 10);
  const double t = 3.7;
  CHECK(l2_distance(f, [&](double x) { return std::polar(1.0, k * x - 0.7 * k * k * t); }) < 1e-12);
  CHECK(f.time == doctest::Approx(t));
}

TEST_CASE("soliton propagation in both frames") {
  const Grid g = Grid::periodic(1024, -32.0, 64.0);
  for (Frame frame : {Frame::CoMoving, Frame::Lab}) {
    const double c = frame == Frame::Lab ? 1.0 : 0.0;
    const SolutionProfile s = exact_solution(soliton_params(c));
    PropagationSettings settings;
    settings.params = s.params();
    settings.frame = frame;
    auto exact = [&s](double t) { return [&s, t](double x) { return s.psi(x, t); }; };
    double err[2];
    for (int h = 0; h < 2; ++h) {
      const double dt = h == 0 ? 1e-4 : 5e-5;
      ComplexField1D f = ComplexField1D::sample(g, exact(0.0));
      SplitStepper stepper(g, settings, dt);
      stepper.advance(f, static_cast<std::size_t>(std::llround(1.0 / dt)));
      err[h] = l2_distance(f, exact(1.0));
    }
    CHECK(err[0] < 1e-6);
    CHECK(err[0] / err[1] >= 3.5);
    CHECK(err[0] / err[1] <= 4.5);
  }
}

TEST_CASE("periodic cn solution on a one-period box") {
  WaveParams p;
  p.omega = -2.0;
  p.E = 0.1;
  const SolutionProfile s = exact_solution(p);
  const Grid g = Grid::periodic(256, 0.0, s.period());
  PropagationSettings settings;
  settings.params = p;
  ComplexField1D f = ComplexField1D::sample(g, [&s](double x) { return s.psi(x, 0.0); });
  SplitStepper(g, settings, 1e-4).advance(f, 10000);
  CHECK(l2_distance(f, [&s](double x) { return s.psi(x, 1.0); }) < 1e-6);
}

TEST_CASE("norm and energy are conserved over long runs") {
  const SolutionProfile s = exact_solution(soliton_params());
  const Grid g = Grid::periodic(256, -16.0, 32.0);
  PropagationSettings settings;
  settings.params = s.params();
  const FieldAnalyzer a(g, settings);
  ComplexField1D f = ComplexField1D::sample(g, [&s](double x) { return s.psi(x, 0.0) * std::polar(1.0, 0.3 * x); });
  const double n0 = f.norm(), e0 = a.energy(f);
  SplitStepper(g, settings, default_time_step(g, 1.0)).advance(f, 100000);
  CHECK(std::abs(f.norm() - n0) / n0 < 1e-8);
  CHECK(std::abs(a.energy(f) - e0) / std::abs(e0) < 1e-6);
}

TEST_CASE("energy functional matches direct quadrature") {
  const SolutionProfile s = exact_solution(soliton_params());
  const Grid g = Grid::periodic(512, -16.0, 32.0);
  PropagationSettings settings;
  settings.params = s.params();
  const ComplexField1D f = ComplexField1D::sample(g, [&s](double x) { return s.psi(x, 0.0); });
  using boost::math::quadrature::gauss_kronrod;
  auto density = [&s](double x) {
    const double u = s.value(x), du = s.derivative(x);
    return du * du - 0.5 * u * u * u * u;
  };
  const double expect = gauss_kronrod<double, 61>::integrate(density, -16.0, 16.0, 15, 1e-14);
  CHECK(FieldAnalyzer(g, settings).energy(f) == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("currents and window integrals") {
  const Grid g = Grid::periodic(128, 0.0, 2 * pi);
  PropagationSettings settings;
  settings.params.epsilon = 0.8;
  const double k = 2.0;
  const ComplexField1D f = ComplexField1D::sample(g, [k](double x) { return std::polar(1.5, k * x); });
  const FieldAnalyzer co(g, settings);
  CHECK(co.current_at(f, 0.123) == doctest::Approx(2 * 0.8 * k * 2.25).epsilon(1e-12));
  CHECK(co.integrated_density(f, 0.3, 1.1) == doctest::Approx(2.25 * 0.8).epsilon(1e-12));
  settings.frame = Frame::Lab;
  settings.params.c = 0.5;
  const FieldAnalyzer lab(g, settings);
  CHECK(lab.current_at(f, 2.9) == doctest::Approx(2 * 0.8 * k * 2.25 + 0.5 * 2.25).epsilon(1e-12));

  const ComplexField1D sine = ComplexField1D::sample(g, [](double x) { return cplx(std::sin(x), 0.0); });
  // int_0^{pi/2} sin^2 = pi / 4, off-grid limits included.
  CHECK(co.integrated_density(sine, 0.0, pi / 2) == doctest::Approx(pi / 4).epsilon(1e-13));
  CHECK(co.integrated_density(sine, 0.1, 0.9) ==
        doctest::Approx(0.4 - (std::sin(1.8) - std::sin(0.2)) / 4).epsilon(1e-13));
  CHECK(co.value_at(sine, 0.77).real() == doctest::Approx(std::sin(0.77)).epsilon(1e-13));
}

TEST_CASE("real fields carry no current") {
  const SolutionProfile o = exact_solution([] { WaveParams p; p.omega = -1; p.E = 1e-12; return p; }());
  const SolutionProfile m = exact_solution([] { WaveParams p; p.omega = -10; p.E = 1e-12; return p; }());
  const PiecewiseSolution pw = build_stitched({o, m, o}, {5.5, 20.0});
  const PeriodicBox box = periodic_box(pw, 60.0);
  const ComplexField1D f = sample_on_box(pw, box, 2048);
  PropagationSettings settings;
  settings.params = m.params();
  const FieldAnalyzer a(f.grid, settings);
  const auto points = pw.stitch_points();
  const DiagnosticsRow row = a.analyze(f, points[0], points[1]);
  // Only spectral-derivative roundoff survives.
  CHECK(std::abs(row.j1) < 1e-18);
  CHECK(std::abs(row.j2) < 1e-18);
  CHECK(row.P > 0.0);
}

TEST_CASE("continuity equation on a radiating field") {
  const Grid g = Grid::periodic(512, -8 * pi, 16 * pi);
  ExperimentSettings es;
  es.propagation = linear_half();
  es.t_max = 2.0;
  es.dt = 1e-3;
  es.sample_every = 1;
  es.x1 = -1.0;
  es.x2 = 1.3;
  const ExperimentResult r = evolve_experiment(lse_rogue_initial(1.0, g), es);
  const DiagnosticsSeries& S = r.series;
  double worst = 0.0, jmax = 0.0;
  for (std::size_t k = 1; k + 1 < S.size(); ++k) {
    const double dP = (S.P[k + 1] - S.P[k - 1]) / (S.times[k + 1] - S.times[k - 1]);
    worst = std::max(worst, std::abs(dP - (S.j1[k] - S.j2[k])));
    jmax = std::max({jmax, std::abs(S.j1[k]), std::abs(S.j2[k])});
  }
  CHECK(jmax > 0.1);
  CHECK(worst < 1e-4 * jmax);
}

TEST_CASE("lifetime on an analytic series") {
  DiagnosticsSeries s;
  const double P0 = 3.0;
  for (int i = 0; i <= 20000; ++i) {
    const double t = i * 1e-4;
    const double P = P0 * std::exp(-t);
    s.push({t, P, 0.0, P, 0.0, 0.0, 0.0});
  }
  const LifetimeResult a = lifetime(s, P0 / std::numbers::e);
  REQUIRE(a.tau.has_value());
  REQUIRE(a.tau_half.has_value());
  CHECK(*a.tau == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(*a.tau_half == doctest::Approx(std::log(2.0 / (1.0 + std::exp(-1.0)))).epsilon(1e-8));
  CHECK(*a.tau_half == doctest::Approx(0.379).epsilon(1e-3));
  const LifetimeResult b = lifetime_from_currents(s, P0 / std::numbers::e);
  REQUIRE(b.tau.has_value());
  CHECK(*b.tau == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(*b.tau_half == doctest::Approx(*a.tau_half).epsilon(1e-6));
}

TEST_CASE("constant density never reaches the thresholds") {
  DiagnosticsSeries s;
  for (int i = 0; i < 10; ++i) {
    s.push({i * 0.1, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0});
  }
  const LifetimeResult r = lifetime(s, 1.0);
  CHECK_FALSE(r.tau.has_value());
  CHECK_FALSE(r.tau_half.has_value());
  CHECK(r.final_P == 2.0);
  CHECK_FALSE(lifetime_from_currents(s, 1.0).tau_half.has_value());
  CHECK_THROWS_AS(lifetime(s, 2.5), DomainError);
}

TEST_CASE("half life of the linear rogue wave against the closed form") {
  const Grid g = Grid::periodic(512, -8 * pi, 16 * pi);
  ExperimentSettings es;
  es.propagation = linear_half();
  es.t_max = 3.0;
  es.dt = 1e-3;
  es.sample_every = 5;
  es.x1 = -pi / 2;
  es.x2 = pi / 2;
  const ComplexField1D init = lse_rogue_initial(1.0, g);
  const ExperimentResult r = evolve_experiment(init, es);
  const FieldAnalyzer a(g, es.propagation);
  const double P_o = a.integrated_density(init, 6 * pi - pi / 2, 6 * pi + pi / 2);

  using boost::math::quadrature::gauss_kronrod;
  DiagnosticsSeries oracle;
  for (double t : r.series.times) {
    auto rho = [t](double x) { return std::norm(lse::psi(x, t, 1.0)); };
    oracle.push({t, gauss_kronrod<double, 61>::integrate(rho, -pi / 2, pi / 2, 10, 1e-14), 0, 0, 0, 0, 0});
  }
  const LifetimeResult num = lifetime(r.series, P_o);
  const LifetimeResult ref = lifetime(oracle, P_o);
  const LifetimeResult flux = lifetime_from_currents(r.series, P_o);
  REQUIRE(num.tau_half.has_value());
  REQUIRE(ref.tau_half.has_value());
  REQUIRE(flux.tau_half.has_value());
  CHECK(*num.tau_half == doctest::Approx(*ref.tau_half).epsilon(0.01));
  CHECK(*flux.tau_half == doctest::Approx(*ref.tau_half).epsilon(0.01));
}

TEST_CASE("experiment driver") {
  const Grid g = Grid::periodic(64, -4.0, 8.0);
  ExperimentSettings es;
  es.propagation.params.lambda = 1.0;
  es.t_max = 0.05;
  es.sample_every = 7;
  es.x1 = -1.0;
  es.x2 = 1.0;
  const ComplexField1D zero = ComplexField1D::sample(g, [](double) { return cplx{}; });
  const ExperimentResult r = evolve_experiment(zero, es);
  for (std::size_t k = 0; k < r.series.size(); ++k) {
    CHECK(r.series.P[k] == 0.0);
    CHECK(r.series.norm[k] == 0.0);
    CHECK(r.series.peak[k] == 0.0);
  }
  CHECK(r.series.times.back() == doctest::Approx(0.05));
  CHECK(r.dt * r.steps == doctest::Approx(0.05));
  CHECK(r.snapshots.size() == 2);
  CHECK(r.warnings.empty());

  es.dt = 0.05;
  CHECK(evolve_experiment(zero, es).warnings.size() == 1);
  es.x2 = 9.0;
  CHECK_THROWS_AS(evolve_experiment(zero, es), DomainError);
}

TEST_CASE("non-finite fields surface the step index") {
  const Grid g = Grid::periodic(32, 0.0, 1.0);
  ComplexField1D f = ComplexField1D::sample(g, [](double) { return cplx(1.0, 0.0); });
  f.values[3] = cplx(NAN, 0.0);
  PropagationSettings s;
  SplitStepper stepper(g, s, 1e-3);
  try {
    stepper.step(f);
    FAIL("expected IntegrationError");
  } catch (const IntegrationError& e) {
    CHECK(e.step() <= 1);
  }
  CHECK_THROWS_AS(Grid::periodic(100, 0.0, 1.0).validate(), DomainError);
}
