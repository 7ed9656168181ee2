#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "nlse/error.hpp"
#include "nlse/phi4_lattice.hpp"

using namespace nlse;
using namespace nlse::phi4;
using cplx = std::complex<double>;

namespace {

LatticeParams lattice(std::size_t nx, std::size_t ny, double lambda = 0.0) {
  LatticeParams p;
  p.nx = nx;
  p.ny = ny;
  p.lambda = lambda;
  return p;
}

LatticeState random_state(const LatticeParams& p, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> N(0.0, scale);
  LatticeState s = LatticeState::zeros(p);
  for (std::size_t i = 0; i < p.sites(); ++i) {
    s.phi[i] = {N(rng), N(rng)};
    s.phidot[i] = {N(rng), N(rng)};
  }
  return s;
}

double max_distance(const SiteField& a, const SiteField& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d = std::max(d, std::abs(a[i] - b[i]));
  }
  return d;
}

double energy_drift(LatticeState s, const LatticeParams& p, double dt, std::size_t steps, Integrator scheme) {
  LatticeIntegrator integ(p, dt, scheme);
  const double e0 = lattice_energy(s, p);
  double worst = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    integ.step(s);
    worst = std::max(worst, std::abs(lattice_energy(s, p) - e0));
  }
  return worst / std::abs(e0);
}

}  // namespace

TEST_CASE("coefficients") {
  LatticeParams p = lattice(4, 4);
  CHECK(p.onsite_coeff() == doctest::Approx(10.0));
  CHECK(p.coupling_coeff() == doctest::Approx(1.0));
  p.stencil = Stencil::Standard;
  CHECK(p.onsite_coeff() == doctest::Approx(4.0));
  p.onsite_override = 7.5;
  p.coupling_override = 0.3;
  CHECK(p.onsite_coeff() == 7.5);
  CHECK(p.coupling_coeff() == 0.3);
  CHECK_THROWS_AS(lattice(1, 4).validate(), DomainError);
}

TEST_CASE("energy of simple configurations") {
  const LatticeParams p = lattice(2, 2);
  LatticeState s = LatticeState::zeros(p);
  CHECK(lattice_energy(s, p) == 0.0);
  // All neighbours vanish, so only the onsite term survives.
  s.phi[0] = 1.0;
  CHECK(lattice_energy(s, p) == doctest::Approx(10.0));
  for (auto& v : s.phi) {
    v = 1.0;
  }
  CHECK(lattice_energy(s, p) == doctest::Approx(4 * (10.0 - 2.0)));
  const LatticeParams q = lattice(4, 4);
  LatticeState u = LatticeState::zeros(q);
  for (auto& v : u.phi) {
    v = 0.5;
  }
  CHECK(lattice_energy(u, q) == doctest::Approx(16 * (10.0 * 0.25 - 2.0 * 0.25)));
  u.phidot[5] = cplx(0.0, 2.0);
  CHECK(lattice_energy(u, q) == doctest::Approx(32.0 + 2.0));
}

TEST_CASE("force is minus the energy gradient") {
  std::mt19937_64 rng(5);
  const LatticeParams p = lattice(5, 4, 1.0);
  constexpr double h = 1e-5;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    LatticeState s = random_state(p, rng);
    const SiteField F = lattice_force(s.phi, p);
    for (std::size_t i = 0; i < p.sites(); ++i) {
      for (cplx dir : {cplx(1, 0), cplx(0, 1)}) {
        LatticeState a = s, b = s;
        a.phi[i] += h * dir;
        b.phi[i] -= h * dir;
        const double g = -(lattice_energy(a, p) - lattice_energy(b, p)) / (2 * h);
        const double f = dir.real() != 0.0 ? F[i].real() : F[i].imag();
        worst = std::max(worst, std::abs(g - f) / std::max(1.0, std::abs(f)));
      }
    }
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("normal modes match the dispersion relation") {
  const NormalModes nm = normal_modes(lattice(4, 4));
  REQUIRE(nm.omega2.size() == 16);
  CHECK(nm.unstable == 0);
  CHECK(nm.max_dispersion_mismatch < 1e-12);
  CHECK(nm.omega2.front() == doctest::Approx(16.0));
  CHECK(dispersion_omega2(lattice(4, 4), 0.0, 0.0) == doctest::Approx(16.0));
  CHECK(max_linear_frequency(lattice(4, 4)) == doctest::Approx(std::sqrt(24.0)));

  LatticeParams weak = lattice(4, 4);
  weak.onsite_override = 1.0;
  CHECK(normal_modes(weak).unstable > 0);
}

TEST_CASE("2x2 Hessian diagonalized directly") {
  const LatticeParams p = lattice(2, 2);
  constexpr double h = 1e-3;
  Eigen::Matrix4d M;
  auto V = [&p](const Eigen::Vector4d& x) {
    LatticeState s = LatticeState::zeros(p);
    for (int i = 0; i < 4; ++i) {
      s.phi[i] = x[i];
    }
    return lattice_energy(s, p);
  };
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      Eigen::Vector4d e = Eigen::Vector4d::Zero();
      Eigen::Vector4d pp = e, pm = e, mp = e, mm = e;
      pp[i] += h; pp[j] += h;
      pm[i] += h; pm[j] -= h;
      mp[i] -= h; mp[j] += h;
      mm[i] -= h; mm[j] -= h;
      M(i, j) = (V(pp) - V(pm) - V(mp) + V(mm)) / (4 * h * h);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(M);
  std::vector<double> expect;
  for (double kx : {0.0, std::numbers::pi}) {
    for (double ky : {0.0, std::numbers::pi}) {
      expect.push_back(dispersion_omega2(p, kx, ky));
    }
  }
  std::sort(expect.begin(), expect.end());
  const NormalModes nm = normal_modes(p);
  for (int i = 0; i < 4; ++i) {
    CHECK(es.eigenvalues()[i] == doctest::Approx(expect[i]).epsilon(1e-8));
    CHECK(nm.omega2[i] == doctest::Approx(expect[i]).epsilon(1e-12));
  }
}

TEST_CASE("a normal mode oscillates at its frequency") {
  const LatticeParams p = lattice(8, 8);
  const NormalModes nm = normal_modes(p);
  const std::size_t mode = 21;
  const double w = std::sqrt(nm.omega2[mode]);
  LatticeState s = LatticeState::zeros(p);
  for (std::size_t i = 0; i < nm.sites; ++i) {
    s.phi[i] = nm.vectors[i + nm.sites * mode];
  }
  const LatticeState s0 = s;
  const double t = 100 * 2 * std::numbers::pi / w;
  const std::size_t steps = static_cast<std::size_t>(std::ceil(t / 0.01));
  LatticeIntegrator(p, t / steps).advance(s, steps);
  SiteField expect(s0.phi);
  for (auto& v : expect) {
    v *= std::cos(w * t);
  }
  CHECK(max_distance(s.phi, expect) < 1e-6);
}

TEST_CASE("linear evolution matches the normal-mode reconstruction") {
  const LatticeParams p = lattice(8, 8);
  LatticeState s = LatticeState::zeros(p);
  s.at(3, 5) = cplx(1.0, -0.5);
  const LatticeState ref = normal_mode_evolution(normal_modes(p), s, 10.0);
  LatticeIntegrator(p, 0.01).advance(s, 1000);
  CHECK(max_distance(s.phi, ref.phi) < 1e-8);
  CHECK(max_distance(s.phidot, ref.phidot) < 1e-8);
}

TEST_CASE("Verlet energy error is second order") {
  std::mt19937_64 rng(9);
  const LatticeParams p = lattice(8, 8, 1.0);
  const LatticeState s = random_state(p, rng, 0.3);
  const double d1 = energy_drift(s, p, 0.04, 500, Integrator::Verlet);
  const double d2 = energy_drift(s, p, 0.02, 1000, Integrator::Verlet);
  CHECK(d1 / d2 >= 3.5);
  CHECK(d1 / d2 <= 4.5);
}

TEST_CASE("energy drift at dt = 0.1 / omega_max over 1e4 steps") {
  std::mt19937_64 rng(13);
  for (double lambda : {0.0, 1.0}) {
    const LatticeParams p = lattice(16, 16, lambda);
    const LatticeState s = random_state(p, rng, 0.5);
    const double dt = 0.1 / max_linear_frequency(p);
    CHECK(energy_drift(s, p, dt, 10000, Integrator::Yoshida6) < 1e-6);
    CHECK(energy_drift(s, p, dt, 2000, Integrator::Yoshida4) < 1e-4);
  }
}

TEST_CASE("time reversal") {
  std::mt19937_64 rng(17);
  const LatticeParams p0 = lattice(16, 16, 0.0);
  const LatticeState s = random_state(p0, rng, 0.5);
  CHECK(time_reversal_test(s, p0, 0, 0.02) == 0.0);
  CHECK(time_reversal_test(s, p0, 10000, 0.02) < 1e-8);
  CHECK(time_reversal_test(s, lattice(16, 16, 1.0), 10000, 0.02) < 1e-6);
  CHECK(time_reversal_test(s, p0, 10000, 0.02, Integrator::Verlet) < 1e-8);
}

TEST_CASE("rogue initial state") {
  const LatticeParams p = lattice(64, 64);
  std::vector<std::string> warnings;
  const std::array<double, 2> k{2 * std::numbers::pi / 16, 0.0};
  const LatticeState s = rogue_initial(p, 1.0, k, &warnings);
  CHECK(warnings.empty());
  CHECK(std::norm(s.at(32, 32)) == doctest::Approx(4.0));
  CHECK(std::norm(s.at(0, 0)) == doctest::Approx(1.0));
  for (const auto& v : s.phidot) {
    CHECK(v == cplx{});
  }
  const LatticeState bg = rogue_initial(p, 0.0, k);
  for (std::size_t i = 0; i < 64; ++i) {
    CHECK(bg.at(i, 7).real() == doctest::Approx(std::cos(k[0] * i)).epsilon(1e-14));
  }
  rogue_initial(p, 1.0, {0.3, 0.0}, &warnings);
  CHECK(warnings.size() == 1);
}

TEST_CASE("a traveling plane wave does not relax") {
  const LatticeParams p = lattice(16, 16);
  const double kx = 2 * std::numbers::pi * 3 / 16, ky = 2 * std::numbers::pi / 16;
  const double w = std::sqrt(dispersion_omega2(p, kx, ky));
  LatticeState s = LatticeState::zeros(p);
  for (std::size_t j = 0; j < 16; ++j) {
    for (std::size_t i = 0; i < 16; ++i) {
      s.phi[i + 16 * j] = std::polar(1.0, kx * i + ky * j);
      s.phidot[i + 16 * j] = cplx(0, -w) * s.phi[i + 16 * j];
    }
  }
  const RelaxationSeries r = relax_to_steady(s, p, 2000, 0.02, 100);
  for (double v : r.variance) {
    CHECK(v < 1e-20);
  }
  const auto [mean, var] = density_moments(s);
  CHECK(mean == doctest::Approx(1.0));
  CHECK(var < 1e-28);
}

TEST_CASE("relaxation summary") {
  RelaxationSeries r;
  for (int i = 0; i <= 10; ++i) {
    r.times.push_back(i);
    r.energy.push_back(5.0 + (i == 4 ? 1e-3 : 0.0));
    r.max_density.push_back(10.0 - i);
    r.variance.push_back(1.0 / (1 + i));
  }
  const RelaxationSummary s = summarize(r, 0.2);
  CHECK(s.initial_peak == 10.0);
  CHECK(s.final_peak == 0.0);
  CHECK(s.late_peak == doctest::Approx(1.0));
  CHECK(s.max_energy_drift == doctest::Approx(2e-4));
}

TEST_CASE("non-relativistic reduction parameters") {
  const NonrelativisticMapping m = nonrelativistic_nlse(2.0, 1.0);
  CHECK(m.params.epsilon == doctest::Approx(0.25));
  CHECK(m.params.lambda == doctest::Approx(-1.0 / 24.0));
  CHECK(m.potential == 2.0);
}
