#include "nlse/phi4_lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "nlse/error.hpp"

namespace nlse::phi4 {
namespace {

constexpr std::size_t kMaxDenseSites = 1024;

void check_state(const LatticeState& s, const LatticeParams& p) {
  if (s.nx != p.nx || s.ny != p.ny || s.phi.size() != p.sites() || s.phidot.size() != p.sites()) {
    throw DomainError("lattice state does not match its parameters");
  }
}

// Composition weights of the symmetric Verlet map.
std::vector<double> composition_weights(Integrator scheme) {
  const double y1 = 1.0 / (2.0 - std::cbrt(2.0));
  const double y0 = 1.0 - 2.0 * y1;
  const std::vector<double> fourth{y1, y0, y1};
  switch (scheme) {
    case Integrator::Verlet:
      return {1.0};
    case Integrator::Yoshida4:
      return fourth;
    case Integrator::Yoshida6: {
      const double z1 = 1.0 / (2.0 - std::pow(2.0, 0.2));
      const double z0 = 1.0 - 2.0 * z1;
      std::vector<double> w;
      for (double z : {z1, z0, z1}) {
        for (double y : fourth) {
          w.push_back(z * y);
        }
      }
      return w;
    }
  }
  return {1.0};
}

void check_finite(const SiteField& f, std::size_t nx, std::size_t step, const char* what) {
  for (std::size_t s = 0; s < f.size(); ++s) {
    if (!std::isfinite(f[s].real()) || !std::isfinite(f[s].imag())) {
      std::ostringstream msg;
      msg << "lattice " << what << " became non-finite at site (" << s % nx << ", " << s / nx << ")";
      throw IntegrationError(msg.str(), step);
    }
  }
}

void verlet_stage(LatticeState& state, const LatticeParams& params, SiteField& force, double h,
                  std::size_t step) {
  const std::size_t n = state.phi.size();
  for (std::size_t s = 0; s < n; ++s) {
    state.phidot[s] += 0.5 * h * force[s];
    state.phi[s] += h * state.phidot[s];
  }
  lattice_force(state.phi, params, force);
  check_finite(force, state.nx, step, "field");
  for (std::size_t s = 0; s < n; ++s) {
    state.phidot[s] += 0.5 * h * force[s];
  }
}

}  // namespace

double LatticeParams::onsite_coeff() const {
  if (onsite_override) {
    return *onsite_override;
  }
  const double base = stencil == Stencil::Printed ? 16.0 : 4.0;
  return (base + mass * mass * Delta * Delta) / (2.0 * Delta * Delta);
}

double LatticeParams::coupling_coeff() const {
  return coupling_override ? *coupling_override : 1.0 / (Delta * Delta);
}

void LatticeParams::validate() const {
  if (nx < 2 || ny < 2) {
    throw DomainError("lattice extents must be at least 2");
  }
  if (!(Delta > 0.0) || !std::isfinite(Delta) || !std::isfinite(mass) || !std::isfinite(lambda)) {
    throw DomainError("lattice spacing must be positive and parameters finite");
  }
  if (!std::isfinite(onsite_coeff()) || !std::isfinite(coupling_coeff())) {
    throw DomainError("lattice coefficients must be finite");
  }
}

LatticeState LatticeState::zeros(const LatticeParams& params) {
  params.validate();
  return LatticeState{params.nx, params.ny, SiteField(params.sites()), SiteField(params.sites()), 0.0};
}

double lattice_energy(const LatticeState& state, const LatticeParams& params) {
  check_state(state, params);
  const double a = params.onsite_coeff();
  const double b = params.coupling_coeff();
  const double quartic = params.lambda / 24.0;
  const std::size_t nx = params.nx;
  const std::size_t ny = params.ny;
  double site_sum = 0.0;
  double bond_sum = 0.0;
  for (std::size_t j = 0; j < ny; ++j) {
    const std::size_t up = (j + 1) % ny;
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t s = i + nx * j;
      const std::complex<double> p = state.phi[s];
      const double rho = std::norm(p);
      site_sum += 0.5 * std::norm(state.phidot[s]) + a * rho + quartic * rho * rho;
      const std::complex<double> right = state.phi[(i + 1) % nx + nx * j];
      const std::complex<double> above = state.phi[i + nx * up];
      bond_sum += std::real(std::conj(p) * right) + std::real(std::conj(p) * above);
    }
  }
  return site_sum - b * bond_sum;
}

void lattice_force(const SiteField& phi, const LatticeParams& params, SiteField& out) {
  const std::size_t nx = params.nx;
  const std::size_t ny = params.ny;
  if (phi.size() != nx * ny) {
    throw DomainError("lattice field does not match its parameters");
  }
  out.resize(phi.size());
  const double two_a = 2.0 * params.onsite_coeff();
  const double b = params.coupling_coeff();
  const double cubic = params.lambda / 6.0;
  for (std::size_t j = 0; j < ny; ++j) {
    const std::size_t up = (j + 1) % ny;
    const std::size_t down = (j + ny - 1) % ny;
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t s = i + nx * j;
      const std::complex<double> p = phi[s];
      const std::complex<double> neighbours = phi[(i + 1) % nx + nx * j] +
                                              phi[(i + nx - 1) % nx + nx * j] + phi[i + nx * up] +
                                              phi[i + nx * down];
      out[s] = -two_a * p - cubic * std::norm(p) * p + b * neighbours;
    }
  }
}

SiteField lattice_force(const SiteField& phi, const LatticeParams& params) {
  SiteField out;
  lattice_force(phi, params, out);
  return out;
}

double dispersion_omega2(const LatticeParams& params, double kx, double ky) {
  return 2.0 * params.onsite_coeff() -
         2.0 * params.coupling_coeff() * (std::cos(kx * params.Delta) + std::cos(ky * params.Delta));
}

double max_linear_frequency(const LatticeParams& params) {
  params.validate();
  double best = 0.0;
  for (std::size_t a = 0; a < params.nx; ++a) {
    for (std::size_t c = 0; c < params.ny; ++c) {
      const double kx = 2.0 * std::numbers::pi * a / (params.nx * params.Delta);
      const double ky = 2.0 * std::numbers::pi * c / (params.ny * params.Delta);
      best = std::max(best, std::abs(dispersion_omega2(params, kx, ky)));
    }
  }
  return std::sqrt(best);
}

void step_leapfrog(LatticeState& state, const LatticeParams& params, double dt) {
  check_state(state, params);
  SiteField force = lattice_force(state.phi, params);
  verlet_stage(state, params, force, dt, 0);
  state.time += dt;
}

LatticeIntegrator::LatticeIntegrator(LatticeParams params, double dt, Integrator scheme)
    : params_(std::move(params)), dt_(dt), weights_(composition_weights(scheme)) {
  params_.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw DomainError("lattice time step must be positive and finite");
  }
}

void LatticeIntegrator::run_stages(LatticeState& state) {
  ++steps_;
  for (double w : weights_) {
    verlet_stage(state, params_, force_, w * dt_, steps_);
  }
  state.time += dt_;
}

void LatticeIntegrator::step(LatticeState& state) {
  check_state(state, params_);
  lattice_force(state.phi, params_, force_);
  run_stages(state);
}

void LatticeIntegrator::advance(LatticeState& state, std::size_t steps) {
  check_state(state, params_);
  if (steps == 0) {
    return;
  }
  lattice_force(state.phi, params_, force_);
  for (std::size_t k = 0; k < steps; ++k) {
    run_stages(state);
  }
}

NormalModes normal_modes(const LatticeParams& params) {
  params.validate();
  const std::size_t n = params.sites();
  if (n > kMaxDenseSites) {
    throw DomainError("dense normal-mode analysis is limited to 1024 sites");
  }
  const std::size_t nx = params.nx;
  const std::size_t ny = params.ny;
  const double a = params.onsite_coeff();
  const double b = params.coupling_coeff();
  // phi'' = -M phi.
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const auto s = static_cast<Eigen::Index>(i + nx * j);
      M(s, s) += 2.0 * a;
      const std::size_t nbrs[4] = {(i + 1) % nx + nx * j, (i + nx - 1) % nx + nx * j,
                                   i + nx * ((j + 1) % ny), i + nx * ((j + ny - 1) % ny)};
      for (std::size_t t : nbrs) {
        M(s, static_cast<Eigen::Index>(t)) -= b;
      }
    }
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("normal-mode diagonalization failed");
  }
  NormalModes modes;
  modes.sites = n;
  modes.omega2.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  modes.vectors.assign(solver.eigenvectors().data(), solver.eigenvectors().data() + n * n);
  for (std::size_t p = 0; p < nx; ++p) {
    for (std::size_t q = 0; q < ny; ++q) {
      const double kx = 2.0 * std::numbers::pi * p / (nx * params.Delta);
      const double ky = 2.0 * std::numbers::pi * q / (ny * params.Delta);
      modes.dispersion_omega2.push_back(dispersion_omega2(params, kx, ky));
    }
  }
  std::sort(modes.dispersion_omega2.begin(), modes.dispersion_omega2.end());
  for (std::size_t k = 0; k < n; ++k) {
    modes.max_dispersion_mismatch =
        std::max(modes.max_dispersion_mismatch, std::abs(modes.omega2[k] - modes.dispersion_omega2[k]));
    if (!(modes.omega2[k] > 0.0)) {
      ++modes.unstable;
    }
  }
  return modes;
}

LatticeState normal_mode_evolution(const NormalModes& modes, const LatticeState& state0, double t) {
  const std::size_t n = modes.sites;
  if (state0.phi.size() != n || state0.phidot.size() != n) {
    throw DomainError("state does not match the normal-mode basis");
  }
  LatticeState out = state0;
  std::fill(out.phi.begin(), out.phi.end(), std::complex<double>{});
  std::fill(out.phidot.begin(), out.phidot.end(), std::complex<double>{});
  for (std::size_t k = 0; k < n; ++k) {
    const double* v = modes.vectors.data() + k * n;
    std::complex<double> c0{}, v0{};
    for (std::size_t s = 0; s < n; ++s) {
      c0 += v[s] * state0.phi[s];
      v0 += v[s] * state0.phidot[s];
    }
    const double w2 = modes.omega2[k];
    std::complex<double> c, cdot;
    if (w2 > 0.0) {
      const double w = std::sqrt(w2);
      c = c0 * std::cos(w * t) + v0 * std::sin(w * t) / w;
      cdot = -c0 * w * std::sin(w * t) + v0 * std::cos(w * t);
    } else if (w2 < 0.0) {
      const double g = std::sqrt(-w2);
      c = c0 * std::cosh(g * t) + v0 * std::sinh(g * t) / g;
      cdot = c0 * g * std::sinh(g * t) + v0 * std::cosh(g * t);
    } else {
      c = c0 + v0 * t;
      cdot = v0;
    }
    for (std::size_t s = 0; s < n; ++s) {
      out.phi[s] += v[s] * c;
      out.phidot[s] += v[s] * cdot;
    }
  }
  out.time = state0.time + t;
  return out;
}

LatticeState rogue_initial(const LatticeParams& params, double alpha, std::array<double, 2> k_bg,
                           std::vector<std::string>* warnings) {
  LatticeState state = LatticeState::zeros(params);
  if (!std::isfinite(alpha) || !std::isfinite(k_bg[0]) || !std::isfinite(k_bg[1])) {
    throw DomainError("rogue initial condition needs finite alpha and wavevector");
  }
  const double extents[2] = {static_cast<double>(params.nx), static_cast<double>(params.ny)};
  for (int d = 0; d < 2; ++d) {
    const double cycles = k_bg[d] * extents[d] * params.Delta / (2.0 * std::numbers::pi);
    if (std::abs(cycles - std::round(cycles)) > 1e-9 * std::max(1.0, std::abs(cycles)) && warnings) {
      std::ostringstream msg;
      msg << "background wavevector component " << d << " completes " << cycles
          << " periods across the lattice; the background is not periodic";
      warnings->push_back(msg.str());
    }
  }
  const double x0 = params.Delta * static_cast<double>(params.nx / 2);
  const double y0 = params.Delta * static_cast<double>(params.ny / 2);
  for (std::size_t j = 0; j < params.ny; ++j) {
    for (std::size_t i = 0; i < params.nx; ++i) {
      const double x = params.Delta * static_cast<double>(i);
      const double y = params.Delta * static_cast<double>(j);
      const double r2 = (x - x0) * (x - x0) + (y - y0) * (y - y0);
      state.at(i, j) = std::cos(k_bg[0] * x + k_bg[1] * y) + alpha * std::exp(-r2);
    }
  }
  return state;
}

double time_reversal_test(const LatticeState& state0, const LatticeParams& params, std::size_t steps,
                          double dt, Integrator scheme) {
  check_state(state0, params);
  LatticeState s = state0;
  LatticeIntegrator integrator(params, dt, scheme);
  integrator.advance(s, steps);
  for (auto& v : s.phidot) {
    v = -v;
  }
  integrator.advance(s, steps);
  for (auto& v : s.phidot) {
    v = -v;
  }
  double err = 0.0;
  for (std::size_t k = 0; k < s.phi.size(); ++k) {
    err = std::max({err, std::abs(s.phi[k] - state0.phi[k]), std::abs(s.phidot[k] - state0.phidot[k])});
  }
  return err;
}

std::pair<double, double> density_moments(const LatticeState& state) {
  const double n = static_cast<double>(state.phi.size());
  double mean = 0.0;
  for (const auto& p : state.phi) {
    mean += std::norm(p);
  }
  mean /= n;
  double var = 0.0;
  for (const auto& p : state.phi) {
    const double d = std::norm(p) - mean;
    var += d * d;
  }
  return {mean, var / n};
}

RelaxationSeries relax_to_steady(const LatticeState& state0, const LatticeParams& params,
                                 std::size_t steps, double dt, std::size_t sample_every,
                                 Integrator scheme, LatticeState* final_state) {
  check_state(state0, params);
  if (sample_every == 0) {
    throw DomainError("sample_every must be positive");
  }
  RelaxationSeries series;
  auto record = [&](const LatticeState& s) {
    double peak = 0.0;
    for (const auto& p : s.phi) {
      peak = std::max(peak, std::norm(p));
    }
    series.times.push_back(s.time);
    series.energy.push_back(lattice_energy(s, params));
    series.max_density.push_back(peak);
    series.variance.push_back(density_moments(s).second);
  };
  LatticeState s = state0;
  LatticeIntegrator integrator(params, dt, scheme);
  record(s);
  std::size_t done = 0;
  while (done < steps) {
    const std::size_t chunk = std::min(sample_every, steps - done);
    integrator.advance(s, chunk);
    done += chunk;
    s.time = state0.time + static_cast<double>(done) * dt;
    record(s);
  }
  if (final_state) {
    *final_state = s;
  }
  return series;
}

RelaxationSummary summarize(const RelaxationSeries& series, double late_fraction) {
  if (series.times.empty()) {
    throw DomainError("empty relaxation series");
  }
  if (!(late_fraction > 0.0 && late_fraction <= 1.0)) {
    throw DomainError("late_fraction must lie in (0, 1]");
  }
  RelaxationSummary r;
  r.initial_peak = series.max_density.front();
  r.initial_variance = series.variance.front();
  r.final_peak = series.max_density.back();
  r.final_variance = series.variance.back();
  const double t0 = series.times.front();
  const double t1 = series.times.back();
  const double start = t1 - late_fraction * (t1 - t0);
  std::size_t count = 0;
  for (std::size_t k = 0; k < series.times.size(); ++k) {
    if (series.times[k] >= start) {
      r.late_peak += series.max_density[k];
      r.late_variance += series.variance[k];
      ++count;
    }
  }
  r.late_peak /= static_cast<double>(count);
  r.late_variance /= static_cast<double>(count);
  const double e0 = series.energy.front();
  const double scale = e0 != 0.0 ? std::abs(e0) : 1.0;
  for (double e : series.energy) {
    r.max_energy_drift = std::max(r.max_energy_drift, std::abs(e - e0) / scale);
  }
  return r;
}

NonrelativisticMapping nonrelativistic_nlse(double mass, double lambda) {
  if (!(mass > 0.0) || !std::isfinite(mass) || !std::isfinite(lambda)) {
    throw DomainError("non-relativistic limit needs a positive finite mass");
  }
  NonrelativisticMapping map;
  map.params.epsilon = 1.0 / (2.0 * mass);
  map.params.lambda = -lambda / (12.0 * mass);
  map.potential = mass;
  return map;
}

}  // namespace nlse::phi4
