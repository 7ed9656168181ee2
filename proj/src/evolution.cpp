#include "nlse/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "nlse/error.hpp"

namespace nlse {
namespace {

double drift_velocity(const PropagationSettings& s) {
  return s.frame == Frame::Lab ? s.params.c : 0.0;
}

void check_settings(const PropagationSettings& s) {
  s.params.validate();
  if (!std::isfinite(s.potential)) {
    throw DomainError("potential must be finite");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Split-step integrator

SplitStepper::SplitStepper(const Grid& grid, PropagationSettings settings, double dt)
    : grid_(grid), settings_(std::move(settings)), dt_(dt), fft_(grid.n), spectrum_(grid.n) {
  grid_.validate();
  check_settings(settings_);
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw DomainError("time step must be positive and finite");
  }
  const auto q = angular_wavenumbers(grid_.n, grid_.length());
  const double eps = settings_.params.epsilon;
  const double c = drift_velocity(settings_);
  propagator_.resize(grid_.n);
  for (std::size_t j = 0; j < grid_.n; ++j) {
    propagator_[j] = std::polar(1.0, -(eps * q[j] * q[j] + c * q[j]) * dt_);
  }
}

void SplitStepper::nonlinear_half(ComplexField1D& field) {
  const double lambda = settings_.params.lambda;
  const double U = settings_.potential;
  const double half = 0.5 * dt_;
  const Nonlinearity& F = settings_.params.nonlinearity;
  const bool cubic = F.is_cubic();
  for (auto& v : field.values) {
    const double rho = std::norm(v);
    const double f = cubic ? rho : F.F(rho);
    v *= std::polar(1.0, (lambda * f - U) * half);
  }
}

void SplitStepper::step(ComplexField1D& field) {
  if (field.values.size() != grid_.n) {
    throw DomainError("field does not match the stepper grid");
  }
  nonlinear_half(field);
  fft_.forward(field.values, spectrum_);
  for (std::size_t j = 0; j < grid_.n; ++j) {
    spectrum_[j] *= propagator_[j];
  }
  fft_.inverse(spectrum_, field.values);
  nonlinear_half(field);
  ++steps_;
  field.time += dt_;
  double total = 0.0;
  for (const auto& v : field.values) {
    total += std::norm(v);
  }
  if (!std::isfinite(total)) {
    throw IntegrationError("split-step field became non-finite", steps_);
  }
}

void SplitStepper::advance(ComplexField1D& field, std::size_t steps) {
  for (std::size_t i = 0; i < steps; ++i) {
    step(field);
  }
}

ComplexField1D step_splitstep(ComplexField1D field, const PropagationSettings& settings, double dt) {
  field.validate();
  SplitStepper stepper(field.grid, settings, dt);
  stepper.step(field);
  return field;
}

// ---------------------------------------------------------------------------
// Diagnostics

void DiagnosticsSeries::push(const DiagnosticsRow& row) {
  times.push_back(row.time);
  P.push_back(row.P);
  j1.push_back(row.j1);
  j2.push_back(row.j2);
  peak.push_back(row.peak);
  norm.push_back(row.norm);
  energy.push_back(row.energy);
}

FieldAnalyzer::FieldAnalyzer(const Grid& grid, PropagationSettings settings)
    : grid_(grid),
      settings_(std::move(settings)),
      fft_(grid.n),
      fft_padded_(2 * grid.n),
      q_(angular_wavenumbers(grid.n, grid.length())) {
  grid_.validate();
  check_settings(settings_);
}

std::vector<std::complex<double>> FieldAnalyzer::spectrum(const ComplexField1D& field) const {
  if (field.values.size() != grid_.n) {
    throw DomainError("field does not match the analyzer grid");
  }
  std::vector<std::complex<double>> s(grid_.n);
  fft_.forward(field.values, s);
  return s;
}

namespace {

struct PointValue {
  std::complex<double> value;
  std::complex<double> derivative;
};

// Trigonometric interpolant with the Nyquist mode taken as a cosine.
PointValue evaluate(const std::vector<std::complex<double>>& spec, const std::vector<double>& q,
                    double offset) {
  const std::size_t n = spec.size();
  const std::size_t nyquist = n / 2;
  std::complex<double> v{0.0, 0.0};
  std::complex<double> d{0.0, 0.0};
  for (std::size_t j = 0; j < n; ++j) {
    if (j == nyquist && n > 1) {
      const double qn = std::abs(q[j]);
      v += spec[j] * std::cos(qn * offset);
      d += -spec[j] * qn * std::sin(qn * offset);
      continue;
    }
    const std::complex<double> term = spec[j] * std::polar(1.0, q[j] * offset);
    v += term;
    d += std::complex<double>(0.0, q[j]) * term;
  }
  const double inv = 1.0 / static_cast<double>(n);
  return {v * inv, d * inv};
}

}  // namespace

std::complex<double> FieldAnalyzer::value_at(const ComplexField1D& field, double x) const {
  return evaluate(spectrum(field), q_, x - grid_.x0).value;
}

double FieldAnalyzer::current_at(const ComplexField1D& field, double x) const {
  const PointValue p = evaluate(spectrum(field), q_, x - grid_.x0);
  const double j = 2.0 * settings_.params.epsilon * std::imag(std::conj(p.value) * p.derivative);
  return j + drift_velocity(settings_) * std::norm(p.value);
}

double FieldAnalyzer::integrated_density(const ComplexField1D& field, double x1, double x2) const {
  const std::size_t n = grid_.n;
  const std::size_t m = 2 * n;
  const auto spec = spectrum(field);
  // Zero-pad to 2n so |Psi|^2 of the interpolant is represented exactly.
  std::vector<std::complex<double>> padded(m, {0.0, 0.0});
  const double gain = static_cast<double>(m) / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (n > 1 && j == n / 2) {
      padded[j] += 0.5 * gain * spec[j];
      padded[m - n / 2] += 0.5 * gain * spec[j];
    } else if (j < n / 2 || n == 1) {
      padded[j] = gain * spec[j];
    } else {
      padded[j + n] = gain * spec[j];
    }
  }
  std::vector<std::complex<double>> fine(m);
  fft_padded_.inverse(padded, fine);
  for (auto& v : fine) {
    v = std::norm(v);
  }
  std::vector<std::complex<double>> rho_hat(m);
  fft_padded_.forward(fine, rho_hat);
  const auto qm = angular_wavenumbers(m, grid_.length());
  const double a = x1 - grid_.x0;
  const double b = x2 - grid_.x0;
  double total = rho_hat[0].real() * (b - a);
  for (std::size_t j = 1; j < m; ++j) {
    const double q = qm[j];
    if (j == m / 2) {
      const double qn = std::abs(q);
      total += rho_hat[j].real() * (std::sin(qn * b) - std::sin(qn * a)) / qn;
      continue;
    }
    const std::complex<double> diff = std::polar(1.0, q * b) - std::polar(1.0, q * a);
    total += std::real(rho_hat[j] * diff / std::complex<double>(0.0, q));
  }
  return total / static_cast<double>(m);
}

double FieldAnalyzer::energy(const ComplexField1D& field) const {
  const auto spec = spectrum(field);
  double kinetic = 0.0;
  for (std::size_t j = 0; j < grid_.n; ++j) {
    kinetic += q_[j] * q_[j] * std::norm(spec[j]);
  }
  kinetic *= settings_.params.epsilon * grid_.dx / static_cast<double>(grid_.n);
  const Nonlinearity& F = settings_.params.nonlinearity;
  double interaction = 0.0;
  double mass = 0.0;
  for (const auto& v : field.values) {
    const double rho = std::norm(v);
    interaction += F.is_cubic() ? 0.25 * rho * rho : F.integral(std::sqrt(rho));
    mass += rho;
  }
  return kinetic - 2.0 * settings_.params.lambda * interaction * grid_.dx +
         settings_.potential * mass * grid_.dx;
}

DiagnosticsRow FieldAnalyzer::analyze(const ComplexField1D& field, double x1, double x2) const {
  DiagnosticsRow row;
  row.time = field.time;
  row.P = integrated_density(field, x1, x2);
  row.j1 = current_at(field, x1);
  row.j2 = current_at(field, x2);
  double peak = 0.0;
  for (const auto& v : field.values) {
    peak = std::max(peak, std::norm(v));
  }
  row.peak = peak;
  row.norm = field.norm();
  row.energy = energy(field);
  return row;
}

// ---------------------------------------------------------------------------
// Lifetimes

namespace {

LifetimeResult lifetime_header(const DiagnosticsSeries& series, double P_o) {
  if (series.size() == 0) {
    throw DomainError("lifetime: empty series");
  }
  for (std::size_t k = 1; k < series.size(); ++k) {
    if (!(series.times[k] > series.times[k - 1])) {
      throw DomainError("lifetime: sample times must increase");
    }
  }
  LifetimeResult r;
  r.P0 = series.P.front();
  r.P_o = P_o;
  if (!(P_o < r.P0)) {
    throw DomainError("lifetime: far-field reference P_o must be below P(0)");
  }
  r.half_threshold = 0.5 * (r.P0 + P_o);
  r.final_P = series.P.back();
  return r;
}

std::optional<double> first_crossing(const DiagnosticsSeries& s, double threshold) {
  for (std::size_t k = 1; k < s.size(); ++k) {
    if (s.P[k] <= threshold) {
      const double f = (s.P[k - 1] - threshold) / (s.P[k - 1] - s.P[k]);
      return s.times[k - 1] + f * (s.times[k] - s.times[k - 1]);
    }
  }
  return std::nullopt;
}

// int_{threshold}^{P(0)} dP / (j2 - j1) along the sampled trajectory.
std::optional<double> flux_integral(const DiagnosticsSeries& s, double threshold) {
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < s.size(); ++k) {
    const double Pa = s.P[k];
    const double Pb = s.P[k + 1];
    if (!(Pb < Pa)) {
      return std::nullopt;
    }
    const double gb = s.j2[k + 1] - s.j1[k + 1];
    double ga = s.j2[k] - s.j1[k];
    if (std::abs(ga) <= 1e-9 * std::abs(gb)) {
      ga = 0.0;
    }
    if (ga < 0.0 || !(gb > 0.0)) {
      return std::nullopt;
    }
    const bool last = Pb <= threshold;
    const double end = last ? threshold : Pb;
    const double g_end = last ? ga + (gb - ga) * (Pa - threshold) / (Pa - Pb) : gb;
    if (ga == 0.0) {
      // Outflux vanishing at the segment start: (j2 - j1) ~ sqrt(Pa - P).
      total += 2.0 * (Pa - end) / g_end;
    } else {
      total += 0.5 * (Pa - end) * (1.0 / ga + 1.0 / g_end);
    }
    if (last) {
      return total;
    }
  }
  return std::nullopt;
}

}  // namespace

LifetimeResult lifetime(const DiagnosticsSeries& series, double P_o) {
  LifetimeResult r = lifetime_header(series, P_o);
  r.tau = first_crossing(series, P_o);
  r.tau_half = first_crossing(series, r.half_threshold);
  return r;
}

LifetimeResult lifetime_from_currents(const DiagnosticsSeries& series, double P_o) {
  LifetimeResult r = lifetime_header(series, P_o);
  if (first_crossing(series, P_o)) {
    r.tau = flux_integral(series, P_o);
  }
  if (first_crossing(series, r.half_threshold)) {
    r.tau_half = flux_integral(series, r.half_threshold);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Experiment driver

double default_time_step(const Grid& grid, double epsilon) {
  return std::min(1e-3, grid.dx * grid.dx / (10.0 * epsilon));
}

ExperimentResult evolve_experiment(const ComplexField1D& initial, const ExperimentSettings& settings) {
  initial.validate();
  check_settings(settings.propagation);
  const Grid& grid = initial.grid;
  if (!(settings.t_max >= 0.0) || !std::isfinite(settings.t_max)) {
    throw DomainError("t_max must be finite and non-negative");
  }
  if (settings.sample_every == 0) {
    throw DomainError("sample_every must be positive");
  }
  const double lo = grid.x0;
  const double hi = grid.x0 + grid.length();
  if (!(settings.x1 < settings.x2) || settings.x1 < lo || settings.x2 > hi) {
    throw DomainError("diagnostic window [x1, x2] must be ordered and inside the box");
  }

  ExperimentResult out;
  const double eps = settings.propagation.params.epsilon;
  double dt = settings.dt.value_or(default_time_step(grid, eps));
  if (!(dt > 0.0)) {
    throw DomainError("time step must be positive");
  }
  const double bound = grid.dx * grid.dx / (std::numbers::pi * eps);
  if (dt >= bound) {
    std::ostringstream msg;
    msg << "dt = " << dt << " is not below dx^2/(pi epsilon) = " << bound;
    out.warnings.push_back(msg.str());
  }
  std::size_t steps = 0;
  if (settings.t_max > 0.0) {
    steps = static_cast<std::size_t>(std::ceil(settings.t_max / dt - 1e-9));
    steps = std::max<std::size_t>(steps, 1);
    dt = settings.t_max / static_cast<double>(steps);
  }
  out.dt = dt;
  out.steps = steps;

  ComplexField1D field = initial;
  const FieldAnalyzer analyzer(grid, settings.propagation);
  out.series.push(analyzer.analyze(field, settings.x1, settings.x2));
  out.snapshots.push_back(field);
  if (steps > 0) {
    SplitStepper stepper(grid, settings.propagation, dt);
    for (std::size_t k = 1; k <= steps; ++k) {
      stepper.step(field);
      field.time = initial.time + static_cast<double>(k) * dt;
      if (k % settings.sample_every == 0 || k == steps) {
        out.series.push(analyzer.analyze(field, settings.x1, settings.x2));
      }
      if ((settings.snapshot_every > 0 && k % settings.snapshot_every == 0) || k == steps) {
        out.snapshots.push_back(field);
      }
    }
  }
  out.final_field = field;
  return out;
}

}  // namespace nlse
