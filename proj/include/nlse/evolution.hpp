#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nlse/field.hpp"
#include "nlse/oscillator.hpp"
#include "nlse/spectral.hpp"

namespace nlse {

/// CoMoving drops the drift term -i c Psi_x; Lab keeps it.
enum class Frame { CoMoving, Lab };

/// i Psi_t = -i c Psi_x - epsilon Psi_xx - lambda F(|Psi|^2) Psi + U Psi with a
/// uniform potential U.
struct PropagationSettings {
  WaveParams params;
  Frame frame = Frame::CoMoving;
  double potential = 0.0;
};

/**
 * Strang split-step integrator: half nonlinear phase, exact linear step in
 * Fourier space, half nonlinear phase. Buffers and propagators are built
 * once per (grid, settings, dt).
 */
class SplitStepper {
 public:
  SplitStepper(const Grid& grid, PropagationSettings settings, double dt);

  const Grid& grid() const noexcept { return grid_; }
  double dt() const noexcept { return dt_; }
  std::size_t steps_taken() const noexcept { return steps_; }

  /// Advances one step. Throws IntegrationError (with the step index) on
  /// non-finite samples.
  void step(ComplexField1D& field);
  void advance(ComplexField1D& field, std::size_t steps);

 private:
  void nonlinear_half(ComplexField1D& field);

  Grid grid_;
  PropagationSettings settings_;
  double dt_;
  FourierTransform fft_;
  std::vector<std::complex<double>> propagator_;
  std::vector<std::complex<double>> spectrum_;
  std::size_t steps_ = 0;
};

/// One Strang step; convenience wrapper around SplitStepper.
ComplexField1D step_splitstep(ComplexField1D field, const PropagationSettings& settings, double dt);

struct DiagnosticsRow {
  double time = 0.0;
  double P = 0.0;
  double j1 = 0.0;
  double j2 = 0.0;
  double peak = 0.0;
  double norm = 0.0;
  double energy = 0.0;
};

struct DiagnosticsSeries {
  std::vector<double> times;
  std::vector<double> P;
  std::vector<double> j1;
  std::vector<double> j2;
  std::vector<double> peak;
  std::vector<double> norm;
  std::vector<double> energy;

  void push(const DiagnosticsRow& row);
  std::size_t size() const noexcept { return times.size(); }
};

/**
 * Spectral diagnostics of a field on its grid.
 *
 * Point values and derivatives come from evaluating the trigonometric
 * interpolant at the requested coordinate. P is the exact integral of the
 * interpolant's density over [x1, x2]. The current is
 * j = i epsilon (Psi Psi*_x - Psi* Psi_x), plus c rho in the lab frame.
 */
class FieldAnalyzer {
 public:
  FieldAnalyzer(const Grid& grid, PropagationSettings settings);

  DiagnosticsRow analyze(const ComplexField1D& field, double x1, double x2) const;

  std::complex<double> value_at(const ComplexField1D& field, double x) const;
  double current_at(const ComplexField1D& field, double x) const;
  double integrated_density(const ComplexField1D& field, double x1, double x2) const;
  /// int [epsilon |Psi_x|^2 - lambda int_0^{|Psi|^2} F + U |Psi|^2] dx.
  double energy(const ComplexField1D& field) const;

 private:
  std::vector<std::complex<double>> spectrum(const ComplexField1D& field) const;

  Grid grid_;
  PropagationSettings settings_;
  FourierTransform fft_;
  FourierTransform fft_padded_;
  std::vector<double> q_;
};

struct LifetimeResult {
  std::optional<double> tau;
  std::optional<double> tau_half;
  double P0 = 0.0;
  double P_o = 0.0;
  double half_threshold = 0.0;
  double final_P = 0.0;
};

/// First times P(t) reaches P_o and (P(0) + P_o) / 2, by linear
/// interpolation between samples; absent when not reached.
/// Throws DomainError unless P_o < P(0) and the times increase.
LifetimeResult lifetime(const DiagnosticsSeries& series, double P_o);

/// The same thresholds via tau = int_{P_o}^{P(0)} dP / (j2 - j1), evaluated
/// with the trapezoidal rule in P along the sampled trajectory. Absent when
/// the threshold is not reached or when P is not monotone up to it.
LifetimeResult lifetime_from_currents(const DiagnosticsSeries& series, double P_o);

struct ExperimentSettings {
  PropagationSettings propagation;
  double t_max = 0.0;
  /// Default min(1e-3, dx^2 / (10 epsilon)); adjusted so t_max is hit exactly.
  std::optional<double> dt;
  std::size_t sample_every = 100;
  /// Snapshot cadence in steps; 0 keeps only the initial and final fields.
  std::size_t snapshot_every = 0;
  double x1 = 0.0;
  double x2 = 0.0;
};

struct ExperimentResult {
  DiagnosticsSeries series;
  std::vector<ComplexField1D> snapshots;
  ComplexField1D final_field;
  double dt = 0.0;
  std::size_t steps = 0;
  std::vector<std::string> warnings;
};

double default_time_step(const Grid& grid, double epsilon);

/// Runs the split-step integrator with diagnostics every `sample_every` steps
/// (and at the last step). Deterministic for fixed inputs.
ExperimentResult evolve_experiment(const ComplexField1D& initial, const ExperimentSettings& settings);

}  // namespace nlse
