#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <utility>
#include <string>
#include <vector>

#include "nlse/oscillator.hpp"

namespace nlse::phi4 {

/// Printed: onsite (16 + m^2 Delta^2) / (2 Delta^2). Standard: the
/// nearest-neighbour Laplacian value (4 + m^2 Delta^2) / (2 Delta^2).
enum class Stencil { Printed, Standard };

struct LatticeParams {
  std::size_t nx = 64;
  std::size_t ny = 64;
  double Delta = 1.0;
  double mass = 2.0;
  double lambda = 0.0;
  Stencil stencil = Stencil::Printed;
  std::optional<double> onsite_override;
  std::optional<double> coupling_override;

  double onsite_coeff() const;
  /// Defaults to 1 / Delta^2.
  double coupling_coeff() const;
  std::size_t sites() const noexcept { return nx * ny; }
  /// Throws DomainError unless nx, ny >= 2, Delta > 0 and all values finite.
  void validate() const;
};

using SiteField = std::vector<std::complex<double>>;

/// Site (i, j) is stored at i + nx * j; i runs along x.
struct LatticeState {
  std::size_t nx = 0;
  std::size_t ny = 0;
  SiteField phi;
  SiteField phidot;
  double time = 0.0;

  static LatticeState zeros(const LatticeParams& params);
  std::complex<double>& at(std::size_t i, std::size_t j) { return phi[i + nx * j]; }
  const std::complex<double>& at(std::size_t i, std::size_t j) const { return phi[i + nx * j]; }
};

/**
 * H = sum_ij [ |phidot|^2/2 + a |phi|^2 + lambda |phi|^4 / 24 ]
 *     - b sum_bonds Re(phi_ij^* phi_kl)
 * with one bond to the right and one upward from every site of the
 * periodic lattice (a = onsite, b = coupling).
 */
double lattice_energy(const LatticeState& state, const LatticeParams& params);

/// -dH/dRe(phi) - i dH/dIm(phi) = -2a phi - (lambda/6)|phi|^2 phi + b sum_nbrs phi.
void lattice_force(const SiteField& phi, const LatticeParams& params, SiteField& out);
SiteField lattice_force(const SiteField& phi, const LatticeParams& params);

/// Largest frequency of the linearized (lambda = 0) lattice.
double max_linear_frequency(const LatticeParams& params);

/// One velocity-Verlet step. Throws IntegrationError naming the site on
/// non-finite values.
void step_leapfrog(LatticeState& state, const LatticeParams& params, double dt);

/// Verlet, or its symmetric 4th- and 6th-order Suzuki-Yoshida compositions.
enum class Integrator { Verlet, Yoshida4, Yoshida6 };

class LatticeIntegrator {
 public:
  LatticeIntegrator(LatticeParams params, double dt, Integrator scheme = Integrator::Yoshida6);

  const LatticeParams& params() const noexcept { return params_; }
  double dt() const noexcept { return dt_; }
  std::size_t stages() const noexcept { return weights_.size(); }

  void step(LatticeState& state);
  void advance(LatticeState& state, std::size_t steps);

 private:
  // Runs the Verlet stages; force_ must hold the force of the current phi.
  void run_stages(LatticeState& state);

  LatticeParams params_;
  double dt_;
  std::vector<double> weights_;
  SiteField force_;
  std::size_t steps_ = 0;
};

struct NormalModes {
  std::size_t sites = 0;
  /// Ascending eigenvalues of the quadratic form.
  std::vector<double> omega2;
  /// Column-major orthonormal eigenvectors (sites x sites).
  std::vector<double> vectors;
  /// omega^2 from the periodic-lattice dispersion, ascending.
  std::vector<double> dispersion_omega2;
  std::size_t unstable = 0;
  double max_dispersion_mismatch = 0.0;
};

/// Dense diagonalization for lattices of at most 1024 sites.
NormalModes normal_modes(const LatticeParams& params);

/// omega^2(k) = 2a - 2b (cos kx Delta + cos ky Delta).
double dispersion_omega2(const LatticeParams& params, double kx, double ky);

/// Exact lambda = 0 evolution of state0 to time t by modal superposition.
LatticeState normal_mode_evolution(const NormalModes& modes, const LatticeState& state0, double t);

/// phi = cos(k . r) + alpha exp(-|r - r0|^2) with r = Delta (i, j), r0 the
/// lattice centre, phidot = 0. Appends a warning when k is not commensurate
/// with the periodic lattice.
LatticeState rogue_initial(const LatticeParams& params, double alpha, std::array<double, 2> k_bg,
                           std::vector<std::string>* warnings = nullptr);

/// Forward `steps`, negate velocities, forward `steps`, negate velocities;
/// returns the max-norm distance (phi and phidot) from state0.
double time_reversal_test(const LatticeState& state0, const LatticeParams& params, std::size_t steps,
                          double dt, Integrator scheme = Integrator::Yoshida6);

struct RelaxationSeries {
  std::vector<double> times;
  std::vector<double> energy;
  std::vector<double> max_density;
  std::vector<double> variance;
};

/// Spatial mean and variance of |phi|^2.
std::pair<double, double> density_moments(const LatticeState& state);

RelaxationSeries relax_to_steady(const LatticeState& state0, const LatticeParams& params,
                                 std::size_t steps, double dt, std::size_t sample_every = 100,
                                 Integrator scheme = Integrator::Yoshida6,
                                 LatticeState* final_state = nullptr);

struct RelaxationSummary {
  double initial_peak = 0.0;
  double initial_variance = 0.0;
  /// Means over the samples in the last `late_fraction` of the run.
  double late_peak = 0.0;
  double late_variance = 0.0;
  double final_peak = 0.0;
  double final_variance = 0.0;
  double max_energy_drift = 0.0;
};

RelaxationSummary summarize(const RelaxationSeries& series, double late_fraction = 0.1);

/// Non-relativistic limit i phi_t = -lap phi / (2m) + (lambda / 12m) |phi|^2 phi + m phi
/// written as NLSE parameters epsilon = 1/(2m), lambda_nlse = -lambda/(12m)
/// and a uniform potential U = m.
struct NonrelativisticMapping {
  WaveParams params;
  double potential = 0.0;
};

NonrelativisticMapping nonrelativistic_nlse(double mass, double lambda);

}  // namespace nlse::phi4
