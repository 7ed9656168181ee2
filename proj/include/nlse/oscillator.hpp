#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nlse/elliptic.hpp"

namespace nlse {

/**
 * Nonlinearity F(|Psi|^2) of the NLSE. The cubic case F(s) = s has closed
 * forms everywhere; any other F goes through quadrature.
 */
class Nonlinearity {
 public:
  static Nonlinearity cubic();
  /// `F` maps s = u^2 to F(s). `dF` is optional; a central difference is
  /// used when it is absent.
  static Nonlinearity custom(std::string name, std::function<double(double)> F,
                             std::function<double(double)> dF = {});

  bool is_cubic() const noexcept { return !F_; }
  const std::string& name() const noexcept { return name_; }

  double F(double s) const;
  double dF(double s) const;
  /// G(u) = int_0^u F(v^2) v dv.
  double integral(double u) const;

 private:
  std::string name_ = "cubic";
  std::function<double(double)> F_;
  std::function<double(double)> dF_;
};

/// Traveling-wave parameters (omega, lambda, epsilon, c, E) of
/// omega u = -epsilon u'' - lambda F(u^2) u, with Psi = e^{-i omega t} u(x - c t).
struct WaveParams {
  double omega = 0.0;
  double lambda = 1.0;
  double epsilon = 1.0;
  double c = 0.0;
  double E = 0.0;
  Nonlinearity nonlinearity = Nonlinearity::cubic();

  /// Throws DomainError on non-finite values or epsilon <= 0.
  void validate() const;
};

/// V_eff(u) = omega u^2 / 2 + lambda int_0^u F(v^2) v dv.
double effective_potential(double u, const WaveParams& p);
/// dV_eff/du = omega u + lambda F(u^2) u.
double effective_force(double u, const WaveParams& p);
/// E = V_eff(u) + (epsilon / 2) u'^2.
double mechanical_energy(double u, double du_dx, const WaveParams& p);
/// Minimum of V_eff over the real line; -inf when unbounded below.
double potential_minimum(const WaveParams& p);

/// Which elliptic function represents sign * A * cn(k xi | m) after the
/// reciprocal (m > 1) or negative-parameter (m < 0) transformation.
enum class ProfileForm { Zero, Cn, Dn, Cd };

/**
 * Closed-form traveling wave u(xi) = sign * A * cn(k xi | m), xi = x - c t.
 *
 * For m > 1 the profile is evaluated as A dn(sqrt(m) k xi | 1/m) and for
 * m < 0 as A cd(sqrt(1-m) k xi | -m/(1-m)); both are the same function.
 */
class SolutionProfile {
 public:
  const WaveParams& params() const noexcept { return params_; }
  double amplitude() const noexcept { return amplitude_; }
  double wavenumber() const noexcept { return wavenumber_; }
  /// m as it appears in cn(k xi, m); may fall outside [0, 1].
  double parameter() const noexcept { return m_; }
  /// 1 - m, computed without cancellation.
  double complement() const noexcept { return mc_; }
  int sign() const noexcept { return sign_; }
  ProfileForm form() const noexcept { return form_; }

  SolutionProfile with_sign(int sign) const;

  double value(double xi) const;
  double derivative(double xi) const;
  double value(double x, double t) const { return value(x - params_.c * t); }
  std::complex<double> psi(double x, double t) const;

  /// Spatial period; +inf for the soliton (m = 1) and zero profiles.
  double period() const;
  /// Smallest positive zero, none for dn-type, soliton and zero profiles.
  std::optional<double> first_node() const;
  /// Distance between consecutive zeros (half a period).
  double node_spacing() const;
  /// Zero of the profile nearest to xi; none when the profile has no zeros.
  std::optional<double> nearest_node(double xi) const;

 private:
  friend SolutionProfile exact_solution(const WaveParams& params);
  SolutionProfile(WaveParams params, double amplitude, double wavenumber, double m, double mc,
                  ProfileForm form, double scale, EllipticParameter reduced);

  WaveParams params_;
  double amplitude_;
  double wavenumber_;
  double m_;
  double mc_;
  int sign_ = 1;
  ProfileForm form_;
  double scale_;
  EllipticParameter reduced_;
};

/// Closed-form solution for the cubic nonlinearity (and lambda = 0, omega > 0).
/// Throws DomainError when 4 E lambda + omega^2 < 0 or the squared amplitude
/// is negative.
SolutionProfile exact_solution(const WaveParams& params);

enum class Heading { Decreasing, Increasing };

struct QuadratureOptions {
  std::size_t samples = 1025;
  Heading heading = Heading::Decreasing;
};

/**
 * Orbit of the mechanical analogue obtained by inverting
 * x(u) = int du / sqrt(2 (E - V_eff(u)) / epsilon) between turning points.
 * The integrable square-root endpoint singularities are removed with the
 * substitution v = u_turn -/+ s^2.
 */
class QuadratureOrbit {
 public:
  QuadratureOrbit(const WaveParams& params, double u0, Heading heading = Heading::Decreasing);

  double value(double x) const;
  double period() const noexcept { return 2.0 * half_period_; }
  double lower_turning_point() const noexcept { return u_low_; }
  double upper_turning_point() const noexcept { return u_high_; }
  /// Travel time from the upper turning point down to u (0 <= result <= period/2).
  double descent_time(double u) const;

 private:
  struct Branch {
    double turning = 0.0;   // turning point of this half
    double direction = 0;   // v = turning + direction * s^2
    double s_max = 0.0;     // s at the midpoint
    double slope = 0.0;     // -Q'(turning), > 0
    double curvature = 0.0; // Q''(turning)
    std::vector<double> nodes;
    std::vector<double> cumulative;
  };

  double q(double v) const;
  double integrand(const Branch& b, double s) const;
  double branch_time(const Branch& b, double s) const;
  double invert(const Branch& b, double time) const;
  void build_branch(Branch& b, double turning, double direction, double midpoint);

  WaveParams params_;
  double u_low_ = 0.0;
  double u_high_ = 0.0;
  double half_period_ = 0.0;
  double phase0_ = 0.0;
  Branch upper_;
  Branch lower_;
};

struct SampledProfile {
  std::vector<double> x;
  std::vector<double> u;
  double period = 0.0;
  double u_low = 0.0;
  double u_high = 0.0;
};

/// Samples the quadrature orbit uniformly on [0, x_max].
/// Throws DomainError when E < min V_eff or u0 lies outside the allowed
/// region, and when the orbit is unbounded or sits on a separatrix.
SampledProfile solve_quadrature(const WaveParams& params, double u0, double x_max,
                                const QuadratureOptions& options = {});

struct RadialCheck {
  double max_deviation = 0.0;
  bool unstable = false;
  double blowup_radius = 0.0;
};

/**
 * Integrates the s-wave radial equation
 *   omega u = -epsilon (u'' + (d-1)/r u') - lambda F(u^2) u
 * on [r_min, r_max] from (u, u') of the 1-D closed-form profile at its crest
 * and reports max |u_radial(r) - u_1D(r - r_min)|.
 */
RadialCheck radial_asymptotic_check(const WaveParams& params, int dimension, double r_min,
                                    double r_max, std::size_t samples = 2001);

struct FloquetResult {
  std::array<std::complex<double>, 2> multipliers;
  /// Row-major [[u1, u2], [u1', u2']] after one period.
  std::array<double, 4> monodromy;
  double trace = 0.0;
  double determinant = 0.0;

  double spectral_radius() const;
  bool parametric_resonance(double tol = 1e-8) const { return spectral_radius() > 1.0 + tol; }
};

/// Monodromy of epsilon u'' = (h cos(gamma x) - omega) u over one period
/// 2 pi / gamma (the lambda = 0 linearization with U = h cos(gamma x)).
FloquetResult floquet_multipliers(double omega, double epsilon, double h, double gamma);

/// First-order half-width of the principal parametric-resonance band of
/// epsilon u'' = (h cos(gamma x) - omega) u around gamma = 2 sqrt(omega/epsilon).
double parametric_band_halfwidth(double omega, double epsilon, double h);

struct ResonanceGrowth {
  bool bounded = true;
  std::optional<double> exponent;
  double max_amplitude = 0.0;
  std::vector<double> peak_x;
  std::vector<double> peak_u;
};

struct ForcingOptions {
  double u0 = 0.0;
  double du0 = 0.0;
  std::size_t samples_per_period = 64;
  /// Peaks with x below fit_start_fraction * x_max are excluded from the fit.
  double fit_start_fraction = 0.1;
};

/**
 * Integrates epsilon u'' = f0 cos(Omega x) - omega u - lambda F(u^2) u on
 * [0, x_max] and fits the envelope of |u| to a power law x^p. `bounded` is
 * false when p >= 0.5 (secular growth).
 */
ResonanceGrowth forced_resonance_growth(const WaveParams& params, double f0, double Omega,
                                        double x_max, const ForcingOptions& options = {});

}  // namespace nlse
