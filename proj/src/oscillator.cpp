#include "nlse/oscillator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "nlse/error.hpp"
#include "nlse/fit.hpp"
#include "nlse/ode.hpp"

namespace nlse {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool finite_all(std::initializer_list<double> values) {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

double potential_curvature(double u, const WaveParams& p) {
  const double s = u * u;
  return p.omega + p.lambda * (p.nonlinearity.F(s) + 2.0 * s * p.nonlinearity.dF(s));
}

}  // namespace

// ---------------------------------------------------------------------------
// Nonlinearity

Nonlinearity Nonlinearity::cubic() { return Nonlinearity(); }

Nonlinearity Nonlinearity::custom(std::string name, std::function<double(double)> F,
                                  std::function<double(double)> dF) {
  if (!F) {
    throw DomainError("custom nonlinearity requires a callable F");
  }
  Nonlinearity n;
  n.name_ = std::move(name);
  n.F_ = std::move(F);
  n.dF_ = std::move(dF);
  return n;
}

double Nonlinearity::F(double s) const { return F_ ? F_(s) : s; }

double Nonlinearity::dF(double s) const {
  if (!F_) {
    return 1.0;
  }
  if (dF_) {
    return dF_(s);
  }
  const double h = 1e-6 * std::max(1.0, std::abs(s));
  return (F_(s + h) - F_(s - h)) / (2.0 * h);
}

double Nonlinearity::integral(double u) const {
  if (!F_) {
    const double s = u * u;
    return 0.25 * s * s;
  }
  if (u == 0.0) {
    return 0.0;
  }
  // v = u t keeps the integrand of order F(u^2) for every u.
  const double s = u * u;
  auto integrand = [this, s](double t) { return F_(s * t * t) * t; };
  return s * boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, 1.0, 15,
                                                                           1e-14);
}

void WaveParams::validate() const {
  if (!finite_all({omega, lambda, epsilon, c, E})) {
    throw DomainError("wave parameters must be finite");
  }
  if (!(epsilon > 0.0)) {
    throw DomainError("epsilon must be positive");
  }
}

// ---------------------------------------------------------------------------
// Mechanical analogue

double effective_potential(double u, const WaveParams& p) {
  return 0.5 * p.omega * u * u + p.lambda * p.nonlinearity.integral(u);
}

double effective_force(double u, const WaveParams& p) {
  return p.omega * u + p.lambda * p.nonlinearity.F(u * u) * u;
}

double mechanical_energy(double u, double du_dx, const WaveParams& p) {
  return effective_potential(u, p) + 0.5 * p.epsilon * du_dx * du_dx;
}

double potential_minimum(const WaveParams& p) {
  if (p.nonlinearity.is_cubic()) {
    if (p.lambda > 0.0) {
      return p.omega >= 0.0 ? 0.0 : -p.omega * p.omega / (4.0 * p.lambda);
    }
    if (p.lambda == 0.0 && p.omega >= 0.0) {
      return 0.0;
    }
    return -kInf;
  }
  // V_eff is even; scan u >= 0, then polish the best bracket.
  constexpr int kScan = 2000;
  constexpr double kReach = 100.0;
  int best = 0;
  double best_v = effective_potential(0.0, p);
  for (int i = 1; i <= kScan; ++i) {
    const double v = effective_potential(kReach * i / kScan, p);
    if (v < best_v) {
      best_v = v;
      best = i;
    }
  }
  if (best == kScan) {
    return -kInf;
  }
  if (best == 0) {
    return best_v;
  }
  const double lo = kReach * (best - 1) / kScan;
  const double hi = kReach * (best + 1) / kScan;
  auto r = boost::math::tools::brent_find_minima(
      [&p](double u) { return effective_potential(u, p); }, lo, hi, 50);
  return std::min(best_v, r.second);
}

// ---------------------------------------------------------------------------
// Closed-form cn profile

SolutionProfile::SolutionProfile(WaveParams params, double amplitude, double wavenumber, double m,
                                 double mc, ProfileForm form, double scale,
                                 EllipticParameter reduced)
    : params_(std::move(params)),
      amplitude_(amplitude),
      wavenumber_(wavenumber),
      m_(m),
      mc_(mc),
      form_(form),
      scale_(scale),
      reduced_(reduced) {}

SolutionProfile SolutionProfile::with_sign(int sign) const {
  SolutionProfile copy = *this;
  copy.sign_ = sign < 0 ? -1 : 1;
  return copy;
}

double SolutionProfile::value(double xi) const {
  if (form_ == ProfileForm::Zero) {
    return 0.0;
  }
  const JacobiValues j = jacobi_elliptic(scale_ * xi, reduced_);
  double f = 0.0;
  switch (form_) {
    case ProfileForm::Cn: f = j.cn; break;
    case ProfileForm::Dn: f = j.dn; break;
    case ProfileForm::Cd: f = j.cn / j.dn; break;
    case ProfileForm::Zero: break;
  }
  return sign_ * amplitude_ * f;
}

double SolutionProfile::derivative(double xi) const {
  if (form_ == ProfileForm::Zero) {
    return 0.0;
  }
  const JacobiValues j = jacobi_elliptic(scale_ * xi, reduced_);
  double df = 0.0;
  switch (form_) {
    case ProfileForm::Cn: df = -j.sn * j.dn; break;
    case ProfileForm::Dn: df = -reduced_.m() * j.sn * j.cn; break;
    case ProfileForm::Cd: df = -reduced_.complement() * j.sn / (j.dn * j.dn); break;
    case ProfileForm::Zero: break;
  }
  return sign_ * amplitude_ * scale_ * df;
}

std::complex<double> SolutionProfile::psi(double x, double t) const {
  return std::polar(1.0, -params_.omega * t) * value(x, t);
}

double SolutionProfile::period() const {
  if (form_ == ProfileForm::Zero || reduced_.complement() == 0.0) {
    return kInf;
  }
  const double K = complete_elliptic_K(reduced_);
  return (form_ == ProfileForm::Dn ? 2.0 : 4.0) * K / scale_;
}

std::optional<double> SolutionProfile::first_node() const {
  if (form_ == ProfileForm::Zero || form_ == ProfileForm::Dn || reduced_.complement() == 0.0) {
    return std::nullopt;
  }
  return complete_elliptic_K(reduced_) / scale_;
}

double SolutionProfile::node_spacing() const { return 0.5 * period(); }

std::optional<double> SolutionProfile::nearest_node(double xi) const {
  const auto first = first_node();
  if (!first) {
    return std::nullopt;
  }
  const double spacing = node_spacing();
  return *first + spacing * std::round((xi - *first) / spacing);
}

SolutionProfile exact_solution(const WaveParams& params) {
  params.validate();
  if (!params.nonlinearity.is_cubic()) {
    throw DomainError("closed-form solution exists only for the cubic nonlinearity");
  }
  const double omega = params.omega;
  const double lambda = params.lambda;
  const double E = params.E;
  const double eps = params.epsilon;
  const EllipticParameter circular(0.0);

  if (lambda == 0.0) {
    if (omega > 0.0 && E >= 0.0) {
      const double A = std::sqrt(2.0 * E / omega);
      const double k = std::sqrt(omega / eps);
      const ProfileForm form = A == 0.0 ? ProfileForm::Zero : ProfileForm::Cn;
      return SolutionProfile(params, A, k, 0.0, 1.0, form, k, circular);
    }
    if (omega == 0.0 && E == 0.0) {
      return SolutionProfile(params, 0.0, 0.0, 0.0, 1.0, ProfileForm::Zero, 0.0, circular);
    }
    throw DomainError("linear oscillator with these (omega, E) has no bounded solution");
  }

  const double disc = 4.0 * E * lambda + omega * omega;
  if (disc < 0.0) {
    throw DomainError("4 E lambda + omega^2 < 0: no real oscillatory solution");
  }
  const double s = std::sqrt(disc);
  if (s == 0.0) {
    return SolutionProfile(params, 0.0, 0.0, 0.5, 0.5, ProfileForm::Zero, 0.0, circular);
  }
  // Squared amplitude (s - omega) / lambda, m and 1 - m, each arranged so
  // that no nearly-equal terms are subtracted.
  double A2 = 0.0;
  double m = 0.0;
  double mc = 0.0;
  if (omega > 0.0) {
    A2 = 4.0 * E / (s + omega);
    mc = (s + omega) / (2.0 * s);
    m = 4.0 * E * lambda / (2.0 * s * (s + omega));
  } else {
    A2 = (s - omega) / lambda;
    m = (s - omega) / (2.0 * s);
    mc = 4.0 * E * lambda / (2.0 * s * (s - omega));
  }
  if (A2 < 0.0) {
    throw DomainError("squared amplitude -omega/lambda + sqrt(4 E lambda + omega^2)/lambda < 0");
  }
  const double k = std::sqrt(s / eps);
  const double A = std::sqrt(A2);
  if (A == 0.0) {
    return SolutionProfile(params, 0.0, k, m, mc, ProfileForm::Zero, k, circular);
  }
  if (m >= 0.0 && mc >= 0.0) {
    return SolutionProfile(params, A, k, m, mc, ProfileForm::Cn, k,
                           EllipticParameter::from_complement(std::min(mc, 1.0)));
  }
  if (mc < 0.0) {
    // cn(z | m) = dn(sqrt(m) z | 1/m) for m > 1.
    return SolutionProfile(params, A, k, m, mc, ProfileForm::Dn, k * std::sqrt(m),
                           EllipticParameter::from_complement(-mc / m));
  }
  // cn(z | m) = cd(sqrt(1-m) z | -m/(1-m)) for m < 0.
  return SolutionProfile(params, A, k, m, mc, ProfileForm::Cd, k * std::sqrt(mc),
                         EllipticParameter::from_complement(1.0 / mc));
}

// ---------------------------------------------------------------------------
// Quadrature orbit

namespace {

constexpr int kBranchNodes = 64;
// Below s^2 < kLocalFraction * (u_high - u_low) the integrand uses the
// second-order expansion of Q about the turning point.
constexpr double kLocalFraction = 1e-8;

}  // namespace

double QuadratureOrbit::q(double v) const {
  return 2.0 * (params_.E - effective_potential(v, params_)) / params_.epsilon;
}

double QuadratureOrbit::integrand(const Branch& b, double s) const {
  const double s2 = s * s;
  if (s2 < kLocalFraction * (u_high_ - u_low_)) {
    return 2.0 / std::sqrt(b.slope + 0.5 * b.curvature * s2);
  }
  const double qv = q(b.turning + b.direction * s2);
  return 2.0 * s / std::sqrt(std::max(qv, std::numeric_limits<double>::min()));
}

void QuadratureOrbit::build_branch(Branch& b, double turning, double direction, double midpoint) {
  using boost::math::quadrature::gauss_kronrod;
  b.turning = turning;
  b.direction = direction;
  b.s_max = std::sqrt(std::abs(midpoint - turning));
  // Q(t + d s^2) = Q'(t) d s^2 + Q''(t) s^4 / 2 + ...
  const double dq = -2.0 * effective_force(turning, params_) / params_.epsilon;
  const double d2q = -2.0 * potential_curvature(turning, params_) / params_.epsilon;
  b.slope = dq * direction;
  b.curvature = d2q;
  const double scale = std::max(1.0, std::abs(params_.E)) / params_.epsilon;
  if (!(b.slope > 1e-10 * scale / std::max(1.0, u_high_ - u_low_))) {
    throw DomainError("turning point is degenerate (separatrix orbit of infinite period)");
  }
  b.nodes.resize(kBranchNodes + 1);
  b.cumulative.assign(kBranchNodes + 1, 0.0);
  auto g = [this, &b](double s) { return integrand(b, s); };
  for (int j = 0; j <= kBranchNodes; ++j) {
    b.nodes[j] = b.s_max * j / kBranchNodes;
  }
  for (int j = 1; j <= kBranchNodes; ++j) {
    b.cumulative[j] = b.cumulative[j - 1] +
                      gauss_kronrod<double, 15>::integrate(g, b.nodes[j - 1], b.nodes[j], 6, 1e-14);
  }
}

double QuadratureOrbit::branch_time(const Branch& b, double s) const {
  using boost::math::quadrature::gauss_kronrod;
  s = std::clamp(s, 0.0, b.s_max);
  const double h = b.s_max / kBranchNodes;
  const int j = std::min(kBranchNodes - 1, static_cast<int>(s / h));
  if (s == b.nodes[j]) {
    return b.cumulative[j];
  }
  auto g = [this, &b](double v) { return integrand(b, v); };
  return b.cumulative[j] + gauss_kronrod<double, 15>::integrate(g, b.nodes[j], s, 6, 1e-14);
}

double QuadratureOrbit::invert(const Branch& b, double time) const {
  const double total = b.cumulative.back();
  if (time <= 0.0) {
    return 0.0;
  }
  if (time >= total) {
    return b.s_max;
  }
  const auto it = std::upper_bound(b.cumulative.begin(), b.cumulative.end(), time);
  const int j = static_cast<int>(std::distance(b.cumulative.begin(), it)) - 1;
  const double frac = (time - b.cumulative[j]) / (b.cumulative[j + 1] - b.cumulative[j]);
  const double guess = b.nodes[j] + frac * (b.nodes[j + 1] - b.nodes[j]);
  auto f = [this, &b, time](double s) {
    return std::make_pair(branch_time(b, s) - time, integrand(b, s));
  };
  std::uintmax_t iterations = 60;
  return boost::math::tools::newton_raphson_iterate(f, guess, b.nodes[j], b.nodes[j + 1], 50,
                                                    iterations);
}

QuadratureOrbit::QuadratureOrbit(const WaveParams& params, double u0, Heading heading)
    : params_(params) {
  params_.validate();
  if (!std::isfinite(u0)) {
    throw DomainError("initial displacement must be finite");
  }
  const double vmin = potential_minimum(params_);
  if (params_.E < vmin) {
    throw DomainError("E lies below the minimum of V_eff: no real solution");
  }
  const double scale = 2.0 * std::max({1.0, std::abs(params_.E),
                                       std::abs(effective_potential(u0, params_))}) /
                       params_.epsilon;
  const double tol = 1e-12 * scale;
  const double q0 = q(u0);
  if (q0 < -tol) {
    throw DomainError("u0 lies outside the classically allowed region E >= V_eff(u0)");
  }
  const double dq0 = -2.0 * effective_force(u0, params_) / params_.epsilon;

  auto search = [&](double dir) {
    if (q0 <= tol && dq0 * dir < 0.0) {
      return u0;
    }
    double h = 1e-2 * std::max(1.0, std::abs(u0));
    double prev = u0;
    for (int i = 0; i < 400; ++i) {
      const double v = u0 + dir * h;
      if (std::abs(v) > 1e8) {
        break;
      }
      if (q(v) < 0.0) {
        if (prev == u0 && q0 <= 0.0) {
          return u0;
        }
        auto fn = [this](double w) { return q(w); };
        std::uintmax_t iters = 200;
        const auto r = boost::math::tools::toms748_solve(
            fn, std::min(prev, v), std::max(prev, v), boost::math::tools::eps_tolerance<double>(52),
            iters);
        return 0.5 * (r.first + r.second);
      }
      prev = v;
      h *= 1.5;
    }
    throw DomainError("orbit is unbounded: no turning point found");
  };
  u_high_ = search(+1.0);
  u_low_ = search(-1.0);
  if (!(u_high_ > u_low_)) {
    // Resting at a potential minimum: constant solution.
    u_low_ = u_high_ = u0;
    half_period_ = 0.0;
    return;
  }
  for (int i = 1; i < 256; ++i) {
    const double v = u_low_ + (u_high_ - u_low_) * i / 256.0;
    if (!(q(v) > 0.0)) {
      throw DomainError("allowed region is pinched: orbit sits on a separatrix");
    }
  }
  const double mid = 0.5 * (u_low_ + u_high_);
  build_branch(upper_, u_high_, -1.0, mid);
  build_branch(lower_, u_low_, +1.0, mid);
  half_period_ = upper_.cumulative.back() + lower_.cumulative.back();
  const double t0 = descent_time(u0);
  phase0_ = heading == Heading::Decreasing ? t0 : 2.0 * half_period_ - t0;
}

double QuadratureOrbit::descent_time(double u) const {
  if (half_period_ == 0.0) {
    return 0.0;
  }
  const double mid = 0.5 * (u_low_ + u_high_);
  if (u >= mid) {
    return branch_time(upper_, std::sqrt(std::max(0.0, u_high_ - u)));
  }
  return half_period_ - branch_time(lower_, std::sqrt(std::max(0.0, u - u_low_)));
}

double QuadratureOrbit::value(double x) const {
  if (half_period_ == 0.0) {
    return u_high_;
  }
  const double full = 2.0 * half_period_;
  double tau = std::fmod(phase0_ + x, full);
  if (tau < 0.0) {
    tau += full;
  }
  if (tau > half_period_) {
    tau = full - tau;
  }
  const double upper_total = upper_.cumulative.back();
  if (tau <= upper_total) {
    const double s = invert(upper_, tau);
    return u_high_ - s * s;
  }
  const double s = invert(lower_, half_period_ - tau);
  return u_low_ + s * s;
}

SampledProfile solve_quadrature(const WaveParams& params, double u0, double x_max,
                                const QuadratureOptions& options) {
  if (!(x_max > 0.0) || options.samples < 2) {
    throw DomainError("solve_quadrature: need x_max > 0 and at least two samples");
  }
  const QuadratureOrbit orbit(params, u0, options.heading);
  SampledProfile out;
  out.period = orbit.period();
  out.u_low = orbit.lower_turning_point();
  out.u_high = orbit.upper_turning_point();
  out.x.resize(options.samples);
  out.u.resize(options.samples);
  for (std::size_t i = 0; i < options.samples; ++i) {
    const double x = x_max * static_cast<double>(i) / static_cast<double>(options.samples - 1);
    out.x[i] = x;
    out.u[i] = orbit.value(x);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Radial asymptotics

RadialCheck radial_asymptotic_check(const WaveParams& params, int dimension, double r_min,
                                    double r_max, std::size_t samples) {
  if (dimension < 1) {
    throw DomainError("radial check: dimension must be >= 1");
  }
  if (!(r_min > 0.0 && r_max > r_min) || samples < 2) {
    throw DomainError("radial check: need 0 < r_min < r_max and >= 2 samples");
  }
  const SolutionProfile profile = exact_solution(params);
  const double d1 = dimension - 1.0;
  auto rhs = [&params, d1](const ode::State<2>& y, double r) {
    const double u = y[0];
    const double du = y[1];
    return ode::State<2>{du, -d1 / r * du - effective_force(u, params) / params.epsilon};
  };
  std::vector<double> radii(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    radii[i] = r_min + (r_max - r_min) * static_cast<double>(i) / static_cast<double>(samples - 1);
  }
  RadialCheck out;
  double last_r = r_min;
  auto observe = [&](const ode::State<2>& y, double r) {
    last_r = r;
    out.max_deviation = std::max(out.max_deviation, std::abs(y[0] - profile.value(r - r_min)));
  };
  const double limit = 1e6 * std::max(1.0, profile.amplitude());
  try {
    ode::integrate_at<2>(rhs, ode::State<2>{profile.value(0.0), profile.derivative(0.0)}, radii,
                         observe, ode::Tolerances{1e-11, 1e-13}, limit);
  } catch (const IntegrationError&) {
    out.unstable = true;
    out.blowup_radius = last_r;
    out.max_deviation = kInf;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Floquet analysis

double FloquetResult::spectral_radius() const {
  return std::max(std::abs(multipliers[0]), std::abs(multipliers[1]));
}

FloquetResult floquet_multipliers(double omega, double epsilon, double h, double gamma) {
  if (!finite_all({omega, epsilon, h, gamma}) || !(epsilon > 0.0) || !(gamma > 0.0)) {
    throw DomainError("floquet_multipliers: need finite inputs, epsilon > 0, gamma > 0");
  }
  auto rhs = [=](const ode::State<4>& y, double x) {
    const double stiffness = (h * std::cos(gamma * x) - omega) / epsilon;
    return ode::State<4>{y[1], stiffness * y[0], y[3], stiffness * y[2]};
  };
  const double period = 2.0 * std::numbers::pi / gamma;
  const ode::State<4> y =
      ode::integrate_to<4>(rhs, ode::State<4>{1.0, 0.0, 0.0, 1.0}, 0.0, period,
                           ode::Tolerances{1e-14, 1e-15});
  FloquetResult r;
  r.monodromy = {y[0], y[2], y[1], y[3]};
  r.trace = y[0] + y[3];
  r.determinant = y[0] * y[3] - y[2] * y[1];
  const double half = 0.5 * r.trace;
  const std::complex<double> root = std::sqrt(std::complex<double>(half * half - r.determinant));
  r.multipliers = {half + root, half - root};
  return r;
}

double parametric_band_halfwidth(double omega, double epsilon, double h) {
  if (!(omega > 0.0 && epsilon > 0.0)) {
    throw DomainError("parametric band requires omega > 0 and epsilon > 0");
  }
  return std::abs(h) / (2.0 * std::sqrt(omega * epsilon));
}

// ---------------------------------------------------------------------------
// Forced oscillator

ResonanceGrowth forced_resonance_growth(const WaveParams& params, double f0, double Omega,
                                        double x_max, const ForcingOptions& options) {
  params.validate();
  if (!finite_all({f0, Omega, x_max}) || !(x_max > 0.0) || options.samples_per_period < 8) {
    throw DomainError("forced_resonance_growth: invalid forcing or horizon");
  }
  auto rhs = [&params, f0, Omega](const ode::State<2>& y, double x) {
    return ode::State<2>{
        y[1], (f0 * std::cos(Omega * x) - effective_force(y[0], params)) / params.epsilon};
  };
  const double natural = params.omega > 0.0 ? std::sqrt(params.omega / params.epsilon) : 0.0;
  const double fastest = std::max({std::abs(Omega), natural, 1e-3});
  const auto n = static_cast<std::size_t>(
      std::ceil(x_max * fastest / (2.0 * std::numbers::pi) * options.samples_per_period)) + 1;
  std::vector<double> xs(std::max<std::size_t>(n, 2));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = x_max * static_cast<double>(i) / static_cast<double>(xs.size() - 1);
  }
  std::vector<double> amp;
  amp.reserve(xs.size());
  ode::integrate_at<2>(rhs, ode::State<2>{options.u0, options.du0}, xs,
                       [&amp](const ode::State<2>& y, double) { amp.push_back(std::abs(y[0])); },
                       ode::Tolerances{1e-11, 1e-13});

  ResonanceGrowth out;
  out.max_amplitude = *std::max_element(amp.begin(), amp.end());
  for (const Peak& p : local_maxima(xs, amp)) {
    out.peak_x.push_back(p.x);
    out.peak_u.push_back(p.y);
  }
  std::vector<double> fx, fy;
  for (std::size_t i = 0; i < out.peak_x.size(); ++i) {
    if (out.peak_x[i] >= options.fit_start_fraction * x_max && out.peak_u[i] > 0.0) {
      fx.push_back(out.peak_x[i]);
      fy.push_back(out.peak_u[i]);
    }
  }
  if (out.max_amplitude > 0.0 && fx.size() >= 2) {
    out.exponent = fit_power_law(fx, fy).exponent;
  }
  out.bounded = !out.exponent || *out.exponent < 0.5;
  return out;
}

}  // namespace nlse
