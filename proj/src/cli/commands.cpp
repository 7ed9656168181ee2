#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "nlse/error.hpp"
#include "nlse/evolution.hpp"
#include "nlse/lse_oracle.hpp"
#include "nlse/phi4_lattice.hpp"
#include "nlse/stitching.hpp"
#include "serialize.hpp"

namespace nlse::cli {
namespace {

using nlohmann::json;

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return v;
}

json profile_json(const SolutionProfile& s) {
  static const char* forms[] = {"zero", "cn", "dn", "cd"};
  json j{{"amplitude", s.amplitude()},
         {"wavenumber", s.wavenumber()},
         {"parameter", s.parameter()},
         {"complement", s.complement()},
         {"form", forms[static_cast<int>(s.form())]},
         {"sign", s.sign()}};
  const double period = s.period();
  j["period"] = std::isfinite(period) ? json(period) : json(nullptr);
  return j;
}

// ---------------------------------------------------------------------------

void run_solution(RunContext& ctx) {
  const Config& c = ctx.config;
  const WaveParams p = read_wave(c);
  const std::string method = c.text("method", "exact", {"exact", "quadrature"});
  const double sign = c.number("sign", 1.0);
  const double periods = c.number("periods", 3.0);
  const std::size_t samples = c.count("samples", 3001);
  const double x_min = c.number("x_min", 0.0);
  const std::optional<double> x_max_opt = c.optional_number("x_max");
  const std::optional<double> u0_opt = c.optional_number("u0");
  const std::string heading = c.text("heading", "decreasing", {"decreasing", "increasing"});
  c.check_unknown();
  if (sign != 1.0 && sign != -1.0) {
    throw SchemaError("sign must be +1 or -1");
  }
  if (samples < 2) {
    throw SchemaError("samples must be at least 2");
  }

  std::optional<SolutionProfile> exact;
  if (p.nonlinearity.is_cubic()) {
    exact = exact_solution(p).with_sign(static_cast<int>(sign));
    ctx.results["profile"] = profile_json(*exact);
  }
  double x_max = 0.0;
  if (x_max_opt) {
    x_max = *x_max_opt;
  } else {
    const double period = exact ? exact->period() : QuadratureOrbit(p, *u0_opt).period();
    if (!std::isfinite(period) || period == 0.0) {
      throw SchemaError("profile has no finite period; set x_max explicitly");
    }
    x_max = x_min + periods * period;
  }
  if (!(x_max > x_min)) {
    throw SchemaError("x_max must exceed x_min");
  }
  const auto xs = linspace(x_min, x_max, samples);

  if (method == "exact") {
    CsvWriter csv(ctx.out.file("solution.csv"), {"x", "u", "du_dx"});
    double e_min = INFINITY, e_max = -INFINITY;
    for (double x : xs) {
      const double u = exact->value(x);
      const double du = exact->derivative(x);
      csv.row({x, u, du});
      const double e = mechanical_energy(u, du, p);
      e_min = std::min(e_min, e);
      e_max = std::max(e_max, e);
    }
    csv.close();
    ctx.results["energy_spread"] = e_max - e_min;
  } else {
    const double u0 = u0_opt ? *u0_opt : exact->value(x_min);
    const QuadratureOrbit orbit(p, u0, heading == "decreasing" ? Heading::Decreasing : Heading::Increasing);
    CsvWriter csv(ctx.out.file("solution.csv"), {"x", "u"});
    double dev = 0.0;
    for (double x : xs) {
      const double u = orbit.value(x - x_min);
      csv.row({x, u});
      if (exact) {
        dev = std::max(dev, std::abs(u - exact->value(x)));
      }
    }
    csv.close();
    ctx.results["quadrature"] = json{{"period", orbit.period()},
                                     {"u_low", orbit.lower_turning_point()},
                                     {"u_high", orbit.upper_turning_point()}};
    if (exact) {
      ctx.results["max_deviation_from_closed_form"] = dev;
    }
  }
}

// ---------------------------------------------------------------------------

struct StitchSpec {
  std::vector<SolutionProfile> profiles;
  std::vector<double> targets;
  double blend_width = 0.0;
};

StitchSpec read_stitch(const Config& c) {
  StitchSpec spec;
  for (const Config& seg : c.objects("segments")) {
    const WaveParams w = read_wave(seg);
    spec.profiles.push_back(exact_solution(w).with_sign(static_cast<int>(seg.number("sign", 1.0))));
  }
  spec.targets = c.numbers("targets");
  spec.blend_width = c.number("blend_width", 0.0);
  return spec;
}

PiecewiseSolution build(const StitchSpec& spec) {
  return build_stitched(spec.profiles, spec.targets, StitchOptions{spec.blend_width, 1e-9});
}

json mismatch_json(const PiecewiseSolution& s) {
  json m = json::array();
  const auto points = s.stitch_points();
  for (std::size_t i = 0; i < points.size(); ++i) {
    m.push_back(json{{"x", points[i]}, {"du", s.mismatch()[i].du}, {"ddu", s.mismatch()[i].ddu}});
  }
  return m;
}

void run_stitch(RunContext& ctx) {
  const Config& c = ctx.config;
  const StitchSpec spec = read_stitch(c);
  const double shift = c.number("shift_x0", 0.0);
  const std::size_t samples = c.count("samples", 4001);
  const std::optional<double> x_min_opt = c.optional_number("x_min");
  const std::optional<double> x_max_opt = c.optional_number("x_max");
  c.check_unknown();
  if (samples < 2) {
    throw SchemaError("samples must be at least 2");
  }
  const PiecewiseSolution s = build(spec);
  const auto points = s.stitch_points();
  const double hL = s.segments().front().profile.node_spacing();
  const double hR = s.segments().back().profile.node_spacing();
  const double x_min = x_min_opt.value_or(points.front() - hL);
  const double x_max = x_max_opt.value_or(points.back() + hR);
  if (!(x_max > x_min)) {
    throw SchemaError("x_max must exceed x_min");
  }
  CsvWriter csv(ctx.out.file("stitched.csv"), {"x", "x_shifted", "u", "abs_psi"});
  for (double x : linspace(x_min, x_max, samples)) {
    const double u = s.value(x);
    csv.row({x, x - shift, u, std::abs(u)});
  }
  csv.close();
  ctx.out.write_json("segments.json", to_json(s));
  ctx.results["stitch"] = mismatch_json(s);
  ctx.results["amplitudes"] = json::array();
  for (const auto& seg : s.segments()) {
    ctx.results["amplitudes"].push_back(seg.profile.amplitude());
  }
}

// ---------------------------------------------------------------------------

void write_field(const std::filesystem::path& path, const ComplexField1D& f) {
  CsvWriter csv(path, {"x", "re_psi", "im_psi", "rho"});
  for (std::size_t i = 0; i < f.size(); ++i) {
    csv.row({f.grid.x(i), f.values[i].real(), f.values[i].imag(), std::norm(f.values[i])});
  }
  csv.close();
}

Grid read_grid(const Config& g) {
  const std::size_t n = g.count("n");
  const double x0 = g.number("x0");
  const double length = g.number("length");
  return Grid::periodic(n, x0, length);
}

void run_evolve(RunContext& ctx) {
  const Config& c = ctx.config;
  const Config eq = c.object("equation");
  PropagationSettings settings;
  settings.params.lambda = eq.number("lambda", 1.0);
  settings.params.epsilon = eq.number("epsilon", 1.0);
  settings.params.c = eq.number("c", 0.0);
  settings.potential = eq.number("potential", 0.0);
  const std::string frame = c.text("frame", "comoving", {"comoving", "lab"});
  settings.frame = frame == "lab" ? Frame::Lab : Frame::CoMoving;

  const Config init = c.object("initial");
  const std::string type = init.text("type", "", {"stitched", "lse", "exact"});
  const Config grid_cfg = c.object("grid");

  ComplexField1D field;
  std::optional<std::pair<double, double>> default_window;
  if (type == "stitched") {
    std::optional<PiecewiseSolution> s;
    if (init.has("segments_file")) {
      const std::string file = init.text("segments_file", "", {});
      std::ifstream in(file);
      if (!in) {
        throw IoError("cannot read segments file " + file);
      }
      json doc;
      try {
        doc = json::parse(in);
      } catch (const json::parse_error& e) {
        throw SchemaError(file + ": " + e.what());
      }
      s = piecewise_from_json(doc);
    } else {
      s = build(read_stitch(init));
    }
    const std::size_t n = grid_cfg.count("n");
    const double min_length = grid_cfg.number("min_length");
    grid_cfg.check_unknown();
    const PeriodicBox box = periodic_box(*s, min_length);
    field = sample_on_box(*s, box, n);
    const auto pts = s->stitch_points();
    default_window = {pts.front(), pts.back()};
    ctx.results["box"] = json{{"x0", box.x0},
                              {"length", box.length},
                              {"requested_length", box.requested_length},
                              {"left_half_periods", box.left_half_periods},
                              {"right_half_periods", box.right_half_periods},
                              {"seam_du", box.seam.du},
                              {"seam_ddu", box.seam.ddu}};
    ctx.results["stitch"] = mismatch_json(*s);
    if (box.length != min_length) {
      std::ostringstream msg;
      msg << "box length adjusted from " << min_length << " to " << box.length
          << " so the outer segments close periodically";
      ctx.warnings.push_back(msg.str());
    }
    for (const Segment& seg : s->segments()) {
      if (seg.profile.params().lambda != settings.params.lambda ||
          seg.profile.params().epsilon != settings.params.epsilon) {
        ctx.warnings.push_back("segment (lambda, epsilon) differ from the evolution equation");
        break;
      }
    }
  } else if (type == "lse") {
    const double alpha = init.number("alpha");
    field = lse_rogue_initial(alpha, read_grid(grid_cfg), &ctx.warnings);
  } else {
    WaveParams w = read_wave(init);
    w.lambda = settings.params.lambda;
    w.epsilon = settings.params.epsilon;
    w.c = settings.params.c;
    const SolutionProfile prof = exact_solution(w);
    field = ComplexField1D::sample(read_grid(grid_cfg), [&prof](double x) { return prof.psi(x, 0.0); });
    ctx.results["profile"] = profile_json(prof);
  }

  ExperimentSettings es;
  es.propagation = settings;
  es.t_max = c.number("t_max");
  es.dt = c.optional_number("dt");
  es.sample_every = c.count("sample_every", 100);
  es.snapshot_every = c.count("snapshot_every", 0);
  if (c.has("window")) {
    const Config w = c.object("window");
    es.x1 = w.number("x1");
    es.x2 = w.number("x2");
  } else if (default_window) {
    es.x1 = default_window->first;
    es.x2 = default_window->second;
  } else {
    throw SchemaError("window {x1, x2} is required unless the initial state is stitched");
  }
  std::optional<std::pair<double, double>> far;
  if (c.has("far_window")) {
    const Config fw = c.object("far_window");
    far = {fw.number("X"), fw.number("a")};
  }
  c.check_unknown();

  const ExperimentResult r = evolve_experiment(field, es);
  ctx.grid = json{{"n", field.grid.n}, {"x0", field.grid.x0}, {"dx", field.grid.dx},
                  {"length", field.grid.length()}};
  ctx.warnings.insert(ctx.warnings.end(), r.warnings.begin(), r.warnings.end());

  const DiagnosticsSeries& S = r.series;
  CsvWriter csv(ctx.out.file("series.csv"), {"t", "P", "j1", "j2", "peak", "norm", "energy"});
  for (std::size_t k = 0; k < S.size(); ++k) {
    csv.row({S.times[k], S.P[k], S.j1[k], S.j2[k], S.peak[k], S.norm[k], S.energy[k]});
  }
  csv.close();
  json snaps = json::array();
  for (std::size_t k = 0; k < r.snapshots.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%04zu.csv", k);
    write_field(ctx.out.file(name), r.snapshots[k]);
    snaps.push_back(json{{"file", name}, {"t", r.snapshots[k].time}});
  }
  ctx.results["snapshots"] = snaps;
  ctx.results["dt"] = r.dt;
  ctx.results["steps"] = r.steps;
  ctx.results["window"] = json{{"x1", es.x1}, {"x2", es.x2}};
  ctx.results["relative_norm_drift"] =
      S.norm.front() > 0.0 ? std::abs(S.norm.back() - S.norm.front()) / S.norm.front() : 0.0;

  double residual = 0.0, max_j = 0.0;
  for (std::size_t k = 0; k < S.size(); ++k) {
    max_j = std::max({max_j, std::abs(S.j1[k]), std::abs(S.j2[k])});
  }
  for (std::size_t k = 1; k + 1 < S.size(); ++k) {
    const double dP = (S.P[k + 1] - S.P[k - 1]) / (S.times[k + 1] - S.times[k - 1]);
    residual = std::max(residual, std::abs(dP - (S.j1[k] - S.j2[k])));
  }
  ctx.results["continuity"] = json{{"max_residual", residual}, {"max_current", max_j}};

  if (far) {
    const FieldAnalyzer analyzer(field.grid, settings);
    const double P_o = analyzer.integrated_density(field, far->first - far->second, far->first + far->second);
    auto marker = [](const std::optional<double>& v) { return v ? json(*v) : json("not-reached"); };
    const LifetimeResult direct = lifetime(S, P_o);
    const LifetimeResult flux = lifetime_from_currents(S, P_o);
    ctx.results["lifetime"] = json{{"P_o", P_o},
                                   {"P0", direct.P0},
                                   {"final_P", direct.final_P},
                                   {"tau", marker(direct.tau)},
                                   {"tau_half", marker(direct.tau_half)},
                                   {"tau_from_currents", marker(flux.tau)},
                                   {"tau_half_from_currents", marker(flux.tau_half)}};
  }
}

// ---------------------------------------------------------------------------

void run_lse(RunContext& ctx) {
  const Config& c = ctx.config;
  const double alpha = c.number("alpha", 1.0);
  const double t_min = c.number("t_min", 0.0);
  const double t_max = c.number("t_max", 1000.0);
  const std::size_t samples = c.count("samples", 100001);
  std::optional<std::pair<double, double>> fit;
  if (c.has("fit")) {
    const Config f = c.object("fit");
    fit = {f.number("t0"), f.number("t1")};
  }
  c.check_unknown();
  const lse::PeakSeries s = lse::peak_series(alpha, t_min, t_max, samples);
  CsvWriter csv(ctx.out.file("peak.csv"), {"t", "peak"});
  for (std::size_t i = 0; i < s.t.size(); ++i) {
    csv.row({s.t[i], s.peak[i]});
  }
  csv.close();
  ctx.results["peak_at_t0"] = lse::peak_density(t_min, alpha);
  if (fit) {
    const lse::EnvelopeFit e = lse::envelope_exponent(alpha, fit->first, fit->second);
    ctx.results["envelope"] = json{{"exponent", e.exponent}, {"prefactor", e.prefactor}, {"maxima", e.maxima}};
  }
}

// ---------------------------------------------------------------------------

void write_lattice(const std::filesystem::path& path, const phi4::LatticeState& s) {
  CsvWriter csv(path, {"i", "j", "re_phi", "im_phi", "abs_phi_sq"});
  for (std::size_t j = 0; j < s.ny; ++j) {
    for (std::size_t i = 0; i < s.nx; ++i) {
      const auto v = s.at(i, j);
      csv.row({static_cast<double>(i), static_cast<double>(j), v.real(), v.imag(), std::norm(v)});
    }
  }
  csv.close();
}

void run_phi4(RunContext& ctx) {
  const Config& c = ctx.config;
  phi4::LatticeParams p;
  p.nx = c.count("nx", 64);
  p.ny = c.count("ny", 64);
  p.Delta = c.number("Delta", 1.0);
  p.mass = c.number("mass", 2.0);
  p.lambda = c.number("lambda", 0.0);
  p.stencil = c.text("stencil", "printed", {"printed", "standard"}) == "printed" ? phi4::Stencil::Printed
                                                                               : phi4::Stencil::Standard;
  p.onsite_override = c.optional_number("onsite_coeff");
  p.coupling_override = c.optional_number("coupling_coeff");
  p.validate();
  const double alpha = c.number("alpha", 1.0);
  const auto k = c.numbers("k_bg", {2.0 * std::numbers::pi / (16.0 * p.Delta), 0.0});
  if (k.size() != 2) {
    throw SchemaError("k_bg must have two components");
  }
  const double dt = c.number("dt", 0.02);
  const std::size_t steps = c.count("steps", 60000);
  const std::size_t sample_every = c.count("sample_every", 100);
  const std::string scheme = c.text("integrator", "yoshida6", {"verlet", "yoshida4", "yoshida6"});
  const double late_fraction = c.number("late_fraction", 0.1);
  const std::string modes = c.text("modes", "auto", {"auto", "on", "off"});
  c.check_unknown();

  const phi4::Integrator integrator = scheme == "verlet"     ? phi4::Integrator::Verlet
                                      : scheme == "yoshida4" ? phi4::Integrator::Yoshida4
                                                             : phi4::Integrator::Yoshida6;
  const double w_max = phi4::max_linear_frequency(p);
  if (dt >= 2.0 / w_max) {
    std::ostringstream msg;
    msg << "dt = " << dt << " is not below the Verlet stability bound 2/omega_max = " << 2.0 / w_max;
    ctx.warnings.push_back(msg.str());
  }
  const phi4::LatticeState s0 = phi4::rogue_initial(p, alpha, {k[0], k[1]}, &ctx.warnings);
  phi4::LatticeState final_state;
  const phi4::RelaxationSeries series =
      phi4::relax_to_steady(s0, p, steps, dt, sample_every, integrator, &final_state);

  ctx.grid = json{{"nx", p.nx},
                  {"ny", p.ny},
                  {"Delta", p.Delta},
                  {"onsite_coeff", p.onsite_coeff()},
                  {"coupling_coeff", p.coupling_coeff()},
                  {"omega_max", w_max}};
  CsvWriter csv(ctx.out.file("series.csv"), {"t", "energy", "max_abs_phi_sq", "variance"});
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    csv.row({series.times[i], series.energy[i], series.max_density[i], series.variance[i]});
  }
  csv.close();
  write_lattice(ctx.out.file("snapshot_initial.csv"), s0);
  write_lattice(ctx.out.file("snapshot_final.csv"), final_state);
  const phi4::RelaxationSummary sum = phi4::summarize(series, late_fraction);
  ctx.results["relaxation"] = json{{"initial_peak", sum.initial_peak},
                                   {"initial_variance", sum.initial_variance},
                                   {"late_peak", sum.late_peak},
                                   {"late_variance", sum.late_variance},
                                   {"final_peak", sum.final_peak},
                                   {"final_variance", sum.final_variance},
                                   {"max_energy_drift", sum.max_energy_drift}};
  if (modes == "on" || (modes == "auto" && p.sites() <= 1024)) {
    const phi4::NormalModes nm = phi4::normal_modes(p);
    CsvWriter mcsv(ctx.out.file("modes.csv"), {"index", "omega2", "dispersion_omega2"});
    for (std::size_t i = 0; i < nm.sites; ++i) {
      mcsv.row({static_cast<double>(i), nm.omega2[i], nm.dispersion_omega2[i]});
    }
    mcsv.close();
    ctx.results["modes"] = json{{"unstable", nm.unstable}, {"max_dispersion_mismatch", nm.max_dispersion_mismatch}};
  }
}

// ---------------------------------------------------------------------------

void run_resonance(RunContext& ctx) {
  const Config& c = ctx.config;
  std::optional<Config> fl, fo;
  if (c.has("floquet")) {
    fl = c.object("floquet");
  }
  if (c.has("forced")) {
    fo = c.object("forced");
  }
  if (!fl && !fo) {
    throw SchemaError("resonance needs a 'floquet' and/or 'forced' block");
  }
  struct FloquetCfg {
    double omega, epsilon, h, g0, g1;
    std::size_t points;
  } f{};
  if (fl) {
    f = {fl->number("omega"), fl->number("epsilon", 1.0), fl->number("h"),
         fl->number("gamma_min"), fl->number("gamma_max"), fl->count("points", 41)};
  }
  WaveParams w;
  double f0 = 0.0, Omega = 0.0, x_max = 0.0;
  ForcingOptions options;
  if (fo) {
    w.omega = fo->number("omega");
    w.epsilon = fo->number("epsilon", 1.0);
    w.lambda = fo->number("lambda", 0.0);
    f0 = fo->number("f0");
    Omega = fo->number("Omega");
    x_max = fo->number("x_max", 200.0);
    options.u0 = fo->number("u0", 0.0);
    options.du0 = fo->number("du0", 0.0);
    options.samples_per_period = fo->count("samples_per_period", 64);
    options.fit_start_fraction = fo->number("fit_start_fraction", 0.1);
  }
  c.check_unknown();

  if (fl) {
    CsvWriter csv(ctx.out.file("floquet.csv"),
                  {"gamma", "mu1_re", "mu1_im", "mu2_re", "mu2_im", "spectral_radius", "trace", "determinant"});
    for (double g : linspace(f.g0, f.g1, std::max<std::size_t>(f.points, 1))) {
      const FloquetResult r = floquet_multipliers(f.omega, f.epsilon, f.h, g);
      csv.row({g, r.multipliers[0].real(), r.multipliers[0].imag(), r.multipliers[1].real(),
               r.multipliers[1].imag(), r.spectral_radius(), r.trace, r.determinant});
    }
    csv.close();
    ctx.results["floquet"] = json{{"band_center", 2.0 * std::sqrt(f.omega / f.epsilon)},
                                  {"band_halfwidth", parametric_band_halfwidth(f.omega, f.epsilon, f.h)}};
  }
  if (fo) {
    const ResonanceGrowth g = forced_resonance_growth(w, f0, Omega, x_max, options);
    CsvWriter csv(ctx.out.file("forced_peaks.csv"), {"x", "abs_u"});
    for (std::size_t i = 0; i < g.peak_x.size(); ++i) {
      csv.row({g.peak_x[i], g.peak_u[i]});
    }
    csv.close();
    ctx.results["forced"] = json{{"bounded", g.bounded},
                                 {"exponent", g.exponent ? json(*g.exponent) : json(nullptr)},
                                 {"max_amplitude", g.max_amplitude}};
  }
}

// ---------------------------------------------------------------------------

void run_radial(RunContext& ctx) {
  const Config& c = ctx.config;
  const WaveParams p = read_wave(c);
  const auto dims = c.numbers("dimensions", {2.0, 3.0});
  const auto r_mins = c.numbers("r_min", {50.0, 200.0});
  const std::optional<double> span = c.optional_number("r_span");
  const std::size_t samples = c.count("samples", 2001);
  c.check_unknown();
  const SolutionProfile prof = exact_solution(p);
  const double width = span.value_or(0.5 * prof.period());
  if (!(width > 0.0) || !std::isfinite(width)) {
    throw SchemaError("r_span must be positive (the default half period needs a periodic profile)");
  }
  CsvWriter csv(ctx.out.file("radial.csv"), {"dimension", "r_min", "r_max", "max_deviation", "unstable", "blowup_radius"});
  json rows = json::array();
  for (double d : dims) {
    if (d != std::floor(d) || d < 1.0) {
      throw SchemaError("dimensions must be positive integers");
    }
    for (double r0 : r_mins) {
      const RadialCheck r = radial_asymptotic_check(p, static_cast<int>(d), r0, r0 + width, samples);
      csv.row({d, r0, r0 + width, r.max_deviation, r.unstable ? 1.0 : 0.0, r.blowup_radius});
      rows.push_back(json{{"dimension", d}, {"r_min", r0}, {"max_deviation", r.max_deviation}, {"unstable", r.unstable}});
    }
  }
  csv.close();
  ctx.results["radial"] = rows;
}

const std::map<std::string, Command>& registry() {
  static const std::map<std::string, Command> r{
      {"solution", run_solution}, {"stitch", run_stitch},       {"evolve", run_evolve},
      {"lse", run_lse},           {"phi4", run_phi4},           {"resonance", run_resonance},
      {"radial", run_radial}};
  return r;
}

}  // namespace

Command find_command(const std::string& name) {
  const auto it = registry().find(name);
  return it == registry().end() ? nullptr : it->second;
}

std::vector<std::string> command_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : registry()) {
    names.push_back(k);
  }
  return names;
}

}  // namespace nlse::cli
