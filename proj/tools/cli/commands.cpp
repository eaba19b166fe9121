#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

namespace omsense::cli {

using nlohmann::json;

namespace {

constexpr double pi = constants::pi;

std::pair<std::string, std::string> split_pair(const std::string& s, char sep, const std::string& flag) {
  const auto k = s.find(sep);
  if (k == std::string::npos) throw ConfigError(flag + ": expected two values separated by '" + sep + "'");
  return {s.substr(0, k), s.substr(k + 1)};
}

std::string with_default_unit(const std::string& s, const char* unit) {
  const auto last = s.find_last_not_of(" \t");
  if (last != std::string::npos && (std::isdigit(static_cast<unsigned char>(s[last])) || s[last] == '.'))
    return s + " " + unit;
  return s;
}

void set_axis(RunConfig& cfg, AxisName name, double lo, double hi, std::optional<std::size_t> points) {
  for (auto& s : cfg.sweep) {
    if (s.name == name) {
      s.axis.first = lo;
      s.axis.last = hi;
      if (points) s.axis.points = *points;
      return;
    }
  }
  cfg.sweep.push_back({name, {lo, hi, points.value_or(401)}});
}

std::size_t parse_count(const std::string& s) {
  std::size_t n = 0;
  try {
    n = std::stoul(s);
  } catch (const std::exception&) {
    throw ConfigError("--grid: cannot read '" + s + "'");
  }
  if (n < 2) throw ConfigError("--grid: need at least 2 points per axis");
  return n;
}

PhysicalParams set_value(PhysicalParams p, AxisName a, double v) {
  switch (a) {
    case AxisName::phi: p.phi = v; break;
    case AxisName::delta: p.delta = v; break;
    case AxisName::power: p.P_in = v; break;
    case AxisName::kappa: p.kappa1 = p.kappa2 = v; break;
    case AxisName::g: p.g = v; break;
  }
  return p;
}

/// Dimensionless companion of an axis value: φ/π, δ/Γ, κ/Γ, g/Γ, Iχ/Γ³.
double dimless(const PhysicalParams& p, AxisName a, double v) {
  switch (a) {
    case AxisName::phi: return v / pi;
    case AxisName::delta: return v / p.Gamma;
    case AxisName::kappa: return v / p.Gamma;
    case AxisName::g: return v / p.Gamma;
    case AxisName::power: return reduce(set_value(p, a, v)).drive_t;
  }
  return v;
}

std::vector<Column> axis_columns(AxisName a) {
  switch (a) {
    case AxisName::phi: return {{"phi_over_pi", "1"}, {"phi", "rad"}};
    case AxisName::delta: return {{"delta_over_Gamma", "1"}, {"delta", "rad/s"}};
    case AxisName::kappa: return {{"kappa_over_Gamma", "1"}, {"kappa", "rad/s"}};
    case AxisName::g: return {{"g_over_Gamma", "1"}, {"g", "rad/s"}};
    case AxisName::power: return {{"drive_t", "1"}, {"P_in", "W"}};
  }
  return {};
}

std::string axis_unit(AxisName a) {
  switch (a) {
    case AxisName::phi: return "rad";
    case AxisName::power: return "W";
    default: return "rad/s";
  }
}

json params_json(const PhysicalParams& p, bool gamma_m_default) {
  json j;
  j["Gamma"] = {{"value", p.Gamma}, {"unit", "rad/s"}};
  j["kappa1"] = {{"value", p.kappa1}, {"unit", "rad/s"}};
  j["kappa2"] = {{"value", p.kappa2}, {"unit", "rad/s"}};
  j["delta"] = {{"value", p.delta}, {"unit", "rad/s"}};
  j["phi"] = {{"value", p.phi}, {"unit", "rad"}};
  j["omega_m"] = {{"value", p.omega_m}, {"unit", "rad/s"}};
  j["gamma_m"] = {{"value", p.gamma_m}, {"unit", "rad/s"}, {"adiabatic_default", gamma_m_default}};
  j["g"] = {{"value", p.g}, {"unit", "rad/s"}};
  j["P_in"] = {{"value", p.P_in}, {"unit", "W"}};
  j["lambda_d"] = {{"value", p.lambda_d}, {"unit", "m"}};
  j["derived"] = {{"chi", p.chi()}, {"drive_intensity", p.drive()}, {"omega_d", p.omega_d()}};
  if (p.kappa1 == p.kappa2) {
    const auto r = reduce(p);
    j["reduced"] = {{"d", r.d}, {"k", r.k}, {"phi", r.phi}, {"chi_t", r.chi_t}, {"drive_t", r.drive_t}};
  }
  return j;
}

json base_meta(const std::string& cmd, const RunConfig& cfg) {
  json m;
  m["command"] = cmd;
  m["version"] = version;
  m["config"] = cfg.source;
  if (cfg.params) m["params"] = params_json(*cfg.params, cfg.gamma_m_default);
  m["couplings"] = {{"g1", cfg.couplings.g1}, {"g2", cfg.couplings.g2}, {"unit", "rad/s"}};
  json sweep = json::array();
  for (const auto& s : cfg.sweep)
    sweep.push_back({{"axis", to_string(s.name)},
                     {"from", s.axis.first},
                     {"to", s.axis.last},
                     {"points", s.axis.points},
                     {"unit", axis_unit(s.name)}});
  m["sweep"] = sweep;
  m["output"] = {{"format", cfg.output.format == Format::csv ? "csv" : "json"}, {"precision", cfg.output.precision}};
  m["analysis"] = {{"drop", cfg.drop}};
  return m;
}

/// First configured axis among `allowed`, else the fallback.
SweepAxis primary_axis(const RunConfig& cfg, std::initializer_list<AxisName> allowed, std::optional<SweepAxis> fallback) {
  for (const auto& s : cfg.sweep)
    if (std::find(allowed.begin(), allowed.end(), s.name) != allowed.end()) return s;
  if (fallback) return *fallback;
  throw ConfigError("this subcommand needs a sweep axis");
}

SweepAxis axis_or(const RunConfig& cfg, AxisName name, Axis fallback) {
  if (const auto* s = cfg.find(name)) return *s;
  return {name, fallback};
}

double nan() { return std::nan(""); }

Result cmd_eigen(const RunConfig& cfg) {
  const auto& p = cfg.physical();
  const double G = p.Gamma;
  const auto ax = axis_or(cfg, AxisName::delta, {-2.0 * G, 2.0 * G, 801});
  Result r{"eigen", {}, base_meta("eigen", cfg)};
  r.table.title = "eigen: eigenvalues of the effective two-mode matrix";
  r.table.columns = axis_columns(AxisName::delta);
  for (const char* c : {"re_lambda_plus_over_Gamma", "im_lambda_plus_over_Gamma", "re_lambda_minus_over_Gamma",
                        "im_lambda_minus_over_Gamma", "re_lambda_plus_numeric_over_Gamma",
                        "im_lambda_plus_numeric_over_Gamma", "re_lambda_minus_numeric_over_Gamma",
                        "im_lambda_minus_numeric_over_Gamma", "lambda0", "theta"})
    r.table.columns.push_back({c, std::string(c).find("theta") != std::string::npos ? "rad" : "1"});
  OpticalParams o = optical(p);
  for (std::size_t i = 0; i < ax.axis.points; ++i) {
    o.delta = ax.axis.value(i);
    const auto cf = eigenvalues_closed_form(o);
    const auto nm = eigenvalues_numeric(effective_matrix(o));
    r.table.add({o.delta / G, o.delta, cf.lambda_plus.real() / G, cf.lambda_plus.imag() / G,
                 cf.lambda_minus.real() / G, cf.lambda_minus.imag() / G, nm.lambda_plus.real() / G,
                 nm.lambda_plus.imag() / G, nm.lambda_minus.real() / G, nm.lambda_minus.imag() / G, cf.lambda0,
                 cf.theta});
  }
  json eps = json::array();
  for (double d : ep_locate(optical(p), {ax.axis.first, ax.axis.last, std::max<std::size_t>(ax.axis.points, 2001)}))
    eps.push_back(d / G);
  OpticalParams at0 = optical(p);
  at0.delta = 0.0;
  const auto s0 = eigenvalues_closed_form(at0);
  r.meta["summary"] = {{"exceptional_points_over_Gamma", eps},
                       {"im_lambda_plus_over_Gamma_at_zero_detuning", s0.lambda_plus.imag() / G},
                       {"linewidth_approximation_over_Gamma", linewidth_suppression_approx(p.kappa(), G, p.phi) / G}};
  return r;
}

std::vector<std::pair<double, PhysicalParams>> points_along(const RunConfig& cfg, const std::optional<SweepAxis>& ax) {
  std::vector<std::pair<double, PhysicalParams>> out;
  const auto& p = cfg.physical();
  if (!ax) {
    out.push_back({nan(), p});
    return out;
  }
  for (std::size_t i = 0; i < ax->axis.points; ++i) {
    const double v = ax->axis.value(i);
    out.push_back({v, set_value(p, ax->name, v)});
  }
  return out;
}

std::optional<SweepAxis> optional_axis(const RunConfig& cfg) {
  if (cfg.sweep.empty()) return std::nullopt;
  return cfg.sweep.front();
}

std::vector<Column> point_columns(const std::optional<SweepAxis>& ax) {
  if (!ax) return {};
  return axis_columns(ax->name);
}

void push_axis(std::vector<Cell>& row, const std::optional<SweepAxis>& ax, const PhysicalParams& p, double v) {
  if (!ax) return;
  row.push_back(dimless(p, ax->name, v));
  row.push_back(v);
}

Result cmd_coeffs(const RunConfig& cfg) {
  const auto ax = optional_axis(cfg);
  Result r{"coeffs", {}, base_meta("coeffs", cfg)};
  r.table.title = "coeffs: cubic coefficients, fold points and drive window";
  r.table.columns = point_columns(ax);
  const std::vector<Column> cols{{"A", "rad/s"},          {"B", "(rad/s)^2"},     {"A_over_Gamma", "1"},
                                 {"B_over_Gamma2", "1"},  {"chi", "rad/s"},       {"I", "s^-2"},
                                 {"necessary", "1"},      {"beta_minus", "1"},    {"beta_plus", "1"},
                                 {"I_low", "s^-2"},       {"I_high", "s^-2"},     {"n_roots", "1"}};
  r.table.columns.insert(r.table.columns.end(), cols.begin(), cols.end());
  for (const auto& [v, p] : points_along(cfg, ax)) {
    const auto c = coefficients(p);
    std::vector<Cell> row;
    push_axis(row, ax, cfg.physical(), v);
    const double G = p.Gamma;
    row.insert(row.end(), {c.A, c.B, c.A / G, c.B / (G * G), c.chi, c.I});
    row.push_back(static_cast<long>(bistable_necessary(c)));
    std::optional<TurningPoints> tp;
    if (c.chi > 0.0) tp = turning_points(c);
    row.insert(row.end(), {tp ? tp->beta_minus : nan(), tp ? tp->beta_plus : nan(), tp ? tp->I_low : nan(),
                           tp ? tp->I_high : nan()});
    long n = 0;
    try {
      n = static_cast<long>(solve_intensity(c).size());
    } catch (const NoSolution&) {
    }
    row.push_back(n);
    r.table.add(std::move(row));
  }
  return r;
}

Result cmd_steady(const RunConfig& cfg) {
  const auto ax = optional_axis(cfg);
  Result r{"steady", {}, base_meta("steady", cfg)};
  r.table.title = "steady: steady states with cubic and Jacobian stability";
  r.table.columns = point_columns(ax);
  const std::vector<Column> cols{
      {"root", "1"},          {"beta", "1"},          {"branch", "-"},     {"stable_cubic", "1"},
      {"slope_over_Gamma2", "1"}, {"re_alpha1", "1"}, {"im_alpha1", "1"},  {"re_alpha2", "1"},
      {"im_alpha2", "1"},     {"q", "1"},             {"p", "1"},          {"jacobian_max_re_over_Gamma", "1"},
      {"stable_jacobian", "1"}, {"status", "-"}};
  r.table.columns.insert(r.table.columns.end(), cols.begin(), cols.end());
  for (const auto& [v, p] : points_along(cfg, ax)) {
    std::vector<SteadyState> states;
    std::vector<IntensityRoot> roots;
    std::string status = "ok";
    try {
      roots = solve_intensity(coefficients(p));
      for (const auto& rt : roots) states.push_back(reconstruct(p, rt));
    } catch (const std::exception& e) {
      status = "no-solution";
    }
    if (states.empty()) {
      std::vector<Cell> row;
      push_axis(row, ax, cfg.physical(), v);
      row.push_back(-1L);
      row.push_back(nan());
      row.push_back(std::string("-"));
      row.push_back(-1L);
      for (int k = 0; k < 7; ++k) row.push_back(nan());
      row.push_back(nan());
      row.push_back(-1L);
      row.push_back(status);
      r.table.add(std::move(row));
      continue;
    }
    for (std::size_t k = 0; k < states.size(); ++k) {
      const auto& s = states[k];
      std::vector<Cell> row;
      push_axis(row, ax, cfg.physical(), v);
      std::string st = "ok";
      double maxre = nan();
      long jstable = -1;
      try {
        const auto rep = linear_stability(to_state(s), p);
        maxre = rep.max_real / p.Gamma;
        jstable = rep.stable;
      } catch (const std::exception&) {
        st = "not-fixed-point";
      }
      row.insert(row.end(), {Cell(static_cast<long>(k)), Cell(s.beta), Cell(std::string(to_string(s.branch))),
                             Cell(static_cast<long>(s.stable)), Cell(roots[k].slope / (p.Gamma * p.Gamma)),
                             Cell(s.alpha1.real()), Cell(s.alpha1.imag()), Cell(s.alpha2.real()),
                             Cell(s.alpha2.imag()), Cell(s.q), Cell(s.p), Cell(maxre), Cell(jstable), Cell(st)});
      r.table.add(std::move(row));
    }
  }
  return r;
}

std::pair<SweepAxis, SweepAxis> plane_axes(const RunConfig& cfg) {
  const double G = cfg.physical().Gamma;
  return {axis_or(cfg, AxisName::phi, {-0.03 * pi, 0.01 * pi, 400}),
          axis_or(cfg, AxisName::delta, {-0.3 * G, 0.3 * G, 400})};
}

Result cmd_region_map(const RunConfig& cfg, std::size_t threads) {
  const auto& p = cfg.physical();
  const auto [fa, da] = plane_axes(cfg);
  Result r{"region-map", {}, base_meta("region-map", cfg)};
  r.table.title = "region-map: bistability class over (phi, delta)";
  r.table.columns = axis_columns(AxisName::phi);
  for (auto c : axis_columns(AxisName::delta)) r.table.columns.push_back(c);
  r.table.columns.push_back({"half_sin_phi", "1"});
  r.table.columns.push_back({"class", "-"});
  const auto grid = bistable_region_map(fa.axis, da.axis, p, threads);
  std::map<std::string, long> counts;
  double dmin = INFINITY, dmax = -INFINITY, fmin = INFINITY, fmax = -INFINITY;
  for (std::size_t i = 0; i < fa.axis.points; ++i) {
    for (std::size_t j = 0; j < da.axis.points; ++j) {
      const double f = fa.axis.value(i), d = da.axis.value(j);
      const auto cls = grid.at(i, j);
      ++counts[to_string(cls)];
      if (cls == RegionClass::bistable_actual) {
        dmin = std::min(dmin, d / p.Gamma);
        dmax = std::max(dmax, d / p.Gamma);
        fmin = std::min(fmin, f);
        fmax = std::max(fmax, f);
      }
      r.table.add({f / pi, f, d / p.Gamma, d, 0.5 * std::sin(f), std::string(to_string(cls))});
    }
  }
  json summary = {{"counts", counts}};
  if (counts["bistable-actual"] > 0)
    summary["bistable_actual_extent"] = {{"delta_over_Gamma", {dmin, dmax}},
                                         {"phi_over_pi", {fmin / pi, fmax / pi}},
                                         {"half_sin_phi", {0.5 * std::sin(fmin), 0.5 * std::sin(fmax)}}};
  r.meta["summary"] = summary;
  return r;
}

Result cmd_response(const RunConfig& cfg) {
  const auto& base = cfg.physical();
  const auto ax = primary_axis(cfg, {AxisName::phi, AxisName::delta, AxisName::power, AxisName::kappa},
                               SweepAxis{AxisName::phi, {-0.03 * pi, 0.01 * pi, 801}});
  Result r{"response", {}, base_meta("response", cfg)};
  r.table.title = "response: steady-state intensities for g1 and g2";
  r.table.columns = axis_columns(ax.name);
  const std::vector<Column> cols{{"g", "rad/s"},  {"g_over_2pi", "Hz"}, {"n_roots", "1"}, {"beta_1", "1"},
                                 {"beta_2", "1"}, {"beta_3", "1"},      {"stability", "-"}, {"status", "-"}};
  r.table.columns.insert(r.table.columns.end(), cols.begin(), cols.end());
  for (double g : {cfg.couplings.g1, cfg.couplings.g2}) {
    for (std::size_t i = 0; i < ax.axis.points; ++i) {
      const double v = ax.axis.value(i);
      PhysicalParams p = set_value(base, ax.name, v);
      p.g = g;
      std::vector<Cell> row{dimless(base, ax.name, v), v, g, to_hz(g)};
      try {
        const auto roots = solve_intensity(coefficients(p));
        std::string pattern;
        double b[3] = {nan(), nan(), nan()};
        for (std::size_t k = 0; k < roots.size(); ++k) {
          b[k] = roots[k].beta;
          pattern += roots[k].stable ? 'S' : 'U';
        }
        row.insert(row.end(), {Cell(static_cast<long>(roots.size())), Cell(b[0]), Cell(b[1]), Cell(b[2]),
                               Cell(pattern), Cell(std::string("ok"))});
      } catch (const NoSolution&) {
        row.insert(row.end(), {Cell(0L), Cell(nan()), Cell(nan()), Cell(nan()), Cell(std::string("-")),
                               Cell(std::string("no-solution"))});
      }
      r.table.add(std::move(row));
    }
  }
  return r;
}

Result cmd_dynamics(const RunConfig& cfg) {
  const auto& p = cfg.physical();
  const auto& d = cfg.dynamics;
  MeanFieldState s0;
  if (d.start_root) {
    const auto states = steady_states(p);
    if (*d.start_root >= states.size())
      throw ConfigError("dynamics.start_root: only " + std::to_string(states.size()) + " steady states exist");
    s0 = to_state(states[*d.start_root]);
    s0.alpha1 *= 1.0 + d.perturbation;
  }
  const double t_end = d.t_end > 0.0 ? d.t_end : default_settle_cutoff(p);
  const auto tr = integrate(s0, p, t_end, d.ode, d.samples);
  Result r{"dynamics", {}, base_meta("dynamics", cfg)};
  r.table.title = "dynamics: mean-field trajectory";
  r.table.columns = {{"t", "s"},        {"Gamma_t", "1"},   {"re_alpha1", "1"}, {"im_alpha1", "1"},
                     {"re_alpha2", "1"}, {"im_alpha2", "1"}, {"beta", "1"},      {"q", "1"},
                     {"p", "1"}};
  for (std::size_t k = 0; k < tr.t.size(); ++k) {
    const auto& s = tr.states[k];
    r.table.add({tr.t[k], tr.t[k] * p.Gamma, s.alpha1.real(), s.alpha1.imag(), s.alpha2.real(), s.alpha2.imag(),
                 s.beta(), s.q, s.p});
  }
  json roots = json::array();
  for (const auto& rt : solve_intensity(coefficients(p)))
    roots.push_back({{"beta", rt.beta}, {"branch", to_string(rt.branch)}, {"stable", rt.stable}});
  r.meta["settings"] = {{"method", to_string(d.ode.method)},
                        {"rtol", d.ode.rtol},
                        {"atol", d.ode.atol},
                        {"t_end", t_end},
                        {"samples", d.samples},
                        {"start", d.start_root ? "root " + std::to_string(*d.start_root) : std::string("vacuum")},
                        {"perturbation", d.perturbation}};
  r.meta["summary"] = {{"steps", tr.steps},
                       {"final_beta", tr.states.back().beta()},
                       {"final_residual", fixed_point_residual(tr.states.back(), p)},
                       {"cubic_roots", roots}};
  return r;
}

Result cmd_hysteresis(const RunConfig& cfg) {
  const auto& p = cfg.physical();
  const auto ax = primary_axis(cfg, {AxisName::phi, AxisName::delta},
                               SweepAxis{AxisName::phi, {0.0, -0.02 * pi, 81}});
  const auto path = ax.axis.values();
  SettleOptions so;
  so.ode = cfg.dynamics.ode;
  const auto tr = hysteresis_sweep(p, ax.name == AxisName::phi ? SweepParam::phi : SweepParam::delta, path, so);
  Result r{"hysteresis", {}, base_meta("hysteresis", cfg)};
  r.table.title = "hysteresis: quasi-static forward and backward sweep";
  r.table.columns = {{"leg", "-"}, {"step", "1"}};
  for (auto c : axis_columns(ax.name)) r.table.columns.push_back(c);
  const std::vector<Column> cols{{"beta", "1"}, {"branch", "-"}, {"stable", "1"}, {"jump", "1"}};
  r.table.columns.insert(r.table.columns.end(), cols.begin(), cols.end());
  json jumps = json::array();
  auto emit = [&](const char* leg, const std::vector<SweepStep>& steps) {
    for (std::size_t k = 0; k < steps.size(); ++k) {
      const auto& s = steps[k];
      r.table.add({std::string(leg), static_cast<long>(k), dimless(p, ax.name, s.value), s.value, s.beta,
                   std::string(to_string(s.branch)), static_cast<long>(s.stable), static_cast<long>(s.jump)});
      if (s.jump) jumps.push_back({{"leg", leg}, {"step", k}, {"value", s.value}, {"dimensionless", dimless(p, ax.name, s.value)}});
    }
  };
  emit("forward", tr.forward);
  emit("backward", tr.backward);
  r.meta["summary"] = {{"loop_area", tr.loop_area}, {"loop_area_unit", "beta*" + axis_unit(ax.name)}, {"jumps", jumps}};
  return r;
}

std::vector<Column> sensitivity_columns() {
  return {{"beta_g1", "1"}, {"beta_g2", "1"}, {"eta", "1"}, {"inverse_eta", "1"},
          {"merit", "1"},   {"region", "-"},  {"status", "-"}};
}

void push_point(std::vector<Cell>& row, const SensitivityPoint& s, CellStatus st) {
  const double merit = s.region == Region::II ? s.inverse_eta() : s.eta;
  row.insert(row.end(), {s.beta_g1, s.beta_g2, s.eta, s.inverse_eta(), merit, std::string(to_string(s.region)),
                         std::string(to_string(st))});
}

Result cmd_sense_map(const RunConfig& cfg, std::size_t threads) {
  const auto& p = cfg.physical();
  const auto [fa, da] = plane_axes(cfg);
  const auto grid = sensitivity_map(fa.axis, da.axis, p, cfg.couplings, threads);
  Result r{"sense-map", {}, base_meta("sense-map", cfg)};
  r.table.title = "sense-map: sensitivity eta = beta(g1)/beta(g2) over (phi, delta)";
  r.table.columns = axis_columns(AxisName::phi);
  for (auto c : axis_columns(AxisName::delta)) r.table.columns.push_back(c);
  for (auto c : sensitivity_columns()) r.table.columns.push_back(c);
  double emax = -INFINITY, imax = -INFINITY;
  json at_emax, at_imax;
  std::map<std::string, long> regions;
  long failures = 0;
  for (std::size_t i = 0; i < fa.axis.points; ++i) {
    for (std::size_t j = 0; j < da.axis.points; ++j) {
      const auto& c = grid.at(i, j);
      const double f = fa.axis.value(i), d = da.axis.value(j);
      std::vector<Cell> row{f / pi, f, d / p.Gamma, d};
      push_point(row, c.point, c.status);
      r.table.add(std::move(row));
      if (c.status != CellStatus::ok) {
        ++failures;
        continue;
      }
      ++regions[to_string(c.point.region)];
      if (c.point.eta > emax) {
        emax = c.point.eta;
        at_emax = {{"phi_over_pi", f / pi}, {"delta_over_Gamma", d / p.Gamma}};
      }
      if (c.point.inverse_eta() > imax) {
        imax = c.point.inverse_eta();
        at_imax = {{"phi_over_pi", f / pi}, {"delta_over_Gamma", d / p.Gamma}};
      }
    }
  }
  r.meta["summary"] = {{"eta_max", emax},         {"eta_max_at", at_emax},       {"inverse_eta_max", imax},
                       {"inverse_eta_max_at", at_imax}, {"regions", regions}, {"failed_cells", failures}};
  return r;
}

Result cmd_sense_cut(const RunConfig& cfg) {
  const auto& p = cfg.physical();
  const auto ax = primary_axis(cfg, {AxisName::phi, AxisName::delta},
                               SweepAxis{AxisName::phi, {-0.03 * pi, 0.01 * pi, 2001}});
  Result r{"sense-cut", {}, base_meta("sense-cut", cfg)};
  r.table.title = std::string("sense-cut: sensitivity along ") + to_string(ax.name);
  r.table.columns = axis_columns(ax.name);
  for (auto c : sensitivity_columns()) r.table.columns.push_back(c);
  double emax = -INFINITY, imax = -INFINITY, e_at = nan(), i_at = nan();
  for (std::size_t i = 0; i < ax.axis.points; ++i) {
    const double v = ax.axis.value(i);
    const PhysicalParams q = set_value(p, ax.name, v);
    std::vector<Cell> row{dimless(p, ax.name, v), v};
    try {
      const auto s = sensitivity(q, cfg.couplings);
      push_point(row, s, CellStatus::ok);
      if (s.eta > emax) {
        emax = s.eta;
        e_at = dimless(p, ax.name, v);
      }
      if (s.inverse_eta() > imax) {
        imax = s.inverse_eta();
        i_at = dimless(p, ax.name, v);
      }
    } catch (const NoSolution&) {
      SensitivityPoint s;
      s.eta = nan();
      push_point(row, s, CellStatus::no_solution);
    }
    r.table.add(std::move(row));
  }
  json summary = {{"eta_max", emax}, {"eta_max_at", e_at}, {"inverse_eta_max", imax}, {"inverse_eta_max_at", i_at}};
  if (ax.name == AxisName::delta) {
    const DetuningScan scan{ax.axis.first, ax.axis.last, ax.axis.points};
    const auto opt = optimal_detuning(p, cfg.couplings, scan);
    summary["delta_opt_over_Gamma"] = opt.delta / p.Gamma;
    summary["delta_opt_degenerate"] = opt.degenerate;
    try {
      const auto bw = bandwidth(p, cfg.couplings, scan, cfg.drop, Merit::inverse_eta);
      summary["bandwidth_inverse_eta_over_Gamma"] = bw.width / p.Gamma;
      summary["bandwidth_inverse_eta_window_over_Gamma"] = {bw.lo / p.Gamma, bw.hi / p.Gamma};
      const auto rb = bandwidth(p, cfg.couplings, scan, cfg.drop, Merit::eta);
      summary["robustness_eta_over_Gamma"] = rb.width / p.Gamma;
    } catch (const UndefinedResult& e) {
      summary["bandwidth_inverse_eta_over_Gamma"] = nullptr;
      summary["bandwidth_note"] = e.what();
    }
  } else {
    const auto tp = turning_phases(p, cfg.couplings, std::min(ax.axis.first, ax.axis.last),
                                   std::max(ax.axis.first, ax.axis.last), ax.axis.points);
    summary["phi1_over_pi"] = tp.phi1 ? json(*tp.phi1 / pi) : json(nullptr);
    summary["phi2_over_pi"] = tp.phi2 ? json(*tp.phi2 / pi) : json(nullptr);
  }
  r.meta["summary"] = summary;
  return r;
}

Result cmd_nanosphere(const RunConfig& cfg) {
  if (!cfg.nanosphere) throw ConfigError("nanosphere-g needs a 'nanosphere' section");
  const auto& n = *cfg.nanosphere;
  const double g = nanosphere_coupling(n.params);
  Result r{"nanosphere-g", {}, base_meta("nanosphere-g", cfg)};
  r.table.title = "nanosphere-g: emitter-mediated single-photon coupling";
  r.table.columns = {{"N", "1"},       {"p_e", "1"},     {"Omega_c", "rad/s"}, {"Delta_c", "rad/s"},
                     {"gamma_c", "1/m"}, {"q_zpf", "m"}, {"g", "rad/s"},       {"g_over_2pi", "Hz"}};
  r.table.add({static_cast<long>(n.params.N), n.params.p_e, n.params.Omega_c, n.params.Delta_c, n.params.gamma_c,
               n.params.q_zpf, g, to_hz(g)});
  r.meta["nanosphere"] = {{"radius", n.radius},       {"emitter_density", n.emitter_density},
                          {"mass_density", n.mass_density}, {"omega_m", n.omega_m}};
  r.meta["summary"] = {{"abs_g_over_2pi_Hz", std::abs(to_hz(g))}};
  if (n.omega_m > 0.0) r.meta["summary"]["chi_over_2pi_Hz"] = to_hz(kerr_coefficient(std::abs(g), n.omega_m));
  return r;
}

}  // namespace

void apply_overrides(RunConfig& cfg, const Overrides& o) {
  const double G = cfg.params ? cfg.params->Gamma : 0.0;
  if (o.phi) {
    if (!cfg.params) throw ConfigError("--phi needs a params section");
    cfg.params->phi = parse_angle(*o.phi, "--phi");
    cfg.params->validate();
  }
  if (o.g) {
    const auto [a, b] = split_pair(*o.g, ',', "--g");
    cfg.couplings.g1 = parse_rate(with_default_unit(a, "Hz"), "--g", G);
    cfg.couplings.g2 = parse_rate(with_default_unit(b, "Hz"), "--g", G);
    if (!(cfg.couplings.g1 <= cfg.couplings.g2)) throw ConfigError("--g: expected g1 <= g2");
  }
  if (o.delta_range) {
    const auto [a, b] = split_pair(*o.delta_range, ',', "--delta-range");
    set_axis(cfg, AxisName::delta, parse_rate(with_default_unit(a, "Gamma"), "--delta-range", G),
             parse_rate(with_default_unit(b, "Gamma"), "--delta-range", G), std::nullopt);
  }
  if (o.grid) {
    const auto x = o.grid->find('x');
    if (x == std::string::npos) {
      const std::size_t n = parse_count(*o.grid);
      if (cfg.sweep.empty()) throw ConfigError("--grid: the config has no sweep axis to resize");
      cfg.sweep.front().axis.points = n;
    } else {
      const std::size_t n = parse_count(o.grid->substr(0, x));
      const std::size_t m = parse_count(o.grid->substr(x + 1));
      const double Gm = G > 0.0 ? G : 1.0;
      const auto* f = cfg.find(AxisName::phi);
      const auto* d = cfg.find(AxisName::delta);
      const Axis fa = f ? f->axis : Axis{-0.03 * pi, 0.01 * pi, n};
      const Axis da = d ? d->axis : Axis{-0.3 * Gm, 0.3 * Gm, m};
      set_axis(cfg, AxisName::phi, fa.first, fa.last, n);
      set_axis(cfg, AxisName::delta, da.first, da.last, m);
    }
  }
}

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"eigen",    "coeffs",     "steady",    "region-map", "response",
                                              "dynamics", "hysteresis", "sense-map", "sense-cut",  "nanosphere-g"};
  return names;
}

Result compute(const std::string& sub, const RunConfig& cfg, std::size_t threads) {
  if (sub == "eigen") return cmd_eigen(cfg);
  if (sub == "coeffs") return cmd_coeffs(cfg);
  if (sub == "steady") return cmd_steady(cfg);
  if (sub == "region-map") return cmd_region_map(cfg, threads);
  if (sub == "response") return cmd_response(cfg);
  if (sub == "dynamics") return cmd_dynamics(cfg);
  if (sub == "hysteresis") return cmd_hysteresis(cfg);
  if (sub == "sense-map") return cmd_sense_map(cfg, threads);
  if (sub == "sense-cut") return cmd_sense_cut(cfg);
  if (sub == "nanosphere-g") return cmd_nanosphere(cfg);
  throw UsageError("unknown subcommand '" + sub + "'");
}

std::string run(const std::string& sub, const RunConfig& cfg, std::size_t threads) {
  auto res = compute(sub, cfg, threads);
  res.meta["threads"] = resolve_threads(threads);
  return write_outputs(cfg.output, res.stem, res.table, res.meta);
}

}  // namespace omsense::cli
