#include "config.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace omsense::cli {

const char* to_string(AxisName a) {
  switch (a) {
    case AxisName::phi: return "phi";
    case AxisName::delta: return "delta";
    case AxisName::power: return "power";
    case AxisName::kappa: return "kappa";
    case AxisName::g: return "g";
  }
  return "?";
}

const SweepAxis* RunConfig::find(AxisName a) const {
  for (const auto& s : sweep)
    if (s.name == a) return &s;
  return nullptr;
}

const PhysicalParams& RunConfig::physical() const {
  if (!params)
    throw ConfigError("config has no 'params' section; required keys: params.Gamma, params.kappa, "
                      "params.omega_m, params.g, params.P_in");
  return *params;
}

namespace {

enum class Kind { rate, angle, power, length, time, inverse_volume, mass_density, number };

const std::map<std::string, double>& units(Kind k) {
  static const std::map<std::string, double> rate{
      {"Hz", constants::two_pi}, {"kHz", constants::two_pi * 1e3}, {"MHz", constants::two_pi * 1e6},
      {"GHz", constants::two_pi * 1e9}, {"rad/s", 1.0}};
  static const std::map<std::string, double> angle{{"rad", 1.0}, {"pi", constants::pi}, {"deg", constants::pi / 180.0}};
  static const std::map<std::string, double> power{{"W", 1.0}, {"mW", 1e-3}, {"uW", 1e-6}, {"nW", 1e-9}};
  static const std::map<std::string, double> length{{"m", 1.0}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}};
  static const std::map<std::string, double> time{{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"ns", 1e-9}};
  static const std::map<std::string, double> inv_volume{{"m^-3", 1.0}, {"nm^-3", 1e27}};
  static const std::map<std::string, double> mass{{"kg/m^3", 1.0}, {"g/cm^3", 1e3}};
  static const std::map<std::string, double> none{{"", 1.0}};
  switch (k) {
    case Kind::rate: return rate;
    case Kind::angle: return angle;
    case Kind::power: return power;
    case Kind::length: return length;
    case Kind::time: return time;
    case Kind::inverse_volume: return inv_volume;
    case Kind::mass_density: return mass;
    case Kind::number: return none;
  }
  return none;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

/// Value and unit of "<number> <unit>"; the space is optional.
std::pair<double, std::string> split_quantity(const std::string& text, const std::string& key) {
  const std::string s = trim(text);
  double value = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc() || res.ptr == s.data())
    throw ConfigError(key + ": cannot read a number from '" + text + "'");
  return {value, trim(std::string(res.ptr, s.data() + s.size()))};
}

double convert(const std::string& text, const std::string& key, Kind kind, double Gamma) {
  const auto [value, unit] = split_quantity(text, key);
  if (unit.empty()) {
    if (kind == Kind::number || value == 0.0) return value;
    throw ConfigError(key + ": '" + text + "' needs a unit");
  }
  if (kind == Kind::rate && unit == "Gamma") {
    if (!(Gamma > 0.0)) throw ConfigError(key + ": 'Gamma' units need params.Gamma in absolute units");
    return value * Gamma;
  }
  const auto& table = units(kind);
  const auto it = table.find(unit);
  if (it == table.end() || kind == Kind::number) {
    std::string known;
    for (const auto& [u, f] : table) known += (known.empty() ? "" : ", ") + u;
    if (kind == Kind::rate) known += ", Gamma";
    throw ConfigError(key + ": unknown unit '" + unit + "' (expected one of: " + known + ")");
  }
  return value * it->second;
}

class Reader {
 public:
  Reader(const YAML::Node& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.IsMap()) throw ConfigError(where(node_) + ": expected a mapping");
  }

  std::string where(const YAML::Node& n) const { return path_ + " (line " + std::to_string(n.Mark().line + 1) + ")"; }
  std::string key_where(const std::string& k) const {
    const auto n = node_[k];
    return path_ + "." + k + " (line " + std::to_string(n.Mark().line + 1) + ")";
  }

  void allow(std::initializer_list<const char*> keys) const {
    std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& kv : node_) {
      const auto k = kv.first.as<std::string>();
      if (!ok.count(k)) {
        std::string list;
        for (const auto& a : ok) list += (list.empty() ? "" : ", ") + a;
        throw ConfigError(path_ + "." + k + " (line " + std::to_string(kv.first.Mark().line + 1) +
                          "): unknown key (allowed: " + list + ")");
      }
    }
  }

  bool has(const std::string& k) const { return static_cast<bool>(node_[k]); }

  std::string text(const std::string& k) const {
    const auto n = node_[k];
    if (!n.IsScalar()) throw ConfigError(key_where(k) + ": expected a scalar");
    return n.as<std::string>();
  }

  double quantity(const std::string& k, Kind kind, double Gamma = 0.0) const {
    return convert(text(k), key_where(k), kind, Gamma);
  }

  long integer(const std::string& k) const {
    const std::string s = trim(text(k));
    long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
      throw ConfigError(key_where(k) + ": expected an integer, got '" + s + "'");
    return v;
  }

  Reader child(const std::string& k) const { return Reader(node_[k], path_ + "." + k); }
  const YAML::Node& node() const { return node_; }
  const std::string& path() const { return path_; }

 private:
  YAML::Node node_;
  std::string path_;
};

PhysicalParams read_params(const Reader& r, bool& gamma_m_default) {
  r.allow(
      {"Gamma", "kappa", "kappa1", "kappa2", "delta", "phi", "omega_m", "gamma_m", "g", "P_in", "lambda_d"});
  std::vector<std::string> missing;
  for (const char* k : {"Gamma", "omega_m", "g", "P_in"})
    if (!r.has(k)) missing.push_back(std::string("params.") + k);
  if (!r.has("kappa") && !(r.has("kappa1") && r.has("kappa2"))) missing.push_back("params.kappa");
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw ConfigError(r.path() + ": missing required keys: " + list);
  }
  if (r.has("kappa") && (r.has("kappa1") || r.has("kappa2")))
    throw ConfigError(r.key_where("kappa") + ": give either kappa or kappa1/kappa2, not both");

  PhysicalParams p;
  p.Gamma = r.quantity("Gamma", Kind::rate);
  const double G = p.Gamma;
  if (r.has("kappa")) {
    p.kappa1 = p.kappa2 = r.quantity("kappa", Kind::rate, G);
  } else {
    p.kappa1 = r.quantity("kappa1", Kind::rate, G);
    p.kappa2 = r.quantity("kappa2", Kind::rate, G);
  }
  p.delta = r.has("delta") ? r.quantity("delta", Kind::rate, G) : 0.0;
  p.phi = r.has("phi") ? r.quantity("phi", Kind::angle) : 0.0;
  p.omega_m = r.quantity("omega_m", Kind::rate, G);
  p.g = r.quantity("g", Kind::rate, G);
  p.P_in = r.quantity("P_in", Kind::power);
  p.lambda_d = r.has("lambda_d") ? r.quantity("lambda_d", Kind::length) : 1550e-9;
  gamma_m_default = !r.has("gamma_m") || trim(r.text("gamma_m")) == "adiabatic";
  if (gamma_m_default) {
    if (!(p.Gamma > 0.0) || !(p.omega_m > 0.0))
      throw ConfigError(r.path() + ": Gamma and omega_m must be positive");
    p.gamma_m = default_mechanical_damping(p.Gamma, p.omega_m);
  } else {
    p.gamma_m = r.quantity("gamma_m", Kind::rate, G);
  }
  try {
    p.validate();
  } catch (const std::exception& e) {
    throw ConfigError(r.path() + " (line " + std::to_string(r.node().Mark().line + 1) + "): " + e.what());
  }
  return p;
}

Kind axis_kind(AxisName a) {
  switch (a) {
    case AxisName::phi: return Kind::angle;
    case AxisName::power: return Kind::power;
    default: return Kind::rate;
  }
}

std::vector<SweepAxis> read_sweep(const Reader& r, double Gamma) {
  static const std::map<std::string, AxisName> names{{"phi", AxisName::phi},
                                                     {"delta", AxisName::delta},
                                                     {"power", AxisName::power},
                                                     {"kappa", AxisName::kappa},
                                                     {"g", AxisName::g}};
  std::vector<SweepAxis> out;
  for (const auto& kv : r.node()) {
    const auto k = kv.first.as<std::string>();
    const auto it = names.find(k);
    if (it == names.end())
      throw ConfigError(r.path() + "." + k + " (line " + std::to_string(kv.first.Mark().line + 1) +
                        "): unknown axis (allowed: delta, g, kappa, phi, power)");
    Reader a = r.child(k);
    a.allow({"from", "to", "points"});
    for (const char* req : {"from", "to", "points"})
      if (!a.has(req)) throw ConfigError(a.where(a.node()) + ": missing key '" + req + "'");
    SweepAxis s{it->second, {}};
    s.axis.first = a.quantity("from", axis_kind(s.name), Gamma);
    s.axis.last = a.quantity("to", axis_kind(s.name), Gamma);
    const long n = a.integer("points");
    if (n < 2) throw ConfigError(a.key_where("points") + ": a sweep needs at least 2 points");
    s.axis.points = static_cast<std::size_t>(n);
    if (!std::isfinite(s.axis.first) || !std::isfinite(s.axis.last))
      throw ConfigError(a.where(a.node()) + ": range must be finite");
    out.push_back(s);
  }
  return out;
}

}  // namespace

double parse_rate(const std::string& text, const std::string& key, double Gamma) {
  return convert(text, key, Kind::rate, Gamma);
}

double parse_angle(const std::string& text, const std::string& key) { return convert(text, key, Kind::angle, 0.0); }

RunConfig parse_config(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(source + " (line " + std::to_string(e.mark.line + 1) + "): " + e.msg);
  }
  if (!root || root.IsNull())
    throw ConfigError(source + ": empty config; required keys: params.Gamma, params.kappa, params.omega_m, "
                      "params.g, params.P_in (or a nanosphere section)");
  Reader top(root, "config");
  top.allow({"params", "couplings", "sweep", "dynamics", "nanosphere", "output", "analysis"});
  if (!top.has("params") && !top.has("nanosphere"))
    throw ConfigError(source + ": required keys: params.Gamma, params.kappa, params.omega_m, params.g, "
                      "params.P_in (or a nanosphere section)");

  RunConfig cfg;
  cfg.source = source;
  double G = 0.0;
  if (top.has("params")) {
    cfg.params = read_params(top.child("params"), cfg.gamma_m_default);
    G = cfg.params->Gamma;
  }
  if (top.has("couplings")) {
    Reader c = top.child("couplings");
    c.allow({"g1", "g2"});
    if (c.has("g1")) cfg.couplings.g1 = c.quantity("g1", Kind::rate, G);
    if (c.has("g2")) cfg.couplings.g2 = c.quantity("g2", Kind::rate, G);
    if (!(cfg.couplings.g1 <= cfg.couplings.g2))
      throw ConfigError(c.where(c.node()) + ": expected g1 <= g2");
  }
  if (top.has("sweep")) cfg.sweep = read_sweep(top.child("sweep"), G);
  if (top.has("dynamics")) {
    Reader d = top.child("dynamics");
    d.allow({"t_end", "samples", "method", "rtol", "atol", "max_steps", "start_root", "perturbation"});
    if (d.has("t_end")) cfg.dynamics.t_end = d.quantity("t_end", Kind::time);
    if (d.has("samples")) {
      const long n = d.integer("samples");
      if (n < 2) throw ConfigError(d.key_where("samples") + ": need at least 2 samples");
      cfg.dynamics.samples = static_cast<std::size_t>(n);
    }
    if (d.has("method")) {
      const auto m = trim(d.text("method"));
      if (m == "rosenbrock")
        cfg.dynamics.ode.method = Method::rosenbrock;
      else if (m == "dormand-prince")
        cfg.dynamics.ode.method = Method::dormand_prince;
      else
        throw ConfigError(d.key_where("method") + ": expected rosenbrock or dormand-prince");
    }
    if (d.has("rtol")) cfg.dynamics.ode.rtol = d.quantity("rtol", Kind::number);
    if (d.has("atol")) cfg.dynamics.ode.atol = d.quantity("atol", Kind::number);
    if (d.has("max_steps")) cfg.dynamics.ode.max_steps = static_cast<std::size_t>(d.integer("max_steps"));
    if (d.has("start_root")) cfg.dynamics.start_root = static_cast<std::size_t>(d.integer("start_root"));
    if (d.has("perturbation")) cfg.dynamics.perturbation = d.quantity("perturbation", Kind::number);
    if (!(cfg.dynamics.ode.rtol > 0.0) || !(cfg.dynamics.ode.atol >= 0.0))
      throw ConfigError(d.where(d.node()) + ": tolerances must be positive");
  }
  if (top.has("nanosphere")) {
    Reader n = top.child("nanosphere");
    n.allow({"N", "emitter_density", "radius", "p_e", "Omega_c", "Delta_c", "decay_length", "q_zpf",
             "mass_density", "omega_m"});
    NanosphereSettings s;
    for (const char* req : {"p_e", "Omega_c", "Delta_c", "decay_length"})
      if (!n.has(req)) throw ConfigError(n.where(n.node()) + ": missing key '" + req + "'");
    s.params.p_e = n.quantity("p_e", Kind::number);
    s.params.Omega_c = n.quantity("Omega_c", Kind::rate);
    s.params.Delta_c = n.quantity("Delta_c", Kind::rate);
    const double L = n.quantity("decay_length", Kind::length);
    if (!(L > 0.0)) throw ConfigError(n.key_where("decay_length") + ": must be positive");
    s.params.gamma_c = 1.0 / L;
    if (n.has("radius")) s.radius = n.quantity("radius", Kind::length);
    if (n.has("N")) {
      s.params.N = n.integer("N");
    } else {
      if (!n.has("emitter_density") || !n.has("radius"))
        throw ConfigError(n.where(n.node()) + ": give N or emitter_density with radius");
      s.emitter_density = n.quantity("emitter_density", Kind::inverse_volume);
      s.params.N = emitter_count(s.emitter_density, s.radius);
    }
    if (n.has("q_zpf")) {
      s.params.q_zpf = n.quantity("q_zpf", Kind::length);
    } else {
      if (!n.has("mass_density") || !n.has("radius") || !n.has("omega_m"))
        throw ConfigError(n.where(n.node()) + ": give q_zpf or mass_density, radius and omega_m");
      s.mass_density = n.quantity("mass_density", Kind::mass_density);
      s.omega_m = n.quantity("omega_m", Kind::rate);
      const double mass = s.mass_density * 4.0 / 3.0 * constants::pi * std::pow(s.radius, 3);
      s.params.q_zpf = zero_point_motion(mass, s.omega_m);
    }
    try {
      s.params.validate();
    } catch (const std::exception& e) {
      throw ConfigError(n.where(n.node()) + ": " + e.what());
    }
    cfg.nanosphere = s;
  }
  if (top.has("output")) {
    Reader o = top.child("output");
    o.allow({"dir", "format", "precision"});
    if (o.has("dir")) cfg.output.dir = o.text("dir");
    if (o.has("format")) {
      const auto f = trim(o.text("format"));
      if (f == "csv")
        cfg.output.format = Format::csv;
      else if (f == "json")
        cfg.output.format = Format::json;
      else
        throw ConfigError(o.key_where("format") + ": expected csv or json");
    }
    if (o.has("precision")) {
      const long pr = o.integer("precision");
      if (pr < 1 || pr > 17) throw ConfigError(o.key_where("precision") + ": expected 1..17");
      cfg.output.precision = static_cast<int>(pr);
    }
  }
  if (top.has("analysis")) {
    Reader a = top.child("analysis");
    a.allow({"drop"});
    if (a.has("drop")) cfg.drop = a.quantity("drop", Kind::number);
    if (!(cfg.drop > 0.0 && cfg.drop < 1.0)) throw ConfigError(a.key_where("drop") + ": expected a value in (0, 1)");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace omsense::cli
