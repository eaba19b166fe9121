#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "omsense/omsense.hpp"

namespace omsense::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class AxisName { phi, delta, power, kappa, g };

const char* to_string(AxisName a);

struct SweepAxis {
  AxisName name;
  Axis axis;  ///< SI / rad / rad/s values
};

struct DynamicsSettings {
  double t_end = 0.0;  ///< s; 0 means the settle cutoff
  std::size_t samples = 201;
  OdeOptions ode{};
  double perturbation = 0.0;  ///< relative kick on α₁ when starting from a root
  std::optional<std::size_t> start_root;  ///< index into the ascending root list; vacuum if unset
};

struct NanosphereSettings {
  NanosphereParams params;
  double radius = 0.0;
  double emitter_density = 0.0;  ///< 1/m³, used when N is derived
  double mass_density = 0.0;     ///< kg/m³, used when q_zpf is derived
  double omega_m = 0.0;
};

enum class Format { csv, json };

struct OutputSettings {
  std::string dir = ".";
  Format format = Format::csv;
  int precision = 12;
};

struct RunConfig {
  std::optional<PhysicalParams> params;
  bool gamma_m_default = false;
  CouplingPair couplings{};
  std::vector<SweepAxis> sweep;  ///< in file order
  DynamicsSettings dynamics{};
  std::optional<NanosphereSettings> nanosphere;
  OutputSettings output{};
  double drop = 0.1;  ///< bandwidth drop fraction
  std::string source;  ///< path the config came from

  const SweepAxis* find(AxisName a) const;
  const PhysicalParams& physical() const;
};

/// Parses YAML text. Errors name the offending key and its line.
RunConfig parse_config(const std::string& text, const std::string& source = "<string>");
RunConfig load_config(const std::string& path);

/// "100 MHz" style quantities; exposed for the flag overrides.
double parse_rate(const std::string& text, const std::string& key, double Gamma);
double parse_angle(const std::string& text, const std::string& key);

}  // namespace omsense::cli
