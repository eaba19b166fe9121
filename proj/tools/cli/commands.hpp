#pragma once

#include <nlohmann/json.hpp>

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"
#include "output.hpp"

namespace omsense::cli {

inline constexpr const char* version = "0.1.0";

/// Command-line replacements for config values.
struct Overrides {
  std::optional<std::string> phi;          ///< "-0.008pi"
  std::optional<std::string> delta_range;  ///< "lo,hi", units of Γ unless given
  std::optional<std::string> grid;         ///< "N" or "NxM"
  std::optional<std::string> g;            ///< "g1,g2", Hz unless given
};

void apply_overrides(RunConfig& cfg, const Overrides& o);

struct Result {
  std::string stem;
  Table table;
  nlohmann::json meta;
};

const std::vector<std::string>& subcommands();

/// Runs a subcommand without touching the filesystem.
Result compute(const std::string& subcommand, const RunConfig& cfg, std::size_t threads);

/// compute() followed by write_outputs(); returns the data file path.
std::string run(const std::string& subcommand, const RunConfig& cfg, std::size_t threads);

}  // namespace omsense::cli
