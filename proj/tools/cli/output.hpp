#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <variant>
#include <vector>

#include "config.hpp"

namespace omsense::cli {

using Cell = std::variant<double, long, std::string>;

struct Column {
  std::string name;
  std::string unit;  ///< "1" for dimensionless
};

/// Row-ordered table written as `#`-headed CSV or as JSON.
struct Table {
  std::string title;
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

/// Shortest round-trip-free fixed formatting: `precision` significant digits.
std::string format_double(double v, int precision);

std::string to_csv(const Table& t, int precision);
std::string to_json(const Table& t, int precision);

/// Writes `<stem>.csv|json` and `<stem>.meta.json` into the output directory.
/// Returns the data file path.
std::string write_outputs(const OutputSettings& out, const std::string& stem, const Table& t,
                          const nlohmann::json& meta);

}  // namespace omsense::cli
