#include "output.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace omsense::cli {

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::logic_error("table row width does not match the header");
  rows.push_back(std::move(row));
}

std::string format_double(double v, int precision) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, precision);
  return std::string(buf, res.ptr);
}

namespace {

std::string cell_text(const Cell& c, int precision) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d, precision);
  if (const auto* l = std::get_if<long>(&c)) return std::to_string(*l);
  return std::get<std::string>(c);
}

}  // namespace

std::string to_csv(const Table& t, int precision) {
  std::string s = "# " + t.title + "\n# ";
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    s += (i ? "," : "") + t.columns[i].name + " [" + t.columns[i].unit + "]";
  s += "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) s += (i ? "," : "") + t.columns[i].name;
  s += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + cell_text(row[i], precision);
    s += "\n";
  }
  return s;
}

std::string to_json(const Table& t, int precision) {
  nlohmann::ordered_json j;
  j["title"] = t.title;
  auto& cols = j["columns"] = nlohmann::ordered_json::array();
  for (const auto& c : t.columns) cols.push_back({{"name", c.name}, {"unit", c.unit}});
  auto& rows = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    auto r = nlohmann::ordered_json::array();
    for (const auto& c : row) {
      if (const auto* d = std::get_if<double>(&c)) {
        // Round through the fixed formatting so the JSON is as deterministic as the CSV.
        if (std::isfinite(*d))
          r.push_back(std::stod(format_double(*d, precision)));
        else
          r.push_back(nullptr);
      } else if (const auto* l = std::get_if<long>(&c)) {
        r.push_back(*l);
      } else {
        r.push_back(std::get<std::string>(c));
      }
    }
    rows.push_back(std::move(r));
  }
  return j.dump(1) + "\n";
}

std::string write_outputs(const OutputSettings& out, const std::string& stem, const Table& t,
                          const nlohmann::json& meta) {
  namespace fs = std::filesystem;
  fs::create_directories(out.dir);
  const bool csv = out.format == Format::csv;
  const fs::path data = fs::path(out.dir) / (stem + (csv ? ".csv" : ".json"));
  {
    std::ofstream f(data, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + data.string());
    f << (csv ? to_csv(t, out.precision) : to_json(t, out.precision));
  }
  nlohmann::json m = meta;
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
  m["timestamp"] = stamp;
  m["data_file"] = data.filename().string();
  m["rows"] = t.rows.size();
  const fs::path side = fs::path(out.dir) / (stem + ".meta.json");
  std::ofstream f(side, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + side.string());
  f << m.dump(2) << "\n";
  return data.string();
}

}  // namespace omsense::cli
