#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "plemelj/core.hpp"

namespace plemelj {

// Row-at-a-time CSV writer. Every row is flushed so a later failure keeps what was written.
class CsvWriter {
 public:
  using Cell = std::variant<std::string, double, long long>;

  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) fail(ErrorKind::InvalidInput, "cannot open " + path.string() + " for writing");
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
    out_.flush();
  }

  void row(const std::vector<Cell>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << format(cells[i]);
    }
    out_ << '\n';
    out_.flush();
  }

  static std::string format(const Cell& c) {
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    if (const auto* n = std::get_if<long long>(&c)) return std::to_string(*n);
    const double v = std::get<double>(c);
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

 private:
  std::ofstream out_;
};

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::InvalidInput, "cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
}

inline nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InvalidInput, "cannot read " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidInput, path.string() + ": " + e.what());
  }
}

// "0.25,0.5" -> {0.25, 0.5}
inline std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      fail(ErrorKind::InvalidInput, "bad number '" + item + "'");
    }
    if (used != item.size()) fail(ErrorKind::InvalidInput, "bad number '" + item + "'");
    v.push_back(x);
  }
  if (v.empty()) fail(ErrorKind::InvalidInput, "empty list");
  return v;
}

inline std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> v;
  for (double x : parse_real_list(text)) {
    if (!(x >= 1.0) || x != std::floor(x)) fail(ErrorKind::InvalidInput, "resolutions must be positive integers");
    v.push_back(static_cast<std::size_t>(x));
  }
  return v;
}

}  // namespace plemelj
