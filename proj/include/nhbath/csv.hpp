// csv.hpp — deterministic CSV and manifest output
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "nhbath/core.hpp"

namespace nhbath {

inline constexpr const char* kCsvSchemaVersion = "nhbath-csv-v1";

namespace detail {

inline std::string csv_field(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
inline std::string csv_field(int v) { return std::to_string(v); }
inline std::string csv_field(long v) { return std::to_string(v); }
inline std::string csv_field(std::uint64_t v) { return std::to_string(v); }
inline std::string csv_field(const char* v) { return v; }
inline std::string csv_field(const std::string& v) { return v; }
inline std::string csv_field(Sublattice s) { return to_string(s); }

}  // namespace detail

/// Writes one versioned comment line, a header row, and %.17g-formatted data
/// rows; byte-identical output for identical inputs.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns)
      : out_(path) {
    if (!out_) throw Error("cannot open output file " + path.string());
    out_ << "# " << kCsvSchemaVersion << "\n";
    for (size_t i = 0; i < columns.size(); ++i)
      out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
  }

  template <class... Ts>
  void row(const Ts&... fields) {
    std::string line;
    ((line += detail::csv_field(fields), line += ','), ...);
    if (!line.empty()) line.back() = '\n';
    out_ << line;
  }

 private:
  std::ofstream out_;
};

}  // namespace nhbath
