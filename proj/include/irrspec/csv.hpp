#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace irrspec {

inline constexpr std::string_view kCodeVersion = "0.1.0";

// Shortest round-trip decimal form of x.
std::string format_number(double x);

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view text) noexcept;

// Ordered key/value block written as `# key: value` lines above a CSV table.
class Provenance {
 public:
  // Starts with the code version and the fixed conventions.
  Provenance();
  void add(std::string key, std::string value);
  void add(std::string key, double value) { add(std::move(key), format_number(value)); }
  // Adds a config entry; config entries feed config_hash().
  void add_config(std::string key, std::string value);
  // FNV-1a of the config entries as `key=value` lines, in hex.
  std::string config_hash() const;
  const std::vector<std::pair<std::string, std::string>>& entries() const noexcept {
    return entries_;
  }
  void write(std::ostream& out) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::vector<std::pair<std::string, std::string>> config_;
};

using CsvRow = std::vector<std::string>;

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<CsvRow> rows;
  void add_row(std::vector<double> values);
};

void write_csv(std::ostream& out, const Provenance& provenance, const CsvTable& table);
// Creates parent directories as needed. Throws ParameterError when the file
// cannot be written.
void write_csv(const std::filesystem::path& path, const Provenance& provenance,
               const CsvTable& table);

// Reads a numeric CSV, skipping `#` lines; the first remaining line holds the
// column names. Throws ParameterError on malformed input.
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace irrspec
