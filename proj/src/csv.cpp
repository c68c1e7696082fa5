#include "irrspec/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "irrspec/errors.hpp"

namespace irrspec {

std::string format_number(double x) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), x);
  return std::string(buffer, result.ptr);
}

std::uint64_t fnv1a(std::string_view text) noexcept {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

Provenance::Provenance() {
  add("code_version", std::string(kCodeVersion));
  add("fourier_convention",
      "C(t) = int psd(l) exp(i l t) dl; psd(l) = (1/2pi) int C(t) exp(-i l t) dt");
  add("synthesis", "zero-mean Gaussian");
}

void Provenance::add(std::string key, std::string value) {
  entries_.emplace_back(std::move(key), std::move(value));
}

void Provenance::add_config(std::string key, std::string value) {
  config_.emplace_back(key, value);
  add("config." + key, std::move(value));
}

std::string Provenance::config_hash() const {
  std::string text;
  for (const auto& [key, value] : config_) text += key + "=" + value + "\n";
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(fnv1a(text)));
  return buffer;
}

void Provenance::write(std::ostream& out) const {
  for (const auto& [key, value] : entries_) out << "# " << key << ": " << value << '\n';
  out << "# config_hash: " << config_hash() << '\n';
}

void CsvTable::add_row(std::vector<double> values) {
  CsvRow row;
  row.reserve(values.size());
  for (double v : values) row.push_back(format_number(v));
  rows.push_back(std::move(row));
}

namespace {

std::string quoted(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_csv(std::ostream& out, const Provenance& provenance, const CsvTable& table) {
  provenance.write(out);
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out << (c ? "," : "") << table.columns[c];
  }
  out << '\n';
  for (const CsvRow& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << quoted(row[c]);
    out << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const Provenance& provenance,
               const CsvTable& table) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("cannot open " + path.string() + " for writing");
  write_csv(out, provenance, table);
  if (!out) throw ParameterError("failed writing " + path.string());
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open " + path.string());
  CsvTable table;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::stringstream stream(line);
    std::string field;
    while (std::getline(stream, field, ',')) fields.push_back(field);
    if (header) {
      table.columns = std::move(fields);
      header = false;
      continue;
    }
    if (fields.size() != table.columns.size()) {
      throw ParameterError("row with " + std::to_string(fields.size()) + " fields in " +
                           path.string() + ", expected " +
                           std::to_string(table.columns.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  if (header) throw ParameterError(path.string() + " has no header line");
  return table;
}

}  // namespace irrspec
