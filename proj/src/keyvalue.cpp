#include "keyvalue.hpp"

#include <algorithm>
#include <charconv>

#include "irrspec/errors.hpp"

namespace irrspec::detail {

std::optional<std::string> ParsedId::find(std::string_view key) const {
  for (const auto& [k, v] : fields) {
    if (k == key) return v;
  }
  return std::nullopt;
}

double ParsedId::number(std::string_view key) const {
  const auto value = find(key);
  if (!value) {
    throw ParameterError("'" + name + "' needs " + std::string(key) + "=<value>");
  }
  return parse_number(*value, key);
}

double ParsedId::number_or(std::string_view key, double fallback) const {
  const auto value = find(key);
  return value ? parse_number(*value, key) : fallback;
}

void ParsedId::expect_only(std::initializer_list<std::string_view> allowed) const {
  for (const auto& [k, v] : fields) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      throw ParameterError("'" + name + "' does not take a '" + k + "' field");
    }
  }
}

ParsedId parse_id(std::string_view text, std::string_view greedy_key) {
  ParsedId out;
  const auto colon = text.find(':');
  out.name = std::string(text.substr(0, colon));
  if (out.name.empty()) throw ParameterError("empty identifier");
  if (colon == std::string_view::npos) return out;

  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto eq = rest.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw ParameterError("malformed field in '" + std::string(text) + "'");
    }
    std::string key(rest.substr(0, eq));
    rest.remove_prefix(eq + 1);
    std::string_view value;
    if (!greedy_key.empty() && key == greedy_key) {
      value = rest;
      rest = {};
    } else {
      const auto comma = rest.find(',');
      value = rest.substr(0, comma);
      rest = comma == std::string_view::npos ? std::string_view{}
                                             : rest.substr(comma + 1);
    }
    if (value.empty()) {
      throw ParameterError("field '" + key + "' has no value in '" +
                           std::string(text) + "'");
    }
    out.fields.emplace_back(std::move(key), std::string(value));
  }
  return out;
}

double parse_number(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParameterError("cannot parse '" + std::string(text) + "' as a number for " +
                         std::string(what));
  }
  return value;
}

}  // namespace irrspec::detail
