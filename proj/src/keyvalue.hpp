#pragma once

// Parsing of identifiers of the form `name:key=value,key=value`.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace irrspec::detail {

struct ParsedId {
  std::string name;
  std::vector<std::pair<std::string, std::string>> fields;

  std::optional<std::string> find(std::string_view key) const;
  double number(std::string_view key) const;
  double number_or(std::string_view key, double fallback) const;
  // Throws ParameterError naming the first field not in `allowed`.
  void expect_only(std::initializer_list<std::string_view> allowed) const;
};

// `greedy_key`, when it appears, swallows the remainder of the string so that
// nested identifiers containing commas can be passed as a value.
ParsedId parse_id(std::string_view text, std::string_view greedy_key = {});

// Parses a double and throws ParameterError on trailing garbage.
double parse_number(std::string_view text, std::string_view what);

}  // namespace irrspec::detail
