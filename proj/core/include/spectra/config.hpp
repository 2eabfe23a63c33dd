#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "spectra/cocycle.hpp"

namespace spectra {

/// Parsed value of the small key/value configuration language: numbers,
/// quoted strings and flat arrays of either.
struct ConfigValue {
  using Array = std::vector<ConfigValue>;
  std::variant<double, std::string, Array> data;
  std::size_t line = 0;
  std::size_t column = 0;

  bool is_number() const { return std::holds_alternative<double>(data); }
  bool is_string() const { return std::holds_alternative<std::string>(data); }
  bool is_array() const { return std::holds_alternative<Array>(data); }
};

using ConfigSection = std::map<std::string, ConfigValue>;

/// `[section]` headers followed by `key = value` lines; `#` starts a comment.
/// Keys may be bare or quoted. Errors carry line and column.
std::map<std::string, ConfigSection> parse_config(std::string_view text);

/// Builds the system and cocycle from sections [system], [cocycle] and the
/// optional [bridges]:
///
///   [system]
///   alphabet = 2
///   forbidden = ["11"]            # or transitions = ["11", "10"]
///   [cocycle]
///   depth = 1
///   values = [-1.3862943611198906, 0.6931471805599453]
///   [bridges]
///   "0,1" = "0"                   # every ordered pair, common length
CenterCocycle model_from_config(std::string_view text);

/// Reads a file; throws ConfigError (line 0) when it cannot be opened.
std::string read_text_file(const std::string& path);

/// FNV-1a 64-bit hash, stable across platforms and runs.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace spectra
