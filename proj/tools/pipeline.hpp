#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace spectra::cli {

using Json = nlohmann::ordered_json;

enum class Format { kCsv, kJson };

/// Bad flags, unreadable inputs, unsupported requests. Exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything a command needs. Unset optionals fall back to the matching key
/// of the config file, then to the built-in default.
struct RunConfig {
  std::string command;
  std::string config_path;
  std::optional<Format> format;
  std::string output;  // empty: stdout
  std::optional<std::uint64_t> seed;

  // pressure / spectrum
  std::optional<double> q_min, q_max;
  std::optional<std::size_t> q_points;
  std::optional<std::size_t> alpha_points;
  std::optional<std::string> restriction;
  bool oracle = false;

  // skeleton
  std::optional<double> alpha, eps_E, eps_H, K0;
  std::optional<std::size_t> m;
  std::optional<int> res_j;
  std::string words_out;

  // schedule / build-set / verify
  std::optional<std::vector<double>> eps;
  std::optional<std::size_t> levels;
  std::optional<std::string> sign;
  std::optional<std::uint64_t> budget;
  std::optional<std::size_t> sample;
  std::optional<std::size_t> envelope_samples;
  bool backward = false;
  std::string tower_path;
  std::optional<double> theta;

  // entropy
  std::string input;
  std::optional<std::string> n_range;
  std::optional<std::string> method;
};

struct Report {
  std::string command;
  Json body;
  /// Rows of the tabular view; empty header means no CSV view.
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;
  std::vector<std::string> failures;

  int exit_code() const { return failures.empty() ? 0 : 1; }
};

/// Runs one command. Throws UsageError, spectra::ConfigError and
/// spectra::InvalidArgument for bad requests; other spectra::Error types
/// escape from the computation itself.
Report run_pipeline(const RunConfig& cfg);

/// The default format of a command: CSV for curves, JSON otherwise.
Format default_format(const std::string& command);

/// Whether a command has a tabular view.
bool has_csv(const std::string& command);

/// Serialized report. Throws UsageError when CSV is requested for a command
/// without a tabular view.
std::string render(const Report& report, Format format);

/// Report for a computation that threw: status, failure list, no data.
Report failure_report(const RunConfig& cfg, const std::string& kind, const std::string& what);

/// Double formatted for CSV with round-trip precision.
std::string fmt(double x);

}  // namespace spectra::cli
