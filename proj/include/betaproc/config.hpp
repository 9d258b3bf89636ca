#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace betaproc::cli {

enum class Experiment {
  sample,
  entry_density,
  eigen_jpdf,
  weights,
  converge,
  stationarity,
  limit_law,
  series_check,
};

enum class Process { hermite, laguerre };
enum class OutputFormat { csv, json };

/// Error in one configuration field; what() names the field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& message);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// One experiment. File form: `key = value` lines, `#` comments, lists
/// comma-separated. Every key has a default; to_text writes all of them.
struct ExperimentConfig {
  Experiment experiment = Experiment::sample;
  Process process = Process::hermite;
  std::vector<int> n{4};
  double beta = 2.0;
  double a = 0.0;
  std::vector<double> t{1.0};
  int replicates = 100;
  std::uint64_t seed = 0;
  std::string out = "out";
  int threads = 0;
  OutputFormat format = OutputFormat::csv;
  /// Entry index (converge) or partial-sum length (weights), 1-based.
  int k = 1;
  double alpha = 0.01;
  double epsilon = 0.05;
  /// converge: diag | offdiag | wishart_diag | wishart_offdiag.
  std::string entry = "diag";
  /// limit-law: spectral | empirical | singular.
  std::string measure = "empirical";
  /// weights on the Laguerre process: plain | symmetrized.
  std::string weights = "plain";
  /// sample: also write eigenvalue and weight tables.
  bool spectral = false;
  /// Bessel dimension for stationarity and series-check.
  double delta = 3.0;
  std::vector<double> x{0.5, 1.0, 2.0};
  std::vector<double> x0{0.0, 1.0};
  int terms = 50;

  /// Throws ConfigError naming the first bad field.
  void validate() const;
  bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
/// Canonical file form; parse_config(to_text(c)) == c.
std::string to_text(const ExperimentConfig& c);
/// Commented template with every default.
std::string template_text();
/// FNV-1a 64 of the canonical text without `out` and `threads`, which cannot
/// change results. 16 hex digits.
std::string config_hash(const ExperimentConfig& c);

std::string to_string(Experiment e);
std::string to_string(Process p);

}  // namespace betaproc::cli
