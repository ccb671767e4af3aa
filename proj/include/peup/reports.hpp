#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "peup/extremal_search.hpp"
#include "peup/inequality_verifier.hpp"
#include "peup/judge_variance.hpp"
#include "peup/periodic_state.hpp"

namespace peup::reports {

enum ExitCode : int {
  kSuccess = 0,
  kBoundViolation = 1,
  kConfigError = 2,
  kIoError = 3,
  kSearchFailure = 4,
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 17 significant digits, lowercase scientific ("%.16e").
std::string format_number(double value);

/// Flat key-value run description; see README for the schema.
struct RunConfig {
  std::optional<double> length;  // defaults to 1, or 2 pi for the angular subcommand
  int grid_points = 256;
  double hbar = 1.0;

  std::string kind = "band_limited_random";
  int n = 0;                          // momentum_eigenstate
  double center = 0.0;                // wrapped_gaussian
  double sigma = 0.05;                // wrapped_gaussian
  int band_limit = 8;                 // band_limited_random and extremal search
  std::vector<Complex> coefficients;  // fourier_ansatz, n = -m .. m
  int count = 1;
  std::uint64_t seed = 0;
  int profile_resolution = 0;  // 0 selects grid_points

  int restarts = 32;
  int max_iterations = 40000;
  double tolerance = 1e-10;
  double denominator_floor = 1e-4;
  long long oracle_samples = 0;
  double oracle_margin = 1e-3;

  std::string output;
  std::string format;  // "csv" | "json"; empty selects the subcommand default

  bool operator==(const RunConfig&) const = default;
};

/// Throws ConfigError on unknown keys, wrong types or invalid values.
RunConfig config_from_json(const nlohmann::json& json);
nlohmann::json config_to_json(const RunConfig& config);
RunConfig load_config(const std::string& path);

PeriodicDomain make_domain(const RunConfig& config, double default_length = 1.0);
EnsembleSpec make_ensemble(const RunConfig& config);
SearchConfig make_search_config(const RunConfig& config);

struct VerifyRow {
  std::size_t index = 0;
  std::uint64_t member_seed = 0;
  UncertaintyReport report;
};

struct AngularRow {
  std::size_t index = 0;
  std::uint64_t member_seed = 0;
  AngularReport report;
};

struct ExtremalReport {
  SearchConfig search;
  SearchResult result;
  double reevaluated_ratio = 0.0;
  std::optional<OracleResult> oracle;
  long long oracle_samples = 0;
  double oracle_threshold = 0.0;
  ConstantComparison comparison;
};

std::string verify_csv(const RunConfig& config, const std::vector<VerifyRow>& rows);
std::string verify_json(const RunConfig& config, const std::vector<VerifyRow>& rows);
std::string angular_csv(const RunConfig& config, const std::vector<AngularRow>& rows);
std::string angular_json(const RunConfig& config, const std::vector<AngularRow>& rows);
std::string profile_csv(const RunConfig& config, const VarianceProfile& profile);
std::string profile_json(const RunConfig& config, const VarianceProfile& profile);
std::string extremal_json(const ExtremalReport& report);

/// Evaluates every ensemble member; rows come back in member order.
std::vector<VerifyRow> run_verify(const RunConfig& config);
std::vector<AngularRow> run_angular(const RunConfig& config);
ExtremalReport run_extremal(const RunConfig& config);

/// Command-line entry point: `peup <verify|profile|extremal|angular>
/// --config PATH [--out PATH] [--format csv|json] [--seed INT]`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace peup::reports
