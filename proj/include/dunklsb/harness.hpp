#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dunklsb/coxeter.hpp"
#include "dunklsb/hermite.hpp"
#include "dunklsb/rational.hpp"

namespace dunklsb {

inline constexpr const char* kVersion = "0.1.0";

struct SuiteConfig {
  RootSystemSpec root_system;
  /// One rational string per root orbit.
  std::vector<std::string> mu;
  std::vector<Rational> t_values;
  int basis_degree = 6;
  int kernel_truncation = 24;
  BasisOrdering ordering = BasisOrdering::kGradedLex;
  /// Per check id; unknown ids are rejected.
  std::map<std::string, double> tolerances;
  int samples = 20;
  std::uint64_t seed = 1;
  std::string output;
};

/// Reads and validates. Throws ConfigError with the offending field.
SuiteConfig parse_config(const nlohmann::json& j);
SuiteConfig load_config(const std::string& path);
nlohmann::json config_to_json(const SuiteConfig& cfg);
/// D >= 2, truncation >= D + 4, t > 0, mu >= 0, samples > 0.
void validate(const SuiteConfig& cfg);

enum class CheckStatus { kPass, kFail, kSkipped, kError };
std::string to_string(CheckStatus s);

struct CheckResult {
  std::string id;
  std::string description;
  std::string anchor;
  CheckStatus status = CheckStatus::kSkipped;
  /// Exact checks carry the residual as a rational, others as a double.
  bool exact = false;
  std::optional<Rational> exact_residual;
  double residual = 0;
  double tolerance = 0;
  int samples = 0;
  double wall_seconds = 0;
  /// Skip reason or the captured error.
  std::string note;
};

struct Report {
  nlohmann::json config;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;
  /// Values computed and reported without a pass/fail gate.
  nlohmann::json observations = nlohmann::json::object();
  double setup_seconds = 0;

  int count(CheckStatus s) const;
  /// No failures and no infrastructure errors among the non-skipped checks.
  bool passed() const;
};

struct CatalogEntry {
  std::string id;
  std::string description;
  std::string anchor;
  double default_tolerance;  // 0 for exact checks
};
const std::vector<CatalogEntry>& check_catalog();

struct RunOptions {
  /// 0: DUNKLSB_THREADS if set, else hardware concurrency.
  unsigned threads = 0;
};

/// Runs every catalog check once, in catalog order in the report.
Report run_verification(const SuiteConfig& cfg, const RunOptions& opts = {});

enum class ReportFormat { kJson, kCsv, kText };
ReportFormat parse_report_format(const std::string& text);

nlohmann::json report_to_json(const Report& r);
std::string render_report(const Report& r, ReportFormat format);
/// Writes through a temporary file and a rename; throws IoError and leaves
/// nothing behind on failure.
void emit_report(const Report& r, ReportFormat format, const std::string& path);

/// Decimal with 17 significant digits.
std::string format_double(double v);

}  // namespace dunklsb
