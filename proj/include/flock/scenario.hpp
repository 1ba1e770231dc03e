#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "flock/initial.hpp"
#include "flock/particle.hpp"

namespace flock {

enum class Mode { particle, kinetic, hydro };

/// A parsed scenario document. Relative paths resolve against the directory
/// of the config file.
struct Scenario {
  Mode mode = Mode::particle;
  SimConfig sim;

  // Initial data: either a CSV of x_1..x_d, v_1..v_d rows or a generator.
  std::optional<std::filesystem::path> initial_csv;
  InitialDensitySpec generator;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  double csv_mass = 1.0;  // total weight given to CSV rows in kinetic modes

  std::vector<std::string> checks;  // empty means every default check of the mode
  std::filesystem::path output_dir = "out";
  std::size_t hydro_cells = 16;
  std::size_t histogram_cells = 0;  // 0 picks default_cells_per_dim
  std::size_t entropy_seeds = 8;
};

/// Throws ConfigError naming the offending field ("kernel.beta", ...).
Scenario parse_scenario(const std::string& json_text, const std::filesystem::path& base_dir = ".");
Scenario load_scenario(const std::filesystem::path& config_path);

/// Check names accepted in "envelopes" for a mode, in report order.
std::vector<std::string> default_checks(Mode mode);

enum class CheckStatus { pass, fail, skipped };

struct CheckResult {
  std::string name;
  std::string anchor;  // reference anchor, e.g. "Thm-flk-beta-lt-half"
  CheckStatus status = CheckStatus::skipped;
  std::optional<double> measured;
  std::optional<double> bound;
  std::optional<double> tolerance;
  std::string regime;
  std::string note;  // skip reason or extra detail
};

struct VerificationReport {
  std::string mode;
  std::vector<CheckResult> checks;

  bool passed() const;
};

/// Runs the scenario, writes diagnostics.csv, final_state.csv,
/// envelopes.json and verification.json (plus hydro_field.csv and
/// gamma_report.json in hydro mode) into output_dir, and returns the report.
VerificationReport verify_suite(const Scenario& scenario);

/// Envelope constants of the initial data as a JSON document, no
/// integration.
std::string envelope_report(const Scenario& scenario);

std::string report_json(const VerificationReport& report);

/// Exit codes of run_scenario.
inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

/// load_scenario + verify_suite with the exit-code contract; errors are
/// printed to stderr.
int run_scenario(const std::filesystem::path& config_path, std::optional<std::uint64_t> seed = {},
                 std::optional<std::filesystem::path> output_dir = {});

}  // namespace flock
