// flockctl: run, verify or inspect a scenario config.
#include <omp.h>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "flock/error.hpp"
#include "flock/io.hpp"
#include "flock/scenario.hpp"

namespace {

struct Options {
  std::string config;
  std::string output;
  int threads = 0;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Options& o, bool outputs) {
  cmd->add_option("--config", o.config, "Scenario JSON")->required()->check(CLI::ExistingFile);
  if (outputs) cmd->add_option("--output", o.output, "Output directory (overrides output_dir)");
  cmd->add_option("--threads", o.threads, "OpenMP threads (0 keeps the runtime default)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", o.seed, "Seed for generated initial data (overrides initial.seed)");
}

const char* status_name(flock::CheckStatus s) {
  switch (s) {
    case flock::CheckStatus::pass: return "PASS";
    case flock::CheckStatus::fail: return "FAIL";
    case flock::CheckStatus::skipped: return "SKIP";
  }
  return "";
}

std::string number(const std::optional<double>& x) { return x ? flock::format_double(*x) : "-"; }

int run(const Options& o, bool verbose) {
  if (o.threads > 0) omp_set_num_threads(o.threads);
  try {
    flock::Scenario s = flock::load_scenario(o.config);
    if (o.seed) s.seed = *o.seed;
    if (!o.output.empty()) s.output_dir = o.output;
    const flock::VerificationReport report = flock::verify_suite(s);
    std::size_t failed = 0;
    for (const auto& c : report.checks) {
      failed += c.status == flock::CheckStatus::fail;
      if (verbose) {
        std::cout << status_name(c.status) << "  " << c.name << " [" << c.anchor << "] measured=" << number(c.measured)
                  << " bound=" << number(c.bound) << " tol=" << number(c.tolerance);
        if (!c.note.empty()) std::cout << "  " << c.note;
        std::cout << "\n";
      }
    }
    std::cout << report.mode << ": " << report.checks.size() << " checks, " << failed << " failed; outputs in "
              << s.output_dir.string() << "\n";
    return report.passed() ? flock::kExitPass : flock::kExitCheckFailed;
  } catch (const flock::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return flock::kExitConfig;
  } catch (const flock::SpecError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return flock::kExitConfig;
  } catch (const flock::OverflowError& e) {
    std::cerr << "numerical failure at t = " << flock::format_double(e.time()) << ": " << e.what() << "\n";
    return flock::kExitNumeric;
  } catch (const flock::Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return flock::kExitNumeric;
  }
}

int envelope(const Options& o) {
  try {
    flock::Scenario s = flock::load_scenario(o.config);
    if (o.seed) s.seed = *o.seed;
    std::cout << flock::envelope_report(s);
    return flock::kExitPass;
  } catch (const flock::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return flock::kExitConfig;
  } catch (const flock::SpecError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return flock::kExitConfig;
  } catch (const flock::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return flock::kExitNumeric;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cucker-Smale particle, kinetic and hydrodynamic scenario runner"};
  app.require_subcommand(1);
  Options sim, ver, env;
  add_common(app.add_subcommand("simulate", "Run a scenario and write its outputs"), sim, true);
  add_common(app.add_subcommand("verify", "Run a scenario and print every check"), ver, true);
  add_common(app.add_subcommand("envelope", "Print the envelope constants of the initial data"), env, false);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : flock::kExitConfig;
  }
  if (app.got_subcommand("simulate")) return run(sim, false);
  if (app.got_subcommand("verify")) return run(ver, true);
  return envelope(env);
}
