// Payload sweep of underlay vs orthogonal discovery power and efficiency.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "d2d/d2d.hpp"

namespace {

enum ExitCode : int {
  kOk = 0,
  kRuntimeFailure = 1,
  kConfigError = 2,
  kInvariantViolation = 3,
  kIoError = 4,
};

int fail(const char* failure_class, const std::string& message, int code) {
  std::cerr << "d2d_sweep: " << failure_class << ": " << message << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Underlay D2D discovery: downlink power and energy per bit versus announcer payload"};
  std::string config_path;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  std::string schemes;
  bool analytic_only = false;
  std::string out_path;
  std::string plot_path;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());

  app.add_option("--config", config_path, "Scenario file (key = value); defaults apply when omitted");
  auto* seed_opt = app.add_option("--seed", seed, "Monte Carlo seed");
  auto* trials_opt = app.add_option("--trials", trials, "Monte Carlo trials per payload point");
  auto* schemes_opt = app.add_option("--schemes", schemes, "Comma list of underlay,orthogonal");
  app.add_flag("--analytic-only", analytic_only, "Skip the Monte Carlo runs");
  app.add_option("--out", out_path, "CSV output path (stdout when omitted)");
  app.add_option("--plot-script", plot_path, "Also write a matplotlib script for the CSV");
  app.add_option("--threads", threads, "Monte Carlo worker threads")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  d2d::ScenarioConfig cfg;
  try {
    cfg = config_path.empty() ? d2d::parse_config("") : d2d::load_config(config_path);
    if (*seed_opt) cfg.seed = seed;
    if (*trials_opt) cfg.trials = trials;
    if (*schemes_opt) cfg.schemes = d2d::detail::parse_schemes(schemes);
    if (analytic_only) {
      cfg.analytic = true;
      cfg.monte_carlo = false;
    }
    cfg.validate();
  } catch (const d2d::ConfigParseError& e) {
    return fail("config-error", e.what(), kConfigError);
  } catch (const d2d::ValidationError& e) {
    return fail("config-error", e.what(), kConfigError);
  } catch (const std::invalid_argument& e) {
    return fail("config-error", e.what(), kConfigError);
  }

  std::vector<d2d::SweepRow> rows;
  try {
    rows = d2d::run_sweep(cfg, threads);
  } catch (const std::exception& e) {
    return fail("runtime-failure", e.what(), kRuntimeFailure);
  }

  try {
    if (out_path.empty()) {
      d2d::write_csv(std::cout, cfg, rows);
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) return fail("io-error", "cannot open '" + out_path + "'", kIoError);
      d2d::write_csv(out, cfg, rows);
      if (!out) return fail("io-error", "failed writing '" + out_path + "'", kIoError);
    }
    if (!plot_path.empty()) d2d::emit_plot_script(rows, out_path.empty() ? "sweep.csv" : out_path, plot_path);
  } catch (const std::exception& e) {
    return fail("io-error", e.what(), kIoError);
  }

  for (const auto& r : rows) {
    if (!r.empirical) continue;
    if (r.empirical->downlink_decode_failures != 0)
      return fail("invariant-violation",
                  std::to_string(r.empirical->downlink_decode_failures) + " downlink decode failures at " +
                      d2d::format_double(r.payload_bytes) + " B (" + std::string(d2d::to_string(r.scheme)) + ")",
                  kInvariantViolation);
    if (r.empirical->announcer_rule_mismatches != 0)
      return fail("invariant-violation",
                  std::to_string(r.empirical->announcer_rule_mismatches) + " announcer decodability mismatches at " +
                      d2d::format_double(r.payload_bytes) + " B (" + std::string(d2d::to_string(r.scheme)) + ")",
                  kInvariantViolation);
  }
  return kOk;
}
