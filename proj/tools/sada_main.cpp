#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "sada/sim/byte_report.hpp"
#include "sada/sim/compare.hpp"
#include "sada/sim/runner.hpp"

using namespace sada::sim;

namespace {

int cmd_run(const std::string& scenario, std::optional<uint64_t> seed, const std::string& out_path) {
  ScenarioConfig cfg = load_scenario(scenario);
  if (seed) cfg.seed = *seed;
  const auto t0 = std::chrono::steady_clock::now();
  const MetricsReport rep = run(cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::string text = rep.serialize();
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << text;
  }
  std::cerr << "cycles=" << rep.cycles.size() << " outcome=" << outcome_name(rep.outcome) << " time=" << secs
            << "s\n";
  for (const auto& f : rep.failures) std::cerr << "failure: " << f << "\n";
  for (const auto& d : rep.detections) {
    std::cerr << sada::protocol::attack_name(d.attack.kind) << " cycle " << d.attack.cycle << " actor "
              << d.attack.actor << ": " << (d.detected ? "detected" : "MISSED") << " by " << d.mechanism << " ("
              << d.detail << ")\n";
  }
  return rep.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vehicle-cluster aggregation simulator"};
  app.require_subcommand(1);

  std::string scenario, out_path;
  std::optional<uint64_t> seed;
  auto* run_cmd = app.add_subcommand("run", "run a scenario and write the metrics report");
  run_cmd->add_option("--scenario", scenario, "scenario JSON file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--seed", seed, "override the scenario seed");
  run_cmd->add_option("--out", out_path, "report file (stdout if omitted)");

  uint32_t n_v = 20, n_bad = 1, trials = 100;
  uint64_t cmp_seed = 1;
  bool as_json = false;
  auto* cmp_cmd = app.add_subcommand("compare-ident", "count verifications to locate invalid sub-approvals");
  cmp_cmd->add_option("--n-v", n_v, "cluster size")->check(CLI::Range(2, 255));
  cmp_cmd->add_option("--n-bad", n_bad, "corrupted sub-approvals per trial")->check(CLI::Range(0, 255));
  cmp_cmd->add_option("--trials", trials, "number of seeded trials")->check(CLI::Range(1, 1000000));
  cmp_cmd->add_option("--seed", cmp_seed, "trial seed");
  cmp_cmd->add_flag("--json", as_json, "print JSON instead of a table");

  std::string bytes_scenario;
  bool bytes_json = false;
  auto* bytes_cmd = app.add_subcommand("bytes", "per-message byte accounting");
  bytes_cmd->add_option("--scenario", bytes_scenario, "scenario JSON file")->required()->check(CLI::ExistingFile);
  bytes_cmd->add_flag("--json", bytes_json, "print JSON instead of a table");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(scenario, seed, out_path);
    if (*cmp_cmd) {
      if (n_bad > n_v) throw std::invalid_argument("--n-bad exceeds --n-v");
      const auto table = compare_identification(n_v, n_bad, trials, cmp_seed);
      std::cout << (as_json ? table.to_json().dump(2) + "\n" : table.format());
      return table.oracle_mismatches == 0 && table.location_failures == 0 ? 0 : 1;
    }
    if (*bytes_cmd) {
      const auto rep = byte_report(load_scenario(bytes_scenario));
      std::cout << (bytes_json ? rep.to_json().dump(2) + "\n" : rep.format());
      return rep.all_ok ? 0 : 1;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
