#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "sada/protocol/cycle.hpp"
#include "sada/sim/config.hpp"

namespace sada::sim {

inline constexpr const char* kMetricsSchema = "sada.metrics/1";

enum class RunOutcome { Clean, AttacksDetected, Failure };
std::string outcome_name(RunOutcome o);

/// How one injected attack was caught, or why it was not.
struct Detection {
  protocol::AttackSpec attack;
  std::string mechanism;  // "precheck", "aggregation" or "audit"
  bool detected = false;
  std::optional<uint32_t> detected_in_cycle;
  std::string detail;
};

struct MetricsReport {
  ScenarioConfig config;
  std::vector<protocol::CycleOutcome> cycles;
  std::vector<Detection> detections;
  std::vector<std::string> failures;  // events no injected attack explains
  RunOutcome outcome = RunOutcome::Clean;

  /// 0 clean, 2 attacks detected as the scenario expects, 1 otherwise.
  int exit_code() const;
  nlohmann::json to_json() const;
  /// Pretty JSON plus trailing newline; identical for identical runs.
  std::string serialize() const;
};

nlohmann::json cycle_json(const protocol::CycleOutcome& c);

}  // namespace sada::sim
