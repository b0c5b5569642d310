#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sada/sim/config.hpp"

namespace sada::sim {

struct ByteRow {
  std::string item;
  uint64_t computed = 0;
  std::optional<uint64_t> reference;  // published figure, when there is one
  uint64_t low = 0;                   // accepted range [low, high]
  uint64_t high = 0;
  bool checked = true;                // informational rows are not checked
  bool ok = true;
  std::string note;
};

struct ByteReport {
  ScenarioConfig config;
  std::vector<ByteRow> rows;
  bool all_ok = true;

  nlohmann::json to_json() const;
  std::string format() const;
};

/// Runs the scenario without attacks (at least two cycles, so m3 carries a
/// full record list) and measures every message against its reference.
ByteReport byte_report(const ScenarioConfig& cfg);

}  // namespace sada::sim
