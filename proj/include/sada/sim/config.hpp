#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sada/protocol/cycle.hpp"

namespace sada::sim {

/// Validation failure; path names the offending field, e.g. "attacks[1].actor".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct ScenarioConfig {
  uint64_t seed = 1;
  uint32_t n_v = 20;
  uint32_t t_sm = 10;
  uint32_t cycles = 5;
  std::string group = "secp256k1";
  uint64_t p_mk = masking::kDefaultMaskModulus;
  uint64_t p_sm = masking::kDefaultShareField;
  std::string pke = "hybrid";
  uint32_t t_aud = 1;
  uint64_t freshness_window = 120;
  uint64_t data_bound = 1000;
  bool byte_accounting = false;
  std::vector<protocol::AttackSpec> attacks;
  bool attacks_expected = true;

  protocol::WorldConfig world() const;
};

/// Byte-accounting mode switches the defaults to RSA-2048 and 16-bit
/// moduli; explicit fields still win.
inline constexpr uint64_t kAccountingMaskModulus = 65519;
inline constexpr uint64_t kAccountingShareField = 65521;

/// Parses and validates. Unknown fields are rejected.
ScenarioConfig parse_scenario(const nlohmann::json& j);
ScenarioConfig load_scenario(const std::string& path);
nlohmann::json to_json(const ScenarioConfig& cfg);
void validate(const ScenarioConfig& cfg);

}  // namespace sada::sim
