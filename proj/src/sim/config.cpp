#include "sada/sim/config.hpp"

#include <fstream>
#include <set>

#include "sada/crypto/group.hpp"
#include "sada/crypto/pke.hpp"

namespace sada::sim {

using nlohmann::json;

namespace {

const std::set<std::string> kTopFields = {
    "seed", "n_v", "t_sm", "cycles", "group", "p_mk", "p_sm", "pke", "t_aud",
    "freshness_window", "data_bound", "byte_accounting", "attacks", "attacks_expected"};
const std::set<std::string> kAttackFields = {"kind", "cycle", "actor"};

uint64_t get_uint(const json& j, const std::string& path, uint64_t max) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<int64_t>() >= 0)) {
    throw ConfigError(path, "expected a non-negative integer");
  }
  const uint64_t v = j.get<uint64_t>();
  if (v > max) throw ConfigError(path, "value " + std::to_string(v) + " exceeds " + std::to_string(max));
  return v;
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

bool get_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw ConfigError(path, "expected true or false");
  return j.get<bool>();
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& prefix) {
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw ConfigError(prefix + key, "unknown field");
  }
}

}  // namespace

protocol::WorldConfig ScenarioConfig::world() const {
  protocol::WorldConfig w;
  w.group = group;
  w.params = {p_mk, p_sm, t_sm, n_v};
  w.pke = pke;
  w.t_aud = t_aud;
  w.freshness_window = freshness_window;
  w.data_bound = data_bound;
  return w;
}

void validate(const ScenarioConfig& cfg) {
  if (cfg.n_v < 2 || cfg.n_v > 255) throw ConfigError("n_v", "must be in [2, 255]");
  if (cfg.n_v == 2 ? cfg.t_sm != 1 : (cfg.t_sm < 2 || cfg.t_sm >= cfg.n_v)) {
    throw ConfigError("t_sm", "must satisfy 2 <= t_sm < n_v (t_sm = 1 when n_v = 2)");
  }
  if (cfg.cycles == 0) throw ConfigError("cycles", "must be at least 1");
  try {
    group_by_name(cfg.group);
  } catch (const std::invalid_argument&) {
    throw ConfigError("group", "unknown group '" + cfg.group + "'");
  }
  try {
    make_pke(cfg.pke);
  } catch (const std::invalid_argument&) {
    throw ConfigError("pke", "unknown scheme '" + cfg.pke + "'");
  }
  try {
    masking::MaskingParams{cfg.p_mk, cfg.p_sm, cfg.t_sm, cfg.n_v}.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("p_sm", e.what());
  }
  if (cfg.p_mk < 2) throw ConfigError("p_mk", "must be at least 2");
  if (cfg.data_bound == 0) throw ConfigError("data_bound", "must be positive");
  if (cfg.t_aud == 0) throw ConfigError("t_aud", "must be at least 1");
  if (cfg.freshness_window == 0) throw ConfigError("freshness_window", "must be positive");

  std::set<std::pair<uint32_t, int>> head_attacks;
  for (size_t i = 0; i < cfg.attacks.size(); ++i) {
    const auto& a = cfg.attacks[i];
    const std::string p = "attacks[" + std::to_string(i) + "]";
    if (a.actor >= cfg.n_v) throw ConfigError(p + ".actor", "must be < n_v (" + std::to_string(cfg.n_v) + ")");
    if (a.cycle >= cfg.cycles) throw ConfigError(p + ".cycle", "must be < cycles (" + std::to_string(cfg.cycles) + ")");
    if (a.kind == protocol::AttackKind::SelfKeyApproval && a.cycle + 1 >= cfg.cycles) {
      throw ConfigError(p + ".cycle", "self_key_approval needs a later cycle for the audit");
    }
    if (a.kind != protocol::AttackKind::InvalidSubApproval) {
      for (const auto& b : cfg.attacks) {
        if (&b != &a && b.cycle == a.cycle && b.kind != protocol::AttackKind::InvalidSubApproval) {
          throw ConfigError(p + ".kind", "at most one head-side attack per cycle");
        }
      }
    }
  }
}

ScenarioConfig parse_scenario(const json& j) {
  if (!j.is_object()) throw ConfigError("$", "scenario must be a JSON object");
  reject_unknown(j, kTopFields, "");
  ScenarioConfig cfg;
  if (j.contains("byte_accounting")) cfg.byte_accounting = get_bool(j["byte_accounting"], "byte_accounting");
  if (cfg.byte_accounting) {
    cfg.pke = "rsa2048";
    cfg.p_mk = kAccountingMaskModulus;
    cfg.p_sm = kAccountingShareField;
  }
  constexpr uint64_t u32max = 0xFFFFFFFFu;
  if (j.contains("seed")) cfg.seed = get_uint(j["seed"], "seed", UINT64_MAX);
  if (j.contains("n_v")) cfg.n_v = static_cast<uint32_t>(get_uint(j["n_v"], "n_v", u32max));
  if (j.contains("t_sm")) cfg.t_sm = static_cast<uint32_t>(get_uint(j["t_sm"], "t_sm", u32max));
  if (j.contains("cycles")) cfg.cycles = static_cast<uint32_t>(get_uint(j["cycles"], "cycles", 100000));
  if (j.contains("group")) cfg.group = get_string(j["group"], "group");
  if (j.contains("p_mk")) cfg.p_mk = get_uint(j["p_mk"], "p_mk", (uint64_t{1} << 63) - 1);
  if (j.contains("p_sm")) cfg.p_sm = get_uint(j["p_sm"], "p_sm", (uint64_t{1} << 63) - 1);
  if (j.contains("pke")) cfg.pke = get_string(j["pke"], "pke");
  if (j.contains("t_aud")) cfg.t_aud = static_cast<uint32_t>(get_uint(j["t_aud"], "t_aud", u32max));
  if (j.contains("freshness_window")) cfg.freshness_window = get_uint(j["freshness_window"], "freshness_window", u32max);
  if (j.contains("data_bound")) cfg.data_bound = get_uint(j["data_bound"], "data_bound", UINT64_MAX);
  if (j.contains("attacks_expected")) cfg.attacks_expected = get_bool(j["attacks_expected"], "attacks_expected");
  if (j.contains("attacks")) {
    const json& list = j["attacks"];
    if (!list.is_array()) throw ConfigError("attacks", "expected an array");
    for (size_t i = 0; i < list.size(); ++i) {
      const std::string p = "attacks[" + std::to_string(i) + "]";
      const json& a = list[i];
      if (!a.is_object()) throw ConfigError(p, "expected an object");
      reject_unknown(a, kAttackFields, p + ".");
      for (const char* f : {"kind", "cycle", "actor"}) {
        if (!a.contains(f)) throw ConfigError(p + "." + f, "missing");
      }
      protocol::AttackSpec spec;
      const std::string kind = get_string(a["kind"], p + ".kind");
      auto parsed = protocol::parse_attack_kind(kind);
      if (!parsed) throw ConfigError(p + ".kind", "unknown attack '" + kind + "'");
      spec.kind = *parsed;
      spec.cycle = static_cast<uint32_t>(get_uint(a["cycle"], p + ".cycle", u32max));
      spec.actor = static_cast<uint32_t>(get_uint(a["actor"], p + ".actor", u32max));
      cfg.attacks.push_back(spec);
    }
  }
  validate(cfg);
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("$", "cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("$", std::string("invalid JSON: ") + e.what());
  }
  return parse_scenario(j);
}

json to_json(const ScenarioConfig& cfg) {
  json attacks = json::array();
  for (const auto& a : cfg.attacks) {
    attacks.push_back({{"kind", protocol::attack_name(a.kind)}, {"cycle", a.cycle}, {"actor", a.actor}});
  }
  return {{"seed", cfg.seed},
          {"n_v", cfg.n_v},
          {"t_sm", cfg.t_sm},
          {"cycles", cfg.cycles},
          {"group", cfg.group},
          {"p_mk", cfg.p_mk},
          {"p_sm", cfg.p_sm},
          {"pke", cfg.pke},
          {"t_aud", cfg.t_aud},
          {"freshness_window", cfg.freshness_window},
          {"data_bound", cfg.data_bound},
          {"byte_accounting", cfg.byte_accounting},
          {"attacks", attacks},
          {"attacks_expected", cfg.attacks_expected}};
}

}  // namespace sada::sim
