#include "sada/sim/byte_report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "sada/protocol/cycle.hpp"
#include "sada/schnorr/schnorr.hpp"

namespace sada::sim {

namespace {

ByteRow exact(std::string item, uint64_t computed, uint64_t expected, std::optional<uint64_t> reference,
              std::string note = {}) {
  ByteRow r{std::move(item), computed, reference, expected, expected, true, computed == expected, std::move(note)};
  return r;
}

ByteRow within_2x(std::string item, uint64_t computed, uint64_t reference, std::string note = {}) {
  ByteRow r{std::move(item), computed, reference, (reference + 1) / 2, 2 * reference, true, false, std::move(note)};
  r.ok = computed >= r.low && computed <= r.high;
  return r;
}

ByteRow info(std::string item, uint64_t computed, std::optional<uint64_t> reference, std::string note) {
  ByteRow r{std::move(item), computed, reference, 0, 0, false, true, std::move(note)};
  return r;
}

}  // namespace

ByteReport byte_report(const ScenarioConfig& cfg_in) {
  ScenarioConfig cfg = cfg_in;
  cfg.attacks.clear();
  cfg.cycles = std::max<uint32_t>(cfg.cycles, 2);
  validate(cfg);
  protocol::World world(cfg.world(), cfg.seed);

  std::map<std::string, uint64_t> sizes;
  uint64_t m3_steady = 0, records = 0, m_i_wire = 0, sub_wire = 0;
  for (uint32_t c = 0; c < cfg.cycles; ++c) {
    auto out = world.run_cycle(c);
    if (!out.completed) throw std::runtime_error("byte accounting cycle aborted at " + out.abort_stage);
    for (const auto& [k, v] : out.sizes) sizes[k] = v;
    m_i_wire = out.messages.at(protocol::MsgType::Reveal).max_bytes;
    sub_wire = out.messages.at(protocol::MsgType::SubApproval).max_bytes;
    if (c > 0 && out.sizes.at("m3_CH") > m3_steady) {
      m3_steady = out.sizes.at("m3_CH");
      records = out.sizes.at("records");
    }
  }

  ByteReport rep;
  rep.config = cfg;
  const uint64_t n = cfg.n_v;
  rep.rows.push_back(exact("com_i", sizes.at("com_i"), 32, 32, "SHA-256 digest"));
  rep.rows.push_back(exact("L_com", sizes.at("L_com"), 32 * n, n == 20 ? std::optional<uint64_t>(640) : std::nullopt,
                           "n_v x 32"));
  rep.rows.push_back(within_2x("m_i", sizes.at("m_i"), 370,
                               std::to_string(cfg.world().params.share_width()) + "-byte shares, " +
                                   std::to_string(cfg.world().nonce_batch) + " nonces; excludes envelope"));
  rep.rows.push_back(within_2x("m2_CH", sizes.at("m2_CH"), 864, "encrypted frame, avg under " + cfg.pke));
  rep.rows.push_back(within_2x("m3_CH", m3_steady, 1024,
                               "steady state, " + std::to_string(records) + " records of 64 bytes"));
  rep.rows.push_back(info("signature", schnorr::kSignatureBytes, 48,
                          "s (32) + compressed R (33); the 48-byte reference figure is not reachable with R on the wire"));
  rep.rows.push_back(info("m_i envelope", m_i_wire, std::nullopt, "header, piggybacked records, signature, AEAD tag"));
  rep.rows.push_back(info("sub-approval envelope", sub_wire, std::nullopt, "s and R~ plus envelope"));
  rep.rows.push_back(info("session keys", sizes.at("session_keys"), std::nullopt, "E_pkr(key1 || key2)"));
  rep.all_ok = std::all_of(rep.rows.begin(), rep.rows.end(), [](const ByteRow& r) { return r.ok; });
  return rep;
}

nlohmann::json ByteReport::to_json() const {
  nlohmann::json rows_j = nlohmann::json::array();
  for (const auto& r : rows) {
    rows_j.push_back({{"item", r.item},
                      {"computed", r.computed},
                      {"reference", r.reference ? nlohmann::json(*r.reference) : nlohmann::json(nullptr)},
                      {"checked", r.checked},
                      {"low", r.low},
                      {"high", r.high},
                      {"ok", r.ok},
                      {"note", r.note}});
  }
  return {{"scenario", sim::to_json(config)}, {"rows", rows_j}, {"all_ok", all_ok}};
}

std::string ByteReport::format() const {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-22s %9s %9s %13s %-6s %s\n", "message", "bytes", "reference", "accepted",
                "status", "note");
  out << line;
  for (const auto& r : rows) {
    const std::string ref = r.reference ? std::to_string(*r.reference) : "-";
    std::string range = "-";
    if (r.checked) range = r.low == r.high ? "=" + std::to_string(r.low) : std::to_string(r.low) + ".." + std::to_string(r.high);
    std::string status = !r.checked ? "info" : (r.ok ? "ok" : "FAIL");
    std::string note = r.note;
    if (r.reference && *r.reference != r.computed) {
      const long long diff = static_cast<long long>(r.computed) - static_cast<long long>(*r.reference);
      note += " (" + std::string(diff > 0 ? "+" : "") + std::to_string(diff) + " vs reference)";
    }
    std::snprintf(line, sizeof line, "%-22s %9llu %9s %13s %-6s %s\n", r.item.c_str(),
                  static_cast<unsigned long long>(r.computed), ref.c_str(), range.c_str(), status.c_str(),
                  note.c_str());
    out << line;
  }
  out << (all_ok ? "all checked sizes within range\n" : "some sizes out of range\n");
  return out.str();
}

}  // namespace sada::sim
