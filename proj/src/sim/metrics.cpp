#include "sada/sim/metrics.hpp"

namespace sada::sim {

using nlohmann::json;

std::string outcome_name(RunOutcome o) {
  switch (o) {
    case RunOutcome::Clean: return "clean";
    case RunOutcome::AttacksDetected: return "attacks_detected";
    case RunOutcome::Failure: return "failure";
  }
  return "failure";
}

int MetricsReport::exit_code() const {
  switch (outcome) {
    case RunOutcome::Clean: return 0;
    case RunOutcome::AttacksDetected: return config.attacks_expected ? 2 : 1;
    case RunOutcome::Failure: return 1;
  }
  return 1;
}

namespace {

json avg_json(const approval::AverageValue& a) {
  return {{"sum", a.sum}, {"count", a.count}, {"mean", a.mean()}};
}

}  // namespace

json cycle_json(const protocol::CycleOutcome& c) {
  json messages = json::object();
  for (const auto& [type, st] : c.messages) {
    messages[protocol::msg_type_name(type)] = {{"count", st.count}, {"bytes", st.bytes}, {"max_bytes", st.max_bytes}};
  }
  json flags = json::array();
  for (const auto& uid : c.flagged_uids) flags.push_back(to_hex(uid));
  json abort = nullptr;
  if (!c.abort_stage.empty()) {
    abort = {{"stage", c.abort_stage}, {"reason", c.abort_reason}, {"culprit", nullptr}};
    if (c.culprit) abort["culprit"] = *c.culprit;
  }
  return {
      {"cycle", c.cycle},
      {"head", c.head},
      {"uid", to_hex(c.uid)},
      {"attacks", c.attacks},
      {"status", c.completed ? "completed" : "aborted"},
      {"abort", abort},
      {"average", c.server_avg ? avg_json(*c.server_avg) : json(nullptr)},
      {"expected_average", avg_json(c.expected_avg)},
      {"average_correct", c.server_avg && *c.server_avg == c.expected_avg},
      {"excluded", c.excluded},
      {"final_members", c.final_members.size()},
      {"report", {{"accepted", c.report_accepted}, {"verified", c.report_verified}, {"reason", c.report_reason}}},
      {"audit", {{"records_checked", c.audited_records}, {"duplicates", c.duplicate_records}}},
      {"flags", flags},
      {"identified_ids", c.identified_ids},
      {"checks",
       {{"node_verifications", c.checks.node_verifications},
        {"nodes_visited", c.checks.nodes_visited},
        {"exponentiations", c.checks.exponentiations}}},
      {"recovery", {{"attempts", c.recovery_attempts}, {"max_messages_per_member", c.recovery_messages_max}}},
      {"exponentiations", c.exponentiations},
      {"multi_exponentiations", c.multi_exponentiations},
      {"messages", messages},
      {"sizes", c.sizes},
  };
}

json MetricsReport::to_json() const {
  json cycles_j = json::array();
  uint64_t completed = 0, exclusions = 0, flags = 0, identified = 0, msgs = 0, bytes = 0, verifs = 0, exps = 0;
  for (const auto& c : cycles) {
    cycles_j.push_back(cycle_json(c));
    completed += c.completed;
    exclusions += c.excluded.size();
    flags += c.flagged_uids.size();
    identified += c.identified_ids.size();
    verifs += c.checks.node_verifications;
    exps += c.exponentiations + c.multi_exponentiations;
    for (const auto& [_, st] : c.messages) {
      msgs += st.count;
      bytes += st.bytes;
    }
  }
  json det = json::array();
  for (const auto& d : detections) {
    det.push_back({{"kind", protocol::attack_name(d.attack.kind)},
                   {"cycle", d.attack.cycle},
                   {"actor", d.attack.actor},
                   {"mechanism", d.mechanism},
                   {"detected", d.detected},
                   {"detected_in_cycle", d.detected_in_cycle ? json(*d.detected_in_cycle) : json(nullptr)},
                   {"detail", d.detail}});
  }
  return {{"schema", kMetricsSchema},
          {"scenario", sim::to_json(config)},
          {"cycles", cycles_j},
          {"totals",
           {{"cycles", cycles.size()},
            {"completed", completed},
            {"aborted", cycles.size() - completed},
            {"exclusions", exclusions},
            {"flags", flags},
            {"identified", identified},
            {"messages", msgs},
            {"bytes", bytes},
            {"node_verifications", verifs},
            {"exponentiations", exps}}},
          {"detections", det},
          {"failures", failures},
          {"outcome", outcome_name(outcome)},
          {"exit_code", exit_code()}};
}

std::string MetricsReport::serialize() const { return to_json().dump(2) + "\n"; }

}  // namespace sada::sim
