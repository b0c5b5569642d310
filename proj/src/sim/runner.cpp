#include "sada/sim/runner.hpp"

#include <algorithm>

namespace sada::sim {

using protocol::AttackKind;

namespace {

bool has(const std::vector<uint32_t>& v, uint32_t x) { return std::find(v.begin(), v.end(), x) != v.end(); }

bool attack_in(const ScenarioConfig& cfg, uint32_t cycle, AttackKind kind, std::optional<uint32_t> actor = {}) {
  return std::any_of(cfg.attacks.begin(), cfg.attacks.end(), [&](const protocol::AttackSpec& a) {
    return a.cycle == cycle && a.kind == kind && (!actor || a.actor == *actor);
  });
}

}  // namespace

MetricsReport run(const ScenarioConfig& cfg) {
  validate(cfg);
  MetricsReport rep;
  rep.config = cfg;
  protocol::World world(cfg.world(), cfg.seed);
  for (uint32_t c = 0; c < cfg.cycles; ++c) rep.cycles.push_back(world.run_cycle(c, cfg.attacks));

  // Anything an injected attack does not account for is a failure.
  std::vector<Digest> attacked_uids;
  for (const auto& a : cfg.attacks) {
    if (a.kind == AttackKind::SelfKeyApproval) attacked_uids.push_back(rep.cycles[a.cycle].uid);
  }
  for (const auto& o : rep.cycles) {
    const std::string tag = "cycle " + std::to_string(o.cycle) + ": ";
    if (o.completed) {
      if (!o.server_avg || *o.server_avg != o.expected_avg) rep.failures.push_back(tag + "server average differs from the plaintext oracle");
    } else {
      const bool explained = o.abort_stage == "aggregate" && o.culprit &&
                             attack_in(cfg, o.cycle, AttackKind::FakeAverage, *o.culprit);
      if (!explained) rep.failures.push_back(tag + "aborted at " + o.abort_stage + ": " + o.abort_reason);
    }
    for (uint32_t x : o.excluded) {
      if (!attack_in(cfg, o.cycle, AttackKind::InvalidSubApproval, x)) {
        rep.failures.push_back(tag + "member " + std::to_string(x) + " excluded without an injected fault");
      }
    }
    for (const auto& uid : o.flagged_uids) {
      if (std::find(attacked_uids.begin(), attacked_uids.end(), uid) == attacked_uids.end()) {
        rep.failures.push_back(tag + "event " + to_hex(uid) + " flagged without an injected attack");
      }
    }
  }

  for (const auto& a : cfg.attacks) {
    Detection d;
    d.attack = a;
    const auto& o = rep.cycles[a.cycle];
    switch (a.kind) {
      case AttackKind::InvalidSubApproval:
        d.mechanism = "precheck";
        d.detected = has(o.excluded, a.actor) || (o.abort_stage == "aggregate" && o.culprit == a.actor);
        if (d.detected) d.detected_in_cycle = a.cycle;
        d.detail = d.detected ? "excluded; average over " + std::to_string(o.final_members.size()) + " members"
                              : "sub-approval not located";
        break;
      case AttackKind::FakeAverage:
        d.mechanism = "aggregation";
        d.detected = o.abort_stage == "aggregate";
        if (d.detected) d.detected_in_cycle = a.cycle;
        d.detail = d.detected ? "no valid approval exists for the head's average" : "cycle did not abort at aggregation";
        break;
      case AttackKind::SelfKeyApproval: {
        d.mechanism = "audit";
        const uint64_t id = world.vehicles()[a.actor].id();
        for (uint32_t k = a.cycle + 1; k < rep.cycles.size() && !d.detected; ++k) {
          const auto& later = rep.cycles[k];
          if (std::find(later.flagged_uids.begin(), later.flagged_uids.end(), o.uid) == later.flagged_uids.end()) continue;
          d.detected = std::find(later.identified_ids.begin(), later.identified_ids.end(), id) != later.identified_ids.end();
          d.detected_in_cycle = k;
        }
        d.detail = d.detected ? "flagged by audit; head ID " + std::to_string(id) + " recovered"
                              : "no audit flag with the attacker's identity";
        break;
      }
    }
    rep.detections.push_back(std::move(d));
  }

  const bool all_detected = std::all_of(rep.detections.begin(), rep.detections.end(),
                                        [](const Detection& d) { return d.detected; });
  if (!rep.failures.empty() || !all_detected) {
    rep.outcome = RunOutcome::Failure;
  } else {
    rep.outcome = cfg.attacks.empty() ? RunOutcome::Clean : RunOutcome::AttacksDetected;
  }
  return rep;
}

}  // namespace sada::sim
