#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sada/approval/messages.hpp"
#include "sada/crypto/pke.hpp"
#include "sada/masking/params.hpp"
#include "sada/precheck/agg_tree.hpp"
#include "sada/protocol/entities.hpp"
#include "sada/protocol/envelope.hpp"

namespace sada::protocol {

class CycleDriver;

enum class AttackKind { InvalidSubApproval, FakeAverage, SelfKeyApproval };

std::string attack_name(AttackKind kind);
std::optional<AttackKind> parse_attack_kind(std::string_view name);

struct AttackSpec {
  AttackKind kind{};
  uint32_t cycle = 0;
  uint32_t actor = 0;
};

struct WorldConfig {
  std::string group = "secp256k1";
  masking::MaskingParams params;
  std::string pke = "hybrid";
  size_t nonce_batch = 2;
  uint32_t t_aud = 1;
  uint64_t freshness_window = 120;  // simulated seconds
  uint64_t cycle_period = 60;
  uint64_t stage_tick = 1;
  uint64_t start_time = 1'700'000'000;
  uint64_t credential_lifetime = 30ull * 24 * 3600;
  uint64_t data_bound = 1000;  // sensed values are uniform in [0, data_bound)
  uint64_t id_base = 1000;     // registered ID of vehicle i is id_base + i
};

struct TypeStats {
  uint64_t count = 0;
  uint64_t bytes = 0;
  uint64_t max_bytes = 0;
};

/// A delivered wire message. Nodes 0..n-1 are vehicles, n is the RSU and
/// n+1 the server.
struct Packet {
  uint64_t time = 0;
  uint64_t seq = 0;
  uint32_t from = 0;
  uint32_t to = 0;
  MsgType type{};
  Bytes bytes;
};

/// Reliable in-order transport. Deliveries are ordered by (time, seq).
class Network {
 public:
  void send(uint64_t time, uint32_t from, uint32_t to, MsgType type, Bytes bytes);
  std::vector<Packet> deliver_to(uint32_t to);
  bool idle() const { return queue_.empty(); }
  void drop_all() { queue_.clear(); }

  void reset_stats();
  const std::map<MsgType, TypeStats>& stats() const { return stats_; }
  uint64_t sent(uint32_t node, MsgType type) const;
  uint64_t received(uint32_t node, MsgType type) const;

 private:
  std::vector<Packet> queue_;
  uint64_t next_seq_ = 0;
  std::map<MsgType, TypeStats> stats_;
  std::map<std::pair<uint32_t, MsgType>, uint64_t> sent_;
  std::map<std::pair<uint32_t, MsgType>, uint64_t> received_;
};

struct CycleOutcome {
  uint32_t cycle = 0;
  uint32_t head = 0;
  Digest uid{};
  std::vector<std::string> attacks;

  bool completed = false;  // the server accepted a verifying report
  std::string abort_stage;  // empty unless the cycle aborted
  std::optional<uint32_t> culprit;
  std::string abort_reason;

  std::vector<uint32_t> excluded;
  std::vector<uint32_t> final_members;
  approval::AverageValue expected_avg;  // plaintext oracle over final_members
  std::optional<approval::AverageValue> server_avg;
  bool report_accepted = false;
  bool report_verified = false;
  std::string report_reason;

  size_t audited_records = 0;
  size_t duplicate_records = 0;
  std::vector<Digest> flagged_uids;
  std::vector<uint64_t> identified_ids;

  precheck::CheckStats checks;  // pre-check and descent at the head
  uint32_t recovery_attempts = 0;
  uint32_t recovery_messages_max = 0;  // per member, excluding the head
  uint64_t exponentiations = 0;
  uint64_t multi_exponentiations = 0;
  std::map<MsgType, TypeStats> messages;
  std::map<std::string, uint64_t> sizes;  // payload sizes for byte accounting
};

/// Providers for a second reconstruction attempt: good members outside the
/// first set come first, the rest fill up to t_sm. Order is ascending
/// within each group.
std::vector<uint32_t> select_retry_providers(std::span<const uint32_t> good,
                                             std::span<const uint32_t> used, size_t t_sm);

/// Cluster, RSU, server and TA with their long-term state. run_cycle drives
/// one sensing cycle end to end over the simulated network.
class World {
 public:
  World(WorldConfig config, uint64_t seed);

  CycleOutcome run_cycle(uint32_t cycle, std::span<const AttackSpec> attacks = {});

  const WorldConfig& config() const { return config_; }
  const Group& group() const { return *group_; }
  const std::vector<GroupPoint>& roster() const { return roster_; }
  std::vector<Vehicle>& vehicles() { return vehicles_; }
  CloudServer& server() { return *server_; }
  TrustedAuthority& authority() { return *ta_; }
  Rsu& rsu() { return *rsu_; }

  /// Sensed value of vehicle i in the last cycle; oracle use only.
  uint64_t last_datum(uint32_t i) const { return data_.at(i); }

 private:
  friend class CycleDriver;

  WorldConfig config_;
  Drbg rng_;
  std::shared_ptr<const Group> group_;
  std::unique_ptr<PkeScheme> pke_;
  std::unique_ptr<TrustedAuthority> ta_;
  std::unique_ptr<Rsu> rsu_;
  std::unique_ptr<CloudServer> server_;
  std::vector<Vehicle> vehicles_;
  std::vector<GroupPoint> roster_;
  std::vector<uint64_t> data_;
  std::vector<uint64_t> seq_;
  uint64_t upload_seq_ = 0;
  Network net_;
};

}  // namespace sada::protocol
