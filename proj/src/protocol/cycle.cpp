#include "sada/protocol/cycle.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "sada/approval/approval.hpp"
#include "sada/crypto/encoding.hpp"
#include "sada/masking/modarith.hpp"
#include "sada/masking/recoverable_masking.hpp"
#include "sada/schnorr/batch.hpp"

namespace sada::protocol {

std::string attack_name(AttackKind kind) {
  switch (kind) {
    case AttackKind::InvalidSubApproval: return "invalid_sub_approval";
    case AttackKind::FakeAverage: return "fake_average";
    case AttackKind::SelfKeyApproval: return "self_key_approval";
  }
  return "unknown";
}

std::optional<AttackKind> parse_attack_kind(std::string_view name) {
  for (auto k : {AttackKind::InvalidSubApproval, AttackKind::FakeAverage, AttackKind::SelfKeyApproval}) {
    if (attack_name(k) == name) return k;
  }
  return std::nullopt;
}

void Network::send(uint64_t time, uint32_t from, uint32_t to, MsgType type, Bytes bytes) {
  auto& st = stats_[type];
  ++st.count;
  st.bytes += bytes.size();
  st.max_bytes = std::max<uint64_t>(st.max_bytes, bytes.size());
  ++sent_[{from, type}];
  queue_.push_back({time, next_seq_++, from, to, type, std::move(bytes)});
}

std::vector<Packet> Network::deliver_to(uint32_t to) {
  std::vector<Packet> out;
  auto split = std::stable_partition(queue_.begin(), queue_.end(),
                                     [&](const Packet& p) { return p.to != to; });
  std::move(split, queue_.end(), std::back_inserter(out));
  queue_.erase(split, queue_.end());
  std::sort(out.begin(), out.end(), [](const Packet& a, const Packet& b) {
    return std::tie(a.time, a.seq) < std::tie(b.time, b.seq);
  });
  for (const auto& p : out) ++received_[{to, p.type}];
  return out;
}

void Network::reset_stats() {
  stats_.clear();
  sent_.clear();
  received_.clear();
}

uint64_t Network::sent(uint32_t node, MsgType type) const {
  auto it = sent_.find({node, type});
  return it == sent_.end() ? 0 : it->second;
}

uint64_t Network::received(uint32_t node, MsgType type) const {
  auto it = received_.find({node, type});
  return it == received_.end() ? 0 : it->second;
}

std::vector<uint32_t> select_retry_providers(std::span<const uint32_t> good,
                                             std::span<const uint32_t> used, size_t t_sm) {
  std::set<uint32_t> used_set(used.begin(), used.end());
  std::vector<uint32_t> fresh, reused;
  for (uint32_t j : good) (used_set.count(j) ? reused : fresh).push_back(j);
  std::sort(fresh.begin(), fresh.end());
  std::sort(reused.begin(), reused.end());
  std::vector<uint32_t> out;
  for (uint32_t j : fresh) {
    if (out.size() == t_sm) break;
    out.push_back(j);
  }
  for (uint32_t j : reused) {
    if (out.size() == t_sm) break;
    out.push_back(j);
  }
  return out;
}

World::World(WorldConfig config, uint64_t seed) : config_(std::move(config)), rng_(seed) {
  config_.params.validate();
  group_ = group_by_name(config_.group);
  pke_ = make_pke(config_.pke);
  ta_ = std::make_unique<TrustedAuthority>(group_, rng_.fork(1));
  Drbg infra = rng_.fork(2);
  rsu_ = std::make_unique<Rsu>(*pke_, infra);
  server_ = std::make_unique<CloudServer>(group_, *pke_, infra, ta_->public_key(),
                                          config_.freshness_window, config_.t_aud);

  const uint32_t n = config_.params.n_v;
  Drbg keys = rng_.fork(3);
  std::set<GroupPoint> seen;
  const uint64_t expiry = config_.start_time + config_.credential_lifetime;
  for (uint32_t i = 0; i < n; ++i) {
    auto kp = schnorr::KeyPair::generate(*group_, keys);
    while (!seen.insert(kp.pk).second) kp = schnorr::KeyPair::generate(*group_, keys);
    const uint64_t id = config_.id_base + i;
    vehicles_.emplace_back(i, id, kp, ta_->issue_credential(id, expiry));
    roster_.push_back(kp.pk);
  }
  for (auto& v : vehicles_) v.setup_pairwise(*group_, roster_);
  data_.assign(n, 0);
  seq_.assign(n, 0);
}

namespace {

struct Abort {
  std::string stage;
  std::optional<uint32_t> culprit;
  std::string reason;
};

}  // namespace

class CycleDriver {
 public:
  CycleDriver(World& w, uint32_t cycle, std::span<const AttackSpec> attacks)
      : w_(w), g_(*w.group_), n_(static_cast<uint32_t>(w.roster_.size())), rng_(w.rng_.fork(1000 + cycle)) {
    out_.cycle = cycle;
    for (const auto& a : attacks) {
      if (a.cycle != cycle) continue;
      if (a.actor >= n_) throw std::invalid_argument("attack actor out of range");
      switch (a.kind) {
        case AttackKind::InvalidSubApproval: invalid_sub_.insert(a.actor); break;
        case AttackKind::FakeAverage: fake_avg_ = a.actor; break;
        case AttackKind::SelfKeyApproval: self_key_ = a.actor; break;
      }
      out_.attacks.push_back(attack_name(a.kind) + "@" + std::to_string(a.actor));
    }
    if (fake_avg_ && self_key_ && *fake_avg_ != *self_key_) {
      throw std::invalid_argument("head-side attacks in one cycle need the same actor");
    }
  }

  CycleOutcome run() {
    const OpCounters before = op_counters();
    w_.net_.reset_stats();
    try {
      execute();
    } catch (const Abort& a) {
      out_.abort_stage = a.stage;
      out_.culprit = a.culprit;
      out_.abort_reason = a.reason;
      w_.net_.drop_all();
      for (auto& v : w_.vehicles_) v.restore_in_flight();
    }
    if (out_.final_members.empty()) {
      for (uint32_t i = 0; i < n_; ++i) out_.final_members.push_back(i);
    }
    uint64_t sum = 0;
    const uint64_t p_mk = w_.config_.params.p_mk;
    for (uint32_t j : out_.final_members) sum = masking::add_mod(sum, w_.data_[j] % p_mk, p_mk);
    out_.expected_avg = {sum, static_cast<uint32_t>(out_.final_members.size())};
    out_.messages = w_.net_.stats();
    for (uint32_t i = 0; i < n_; ++i) {
      if (i == out_.head) continue;
      const uint64_t m = w_.net_.received(i, MsgType::Exclusion) + w_.net_.sent(i, MsgType::ShareReply) +
                         w_.net_.received(i, MsgType::BetaList);
      out_.recovery_messages_max = std::max<uint32_t>(out_.recovery_messages_max, static_cast<uint32_t>(m));
    }
    const OpCounters& after = op_counters();
    out_.exponentiations = after.exponentiations - before.exponentiations;
    out_.multi_exponentiations = after.multi_exponentiations - before.multi_exponentiations;
    return out_;
  }

 private:
  approval::ApprovalSession& session(uint32_t i) { return *w_.vehicles_[i].session; }
  void tick() { clock_ += w_.config_.stage_tick; }

  void send(uint32_t from, uint32_t to, MsgType type, ByteView payload) {
    const SymKey& key = secrets_[from].at(to).key;
    const Envelope env = seal_envelope(g_, w_.vehicles_[from].keys(), key, type, static_cast<uint8_t>(from),
                                       static_cast<uint8_t>(to), w_.seq_[from]++, out_.uid, payload, rng_);
    w_.net_.send(clock_, from, to, type, env.encode());
  }

  /// Opens and authenticates everything queued for `to`. The head checks
  /// all signatures of a round in one batch.
  std::vector<std::pair<uint32_t, Bytes>> receive(uint32_t to, MsgType type, const std::string& stage) {
    std::vector<std::pair<uint32_t, OpenedEnvelope>> opened;
    for (auto& p : w_.net_.deliver_to(to)) {
      if (p.type != type) throw Abort{stage, p.from, "unexpected " + msg_type_name(p.type)};
      std::optional<OpenedEnvelope> o;
      try {
        const Envelope env = Envelope::decode(p.bytes);
        if (env.sender == p.from) o = open_envelope(g_, secrets_[to].at(p.from).key, static_cast<uint8_t>(to), env);
      } catch (const DecodeError&) {
      }
      if (!o) throw Abort{stage, p.from, "envelope failed authentication"};
      opened.emplace_back(p.from, std::move(*o));
    }
    if (opened.size() > 1) {
      std::vector<schnorr::BatchItem> items;
      for (const auto& [from, o] : opened) items.push_back(envelope_batch_item(w_.roster_[from], out_.uid, o));
      if (!schnorr::batch_verify(g_, items, rng_)) {
        auto bad = schnorr::identify_bad_signatures(g_, items, rng_);
        throw Abort{stage, bad.empty() ? std::nullopt : std::optional(opened[bad.front()].first),
                    "envelope signature invalid"};
      }
    } else {
      for (const auto& [from, o] : opened) {
        if (!verify_envelope(g_, w_.roster_[from], out_.uid, o)) throw Abort{stage, from, "envelope signature invalid"};
      }
    }
    std::vector<std::pair<uint32_t, Bytes>> out;
    for (auto& [from, o] : opened) out.emplace_back(from, std::move(o.payload));
    return out;
  }

  void choose_head() {
    if (fake_avg_) {
      h_ = *fake_avg_;
    } else if (self_key_) {
      h_ = *self_key_;
    } else {
      h_ = static_cast<uint32_t>(rng_.uniform(n_));
      // A member injecting an invalid sub-approval is never its own checker.
      if (invalid_sub_.size() < n_) {
        while (invalid_sub_.count(h_)) h_ = (h_ + 1) % n_;
      }
    }
    out_.head = h_;
  }

  void setup() {
    const auto& cfg = w_.config_;
    clock_ = cfg.start_time + static_cast<uint64_t>(out_.cycle) * cfg.cycle_period;
    choose_head();
    out_.uid = compute_uid(w_.roster_, clock_);
    secrets_.assign(n_, {});
    for (uint32_t i = 0; i < n_; ++i) {
      w_.data_[i] = rng_.uniform(cfg.data_bound);
      secrets_[i] = w_.vehicles_[i].event_secrets(out_.uid);
      approval::SessionSetup s{w_.group_, cfg.params, i, out_.uid, w_.roster_, cfg.nonce_batch};
      w_.vehicles_[i].session = std::make_unique<approval::ApprovalSession>(
          std::move(s), w_.vehicles_[i].keys(), secrets_[i], rng_.fork(i));
    }
  }

  void commit_round() {
    tick();
    l_com_.assign(n_, Digest{});
    for (uint32_t i = 0; i < n_; ++i) {
      const Digest com = session(i).commit(w_.data_[i]);
      if (i == h_) {
        l_com_[i] = com;
      } else {
        send(i, h_, MsgType::Commit, com);
      }
    }
    std::vector<bool> got(n_, false);
    got[h_] = true;
    for (auto& [from, payload] : receive(h_, MsgType::Commit, "commit")) {
      if (payload.size() != 32) throw Abort{"commit", from, "commitment has wrong length"};
      std::copy(payload.begin(), payload.end(), l_com_[from].begin());
      got[from] = true;
    }
    for (uint32_t i = 0; i < n_; ++i) {
      if (!got[i]) throw Abort{"commit", i, "commitment missing"};
    }
    out_.sizes["com_i"] = 32;

    tick();
    Bytes list;
    for (const auto& c : l_com_) append(list, c);
    out_.sizes["L_com"] = list.size();
    for (uint32_t i = 0; i < n_; ++i) {
      if (i != h_) send(h_, i, MsgType::CommitList, list);
    }
  }

  void reveal_round() {
    tick();
    const size_t width = w_.config_.params.share_width();
    for (uint32_t i = 0; i < n_; ++i) {
      if (i == h_) continue;
      auto msgs = receive(i, MsgType::CommitList, "commit list");
      if (msgs.size() != 1 || msgs[0].second.size() != 32 * n_) throw Abort{"commit list", h_, "malformed L_com"};
      std::vector<Digest> l_com(n_);
      for (uint32_t j = 0; j < n_; ++j) {
        std::copy_n(msgs[0].second.begin() + 32 * j, 32, l_com[j].begin());
      }
      const approval::RevealMsg* m = nullptr;
      try {
        m = &session(i).reveal(l_com);
      } catch (const std::runtime_error& e) {
        throw Abort{"reveal", h_, e.what()};
      }
      const Bytes mb = m->encode();
      Bytes payload;
      append_u16_be(payload, static_cast<uint16_t>(mb.size()));
      append(payload, mb);
      append(payload, encode_records(w_.vehicles_[i].take_pending_records()));
      send(i, h_, MsgType::Reveal, payload);
    }

    reveals_.assign(n_, {});
    raw_reveals_.assign(n_, {});
    reveals_[h_] = session(h_).reveal(l_com_);
    raw_reveals_[h_] = reveals_[h_].encode();
    out_.sizes["m_i"] = raw_reveals_[h_].size();
    auto own = w_.vehicles_[h_].take_pending_records();
    l_rc_.insert(l_rc_.end(), own.begin(), own.end());

    std::vector<bool> got(n_, false);
    got[h_] = true;
    for (auto& [from, payload] : receive(h_, MsgType::Reveal, "reveal")) {
      try {
        ByteReader r(payload);
        const uint16_t len = r.u16();
        const ByteView mb = r.take(len);
        reveals_[from] = approval::RevealMsg::decode(g_, mb, width);
        raw_reveals_[from].assign(mb.begin(), mb.end());
        auto recs = read_records(r);
        r.expect_end();
        l_rc_.insert(l_rc_.end(), recs.begin(), recs.end());
      } catch (const DecodeError& e) {
        throw Abort{"reveal", from, std::string("malformed m_i: ") + e.what()};
      }
      got[from] = true;
    }
    for (uint32_t i = 0; i < n_; ++i) {
      if (!got[i]) throw Abort{"reveal", i, "m_i missing"};
    }

    try {
      session(h_).verify_reveals(reveals_);
    } catch (const approval::BindingError& e) {
      throw Abort{"reveal", e.index(), e.what()};
    }

    tick();
    Bytes list;
    append_u8(list, static_cast<uint8_t>(n_));
    for (const auto& mb : raw_reveals_) {
      append_u16_be(list, static_cast<uint16_t>(mb.size()));
      append(list, mb);
    }
    for (uint32_t i = 0; i < n_; ++i) {
      if (i != h_) send(h_, i, MsgType::RevealList, list);
    }
  }

  void sub_approval_round() {
    tick();
    const size_t width = w_.config_.params.share_width();
    const auto& f = g_.scalars();
    for (uint32_t i = 0; i < n_; ++i) {
      if (i == h_) continue;
      auto msgs = receive(i, MsgType::RevealList, "reveal list");
      if (msgs.size() != 1) throw Abort{"reveal list", h_, "reveal list missing"};
      std::vector<approval::RevealMsg> list;
      try {
        ByteReader r(msgs[0].second);
        if (r.u8() != n_) throw DecodeError("reveal list has wrong count");
        for (uint32_t j = 0; j < n_; ++j) {
          const uint16_t len = r.u16();
          list.push_back(approval::RevealMsg::decode(g_, r.take(len), width));
        }
        r.expect_end();
      } catch (const DecodeError& e) {
        throw Abort{"reveal list", h_, e.what()};
      }
      try {
        session(i).verify_reveals(list);
      } catch (const approval::BindingError& e) {
        throw Abort{"reveal list", e.index(), e.what()};
      }
      auto sub = session(i).sub_approve(session(i).average());
      if (invalid_sub_.count(i)) sub.s = f.add(sub.s, f.random_nonzero(rng_));
      send(i, h_, MsgType::SubApproval, encode_sub(sub));
    }
    subs_.assign(n_, {});
    subs_[h_] = session(h_).sub_approve(session(h_).average());
    collect_subs("sub_approval");
  }

  Bytes encode_sub(const approval::SubApproval& sub) const {
    Bytes b;
    append(b, g_.scalars().encode(sub.s));
    append(b, sub.R.bytes());
    return b;
  }

  void collect_subs(const std::string& stage) {
    for (auto& [from, payload] : receive(h_, MsgType::SubApproval, stage)) {
      approval::SubApproval sub;
      try {
        if (payload.size() != schnorr::kSignatureBytes) throw DecodeError("sub-approval has wrong length");
        sub.s = g_.scalars().decode(ByteView(payload).first(kScalarBytes));
        sub.R = g_.decode(ByteView(payload).subspan(kScalarBytes));
      } catch (const DecodeError& e) {
        throw Abort{stage, from, e.what()};
      }
      if (sub.R != session(h_).aggregated_nonce()) throw Abort{stage, from, "sub-approval bound to another nonce"};
      subs_[from] = sub;
    }
  }

  /// Builds the trees over `members` and returns the failing members.
  std::vector<uint32_t> precheck(std::span<const uint32_t> members, size_t slot,
                                 const approval::AverageValue& avg) {
    const auto& key = session(h_).agg_key();
    std::vector<GroupPoint> keys, R;
    std::vector<Scalar> coeffs, s;
    for (uint32_t j : members) {
      keys.push_back(w_.roster_[j]);
      coeffs.push_back(key.coeff_of(w_.roster_[j]));
      s.push_back(subs_[j].s);
      R.push_back(reveals_[j].nonces.at(slot));
    }
    tree_ = precheck::AggTree::build(g_, keys, coeffs, s, R);
    std::vector<uint32_t> bad;
    for (size_t leaf : precheck::locate_invalid(*tree_, avg, out_.checks)) bad.push_back(members[leaf]);
    return bad;
  }

  void aggregate_round() {
    tick();
    approval::AverageValue avg = session(h_).average();
    if (fake_avg_) {
      const uint64_t p = w_.config_.params.p_mk;
      avg.sum = masking::add_mod(avg.sum, 1 + rng_.uniform(p - 1), p);
    }
    std::vector<uint32_t> all(n_);
    for (uint32_t i = 0; i < n_; ++i) all[i] = i;
    auto bad = precheck(all, 0, avg);
    if (bad.empty()) {
      out_.final_members = all;
      return;
    }
    if (std::find(bad.begin(), bad.end(), h_) != bad.end()) {
      // Members signed the average they computed themselves; nothing the
      // head can aggregate verifies for a different value.
      throw Abort{"aggregate", h_, "no valid approval for the head's average"};
    }
    std::vector<uint32_t> good;
    for (uint32_t j : all) {
      if (std::find(bad.begin(), bad.end(), j) == bad.end()) good.push_back(j);
    }
    if (good.size() < std::max<size_t>(w_.config_.params.t_sm, 2)) {
      throw Abort{"aggregate", bad.front(), "too many invalid sub-approvals to recover"};
    }
    out_.excluded = bad;
    exclude(bad, good);
  }

  std::map<uint32_t, uint64_t> request_betas(std::span<const uint32_t> bad, std::span<const uint32_t> providers,
                                             std::span<const uint32_t> notify) {
    tick();
    Bytes m1;
    append_u8(m1, static_cast<uint8_t>(bad.size()));
    for (uint32_t b : bad) append_u8(m1, static_cast<uint8_t>(b));
    append_u8(m1, static_cast<uint8_t>(providers.size()));
    for (uint32_t j : providers) append_u8(m1, static_cast<uint8_t>(j));
    out_.sizes["m1_CH"] = m1.size();
    for (uint32_t i : notify) {
      if (i != h_) send(h_, i, MsgType::Exclusion, m1);
    }

    tick();
    std::set<uint32_t> bad_set(bad.begin(), bad.end());
    for (uint32_t i : notify) {
      if (i == h_) continue;
      for (auto& [from, payload] : receive(i, MsgType::Exclusion, "exclusion")) {
        ByteReader r(payload);
        std::vector<uint32_t> l_bad, l_sm;
        try {
          for (uint8_t k = r.u8(); k > 0; --k) l_bad.push_back(r.u8());
          for (uint8_t k = r.u8(); k > 0; --k) l_sm.push_back(r.u8());
          r.expect_end();
        } catch (const DecodeError& e) {
          throw Abort{"exclusion", from, e.what()};
        }
        if (bad_set.count(i) || std::find(l_sm.begin(), l_sm.end(), i) == l_sm.end()) continue;
        Bytes reply;
        for (uint32_t b : l_bad) {
          append_u8(reply, static_cast<uint8_t>(b));
          append_u64_be(reply, session(i).held_share(b));
        }
        send(i, h_, MsgType::ShareReply, reply);
      }
    }

    std::map<uint32_t, std::vector<masking::Share>> shares;
    const auto add_share = [&](uint32_t holder, uint32_t b, uint64_t y) {
      shares[b].push_back({masking::share_point(holder), y});
    };
    if (std::find(providers.begin(), providers.end(), h_) != providers.end()) {
      for (uint32_t b : bad) add_share(h_, b, session(h_).held_share(b));
    }
    for (auto& [from, payload] : receive(h_, MsgType::ShareReply, "share reply")) {
      try {
        ByteReader r(payload);
        while (r.remaining() > 0) {
          const uint32_t b = r.u8();
          add_share(from, b, r.u64());
        }
      } catch (const DecodeError& e) {
        throw Abort{"exclusion", from, e.what()};
      }
    }
    std::map<uint32_t, uint64_t> betas;
    for (uint32_t b : bad) {
      try {
        const uint64_t beta = masking::reconstruct_beta(shares[b], w_.config_.params);
        if (masking::verify_beta(beta, session(h_).peer_reveal(b).h)) betas[b] = beta;
      } catch (const std::invalid_argument&) {
      }
    }
    return betas;
  }

  void exclude(const std::vector<uint32_t>& bad, const std::vector<uint32_t>& good) {
    const size_t t_sm = w_.config_.params.t_sm;
    std::vector<uint32_t> l_sm = good;
    std::shuffle(l_sm.begin(), l_sm.end(), rng_);
    l_sm.resize(t_sm);
    std::sort(l_sm.begin(), l_sm.end());

    std::vector<uint32_t> everyone(n_);
    for (uint32_t i = 0; i < n_; ++i) everyone[i] = i;
    out_.recovery_attempts = 1;
    auto betas = request_betas(bad, l_sm, everyone);
    if (betas.size() != bad.size()) {
      // Some provider returned a wrong share; try once more, preferring
      // members that were not asked the first time.
      auto retry = select_retry_providers(good, l_sm, t_sm);
      out_.recovery_attempts = 2;
      betas = request_betas(bad, retry, retry);
      if (betas.size() != bad.size()) throw Abort{"exclusion", std::nullopt, "reconstructed beta fails its hash"};
    }

    tick();
    Bytes list;
    append_u8(list, static_cast<uint8_t>(betas.size()));
    for (const auto& [b, beta] : betas) {
      append_u8(list, static_cast<uint8_t>(b));
      append_u64_be(list, beta);
    }
    for (uint32_t i : good) {
      if (i != h_) send(h_, i, MsgType::BetaList, list);
    }

    tick();
    const size_t slot = session(h_).next_slot();
    for (uint32_t i : good) {
      if (i == h_) continue;
      auto msgs = receive(i, MsgType::BetaList, "beta list");
      std::map<uint32_t, uint64_t> got;
      try {
        if (msgs.size() != 1) throw DecodeError("beta list missing");
        ByteReader r(msgs[0].second);
        for (uint8_t k = r.u8(); k > 0; --k) {
          const uint32_t b = r.u8();
          got[b] = r.u64();
        }
        r.expect_end();
        const auto avg = session(i).apply_exclusion(bad, got);
        send(i, h_, MsgType::SubApproval, encode_sub(session(i).re_approve(avg)));
      } catch (const DecodeError& e) {
        throw Abort{"exclusion", h_, e.what()};
      } catch (const std::invalid_argument& e) {
        throw Abort{"exclusion", h_, e.what()};
      }
    }
    const auto avg = session(h_).apply_exclusion(bad, betas);
    subs_[h_] = session(h_).re_approve(avg);

    tick();
    collect_subs("reapproval");
    auto again = precheck(good, slot, avg);
    if (!again.empty()) throw Abort{"reapproval", again.front(), "invalid sub-approval after exclusion"};
    out_.final_members = good;
  }

  void upload_round() {
    tick();
    auto& head = w_.vehicles_[h_];
    const uint32_t rsu = n_, cs = n_ + 1;
    const SessionKeys keys = fresh_session_keys(rng_);
    const Bytes ct = seal_session_keys(*w_.pke_, w_.rsu_->public_key(), keys, rng_);
    out_.sizes["session_keys"] = ct.size();
    w_.net_.send(clock_, h_, rsu, MsgType::SessionKeys, ct);
    for (auto& p : w_.net_.deliver_to(rsu)) {
      if (!w_.rsu_->accept_session_keys(p.bytes)) throw Abort{"upload", h_, "session keys do not decrypt"};
    }

    const approval::AverageValue avg = session(h_).average();
    approval::ClusterApproval appr{tree_->root().s, tree_->root().R};
    GroupPoint agg_pk = session(h_).agg_key().pk;
    if (self_key_) {
      // Approval under the head's own key in place of the cluster key.
      const Scalar k = g_.scalars().random_nonzero(rng_);
      const GroupPoint R = g_.mul_gen(k);
      const Scalar e = approval::approval_challenge(g_, head.keys().pk, R, avg);
      const auto sig = schnorr::sign_with_challenge(g_, head.keys(), k, e);
      appr = {sig.s, sig.R};
      agg_pk = head.keys().pk;
    }

    ReportBody body;
    body.uid = out_.uid;
    body.appr = appr.encode(g_);
    body.encrypted_avg = w_.pke_->encrypt(w_.server_->public_key(), avg.encode(), rng_);
    body.agg_pk = agg_pk.encoding();
    body.credential = head.credential();
    body.tmp3 = clock_;
    const Bytes m2 = seal_upload(MsgType::Report, keys.key1, w_.upload_seq_++, body.encode());
    const Bytes m3 = seal_upload(MsgType::RecordUpload, keys.key1, w_.upload_seq_++,
                                 build_record_body(keys.key2, l_rc_));
    out_.sizes["m2_CH"] = m2.size();
    out_.sizes["m3_CH"] = m3.size();
    out_.sizes["records"] = l_rc_.size();
    w_.net_.send(clock_, h_, rsu, MsgType::Report, m2);
    w_.net_.send(clock_, h_, rsu, MsgType::RecordUpload, m3);

    tick();
    for (auto& p : w_.net_.deliver_to(rsu)) {
      if (p.type == MsgType::Report) {
        auto plain = w_.rsu_->relay_report(p.bytes);
        if (!plain) throw Abort{"upload", h_, "m2 rejected by RSU"};
        w_.net_.send(clock_, rsu, cs, MsgType::Report, *plain);
      } else if (p.type == MsgType::RecordUpload) {
        auto recs = w_.rsu_->relay_records(p.bytes);
        if (!recs) throw Abort{"upload", h_, "m3 rejected by RSU"};
        w_.net_.send(clock_, rsu, cs, MsgType::RecordUpload, encode_records(*recs));
      }
    }
    for (auto& v : w_.vehicles_) v.confirm_uploaded();

    tick();
    for (auto& p : w_.net_.deliver_to(cs)) {
      if (p.type == MsgType::Report) {
        const auto verdict = w_.server_->open_report(p.bytes, clock_);
        out_.report_accepted = verdict.accepted;
        out_.report_verified = verdict.verified;
        out_.report_reason = verdict.reason;
        out_.server_avg = verdict.avg;
      } else if (p.type == MsgType::RecordUpload) {
        const auto audit = w_.server_->audit(decode_records(p.bytes));
        out_.audited_records = audit.checked;
        out_.duplicate_records = audit.duplicates;
        out_.flagged_uids = audit.flagged_uids;
        for (const auto& cre : audit.flagged_credentials) {
          out_.identified_ids.push_back(identify_bad_head(*w_.ta_, cre));
        }
      }
    }

    // Every final member keeps (Hash_vid(pk~), UID) for a later cycle.
    for (uint32_t j : out_.final_members) {
      const GroupPoint& pk = (j == h_) ? agg_pk : session(j).agg_key().pk;
      w_.vehicles_[j].remember({hash_vid_key(pk), out_.uid});
    }
    out_.completed = out_.report_verified;
    if (!out_.report_verified) throw Abort{"server", h_, out_.report_reason};
  }

  void execute() {
    setup();
    commit_round();
    reveal_round();
    sub_approval_round();
    aggregate_round();
    upload_round();
  }

  World& w_;
  const Group& g_;
  uint32_t n_;
  Drbg rng_;
  CycleOutcome out_;
  uint64_t clock_ = 0;
  uint32_t h_ = 0;
  std::set<uint32_t> invalid_sub_;
  std::optional<uint32_t> fake_avg_;
  std::optional<uint32_t> self_key_;
  std::vector<std::map<uint32_t, masking::PairwiseSecret>> secrets_;
  std::vector<Digest> l_com_;
  std::vector<approval::RevealMsg> reveals_;
  std::vector<Bytes> raw_reveals_;
  std::vector<approval::SubApproval> subs_;
  std::vector<Record> l_rc_;
  std::optional<precheck::AggTree> tree_;
};

CycleOutcome World::run_cycle(uint32_t cycle, std::span<const AttackSpec> attacks) {
  return CycleDriver(*this, cycle, attacks).run();
}

}  // namespace sada::protocol
