#pragma once

// Drives a full in-memory approval round for tests: n members with fresh
// keys, pairwise secrets, and one ApprovalSession each.

#include <memory>
#include <vector>

#include "sada/approval/session.hpp"
#include "sada/crypto/encoding.hpp"

namespace sada::testing {

struct Cluster {
  std::shared_ptr<const Group> group;
  masking::MaskingParams params;
  std::vector<schnorr::KeyPair> keys;
  std::vector<GroupPoint> roster;
  Digest uid{};
  std::vector<uint64_t> data;
  std::vector<std::unique_ptr<approval::ApprovalSession>> sessions;
  std::vector<Digest> l_com;
  std::vector<approval::RevealMsg> reveals;
  std::vector<approval::SubApproval> subs;
};

inline Cluster make_cluster(std::shared_ptr<const Group> group, masking::MaskingParams params,
                            Drbg& rng, size_t nonce_batch = 2) {
  Cluster c;
  c.group = group;
  c.params = params;
  const uint32_t n = params.n_v;
  for (uint32_t i = 0; i < n; ++i) {
    c.keys.push_back(schnorr::KeyPair::generate(*group, rng));
    for (uint32_t j = 0; j < i; ++j) {
      if (c.keys[i].pk == c.keys[j].pk) {  // only plausible on the toy group
        c.keys.pop_back();
        --i;
        break;
      }
    }
  }
  for (const auto& k : c.keys) c.roster.push_back(k.pk);
  c.uid = compute_uid(c.roster, rng.next_u64() >> 1);
  for (uint32_t i = 0; i < n; ++i) {
    std::map<uint32_t, masking::PairwiseSecret> secrets;
    for (uint32_t j = 0; j < n; ++j)
      if (j != i) secrets[j] = masking::agree_pairwise(*group, c.keys[i], j, c.roster[j], c.uid);
    approval::SessionSetup setup{group, params, i, c.uid, c.roster, nonce_batch};
    c.sessions.push_back(std::make_unique<approval::ApprovalSession>(setup, c.keys[i], std::move(secrets),
                                                                     rng.fork(i)));
  }
  return c;
}

// commit, reveal, verify and sub-approve with the given data.
inline void run_round(Cluster& c, const std::vector<uint64_t>& data) {
  c.data = data;
  c.l_com.clear();
  for (size_t i = 0; i < c.sessions.size(); ++i) c.l_com.push_back(c.sessions[i]->commit(data[i]));
  c.reveals.clear();
  for (auto& s : c.sessions) c.reveals.push_back(s->reveal(c.l_com));
  for (auto& s : c.sessions) s->verify_reveals(c.reveals);
  c.subs.clear();
  for (auto& s : c.sessions) c.subs.push_back(s->sub_approve(s->average()));
}

}  // namespace sada::testing
