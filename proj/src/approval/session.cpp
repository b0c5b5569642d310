#include "sada/approval/session.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace sada::approval {

namespace {

const char* state_name(SessionState s) {
  switch (s) {
    case SessionState::Fresh: return "fresh";
    case SessionState::AwaitLcom: return "awaiting L_com";
    case SessionState::AwaitReveals: return "awaiting reveals";
    case SessionState::Revealed: return "revealed";
    case SessionState::Approved: return "approved";
  }
  return "?";
}

}  // namespace

ApprovalSession::ApprovalSession(SessionSetup setup, schnorr::KeyPair kp,
                                 std::map<uint32_t, masking::PairwiseSecret> secrets, Drbg rng)
    : setup_(std::move(setup)), kp_(std::move(kp)), secrets_(std::move(secrets)), rng_(std::move(rng)) {
  const size_t n = setup_.roster.size();
  if (n < 2) throw std::invalid_argument("a cluster needs at least two members");
  if (setup_.params.n_v != n) throw std::invalid_argument("roster size differs from n_v");
  setup_.params.validate();
  if (setup_.self >= n) throw std::invalid_argument("member index out of range");
  if (!(setup_.roster[setup_.self] == kp_.pk)) throw std::invalid_argument("own key not at own roster slot");
  if (setup_.nonce_batch == 0 || setup_.nonce_batch > 255) throw std::invalid_argument("nonce batch size");
  for (uint32_t j = 0; j < n; ++j) {
    if (j != setup_.self && !secrets_.count(j)) {
      throw std::invalid_argument("no pairwise secret for member " + std::to_string(j));
    }
  }
}

void ApprovalSession::require(SessionState s, const char* op) const {
  if (state_ != s) {
    throw ProtocolStateError(std::string(op) + " called while " + state_name(state_));
  }
}

Digest ApprovalSession::commit(uint64_t data) {
  require(SessionState::Fresh, "commit");
  std::vector<Scalar> ks;
  for (size_t k = 0; k < setup_.nonce_batch; ++k) ks.push_back(setup_.group->scalars().random_nonzero(rng_));
  return commit_with_nonces(data, std::move(ks));
}

Digest ApprovalSession::commit_with_nonces(uint64_t data, std::vector<Scalar> nonces) {
  require(SessionState::Fresh, "commit");
  if (nonces.size() != setup_.nonce_batch) throw std::invalid_argument("wrong nonce count");
  const Group& g = *setup_.group;
  const auto& params = setup_.params;

  masking::MaskMap masks;
  for (const auto& [j, s] : secrets_) masks[j] = s.alpha;
  mask_ = masking::mask_data(setup_.self, data, params, masks, rng_);

  reveal_msg_ = RevealMsg{};
  for (const auto& k : nonces) {
    if (k.is_zero()) throw std::invalid_argument("zero nonce");
    reveal_msg_.nonces.push_back(g.mul_gen(k));
    nonces_.emplace_back(k);
  }
  reveal_msg_.c = mask_.c;
  reveal_msg_.h = mask_.h;
  for (const auto& [holder, value] : mask_.shares) {
    reveal_msg_.shares.push_back(
        {static_cast<uint8_t>(holder),
         encrypt_share(secrets_.at(holder).key, setup_.uid, setup_.self, holder, value,
                       params.share_width())});
  }
  com_ = commitment(reveal_msg_);
  state_ = SessionState::AwaitLcom;
  return com_;
}

const RevealMsg& ApprovalSession::reveal(std::span<const Digest> l_com) {
  require(SessionState::AwaitLcom, "reveal");
  if (l_com.size() != size() || l_com[setup_.self] != com_) {
    throw std::runtime_error("own commitment missing from L_com");
  }
  l_com_.assign(l_com.begin(), l_com.end());
  state_ = SessionState::AwaitReveals;
  return reveal_msg_;
}

RevealSummary ApprovalSession::verify_reveals(std::span<const RevealMsg> msgs) {
  require(SessionState::AwaitReveals, "verify_reveals");
  const uint32_t n = size();
  if (msgs.size() != n) throw std::invalid_argument("expected one reveal per member");
  const auto& params = setup_.params;
  std::map<uint32_t, uint64_t> shares;
  for (uint32_t j = 0; j < n; ++j) {
    const auto& m = msgs[j];
    if (commitment(m) != l_com_[j]) throw BindingError(j, "reveal of member " + std::to_string(j) + " does not match its commitment");
    if (m.nonces.size() != setup_.nonce_batch) throw BindingError(j, "wrong nonce batch size");
    if (m.c >= params.p_mk) throw BindingError(j, "masked value out of range");
    if (j == setup_.self) continue;
    auto it = std::find_if(m.shares.begin(), m.shares.end(),
                           [&](const EncryptedShare& s) { return s.holder == setup_.self; });
    if (it == m.shares.end()) throw BindingError(j, "no share addressed to us");
    auto v = decrypt_share(secrets_.at(j).key, setup_.uid, j, setup_.self, it->ciphertext,
                           params.share_width());
    if (!v || *v >= params.p_sm) throw BindingError(j, "share does not decrypt");
    shares[j] = *v;
  }
  peers_.assign(msgs.begin(), msgs.end());
  held_shares_ = std::move(shares);
  members_.resize(n);
  for (uint32_t j = 0; j < n; ++j) members_[j] = j;

  agg_key_ = aggregate_key(*setup_.group, setup_.roster);
  agg_R_ = nonce_sum(0);
  next_slot_ = 0;
  std::vector<uint64_t> cs;
  for (const auto& m : peers_) cs.push_back(m.c);
  avg_ = {masking::sum_masked(cs, params), n};
  state_ = SessionState::Revealed;
  return {agg_R_, avg_};
}

GroupPoint ApprovalSession::nonce_sum(size_t slot) const {
  const Group& g = *setup_.group;
  GroupPoint acc = g.identity();
  for (uint32_t j : members_) acc = g.add(acc, peers_[j].nonces.at(slot));
  return acc;
}

SubApproval ApprovalSession::sign_slot(size_t slot, const AverageValue& avg) {
  if (slot >= nonces_.size()) throw ProtocolStateError("pre-committed nonces exhausted");
  if (!nonces_[slot]) throw ProtocolStateError("nonce already consumed");
  if (avg != avg_) throw std::invalid_argument("average differs from the locally computed one");
  const Group& g = *setup_.group;
  const Scalar e = approval_challenge(g, agg_key_.pk, agg_R_, avg);
  const Scalar s = sub_approval_scalar(g.scalars(), *nonces_[slot], agg_key_.coeff_of(kp_.pk), kp_.sk, e);
  nonces_[slot].reset();
  next_slot_ = slot + 1;
  state_ = SessionState::Approved;
  return {s, agg_R_};
}

SubApproval ApprovalSession::sub_approve(const AverageValue& avg) {
  require(SessionState::Revealed, "sub_approve");
  if (excluded_once_) throw ProtocolStateError("use re_approve after an exclusion");
  return sign_slot(0, avg);
}

uint64_t ApprovalSession::held_share(uint32_t owner) const {
  auto it = held_shares_.find(owner);
  if (it == held_shares_.end()) throw std::out_of_range("no share held for member " + std::to_string(owner));
  return it->second;
}

AverageValue ApprovalSession::apply_exclusion(std::span<const uint32_t> bad,
                                              const std::map<uint32_t, uint64_t>& betas) {
  require(SessionState::Approved, "apply_exclusion");
  if (excluded_once_) throw ProtocolStateError("exclusion already applied");
  std::set<uint32_t> bad_set(bad.begin(), bad.end());
  if (bad_set.empty() || bad_set.size() != bad.size()) throw std::invalid_argument("bad list empty or repeated");
  if (bad_set.count(setup_.self)) throw ProtocolStateError("this member was excluded");
  const auto& params = setup_.params;
  uint64_t sum = avg_.sum;
  for (uint32_t b : bad_set) {
    if (b >= size()) throw std::invalid_argument("bad index out of range");
    auto it = betas.find(b);
    if (it == betas.end()) throw std::invalid_argument("missing beta for member " + std::to_string(b));
    if (!masking::verify_beta(it->second, peers_[b].h)) {
      throw std::invalid_argument("beta for member " + std::to_string(b) + " fails its hash");
    }
    sum = masking::exclude_and_resum(sum, peers_[b].c, it->second, params);
  }
  std::vector<uint32_t> good;
  std::vector<GroupPoint> keys;
  for (uint32_t j = 0; j < size(); ++j) {
    if (bad_set.count(j)) continue;
    good.push_back(j);
    keys.push_back(setup_.roster[j]);
  }
  if (good.size() < 2) throw std::invalid_argument("fewer than two members remain");
  members_ = std::move(good);
  agg_key_ = aggregate_key(*setup_.group, keys);
  if (next_slot_ >= nonces_.size()) throw ProtocolStateError("pre-committed nonces exhausted");
  agg_R_ = nonce_sum(next_slot_);
  avg_ = {sum, static_cast<uint32_t>(members_.size())};
  excluded_once_ = true;
  state_ = SessionState::Revealed;
  return avg_;
}

SubApproval ApprovalSession::re_approve(const AverageValue& avg) {
  require(SessionState::Revealed, "re_approve");
  if (!excluded_once_) throw ProtocolStateError("re_approve before any exclusion");
  return sign_slot(next_slot_, avg);
}

}  // namespace sada::approval
