#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "cluster_fixture.hpp"
#include "sada/approval/agg_key.hpp"
#include "sada/approval/approval.hpp"
#include "sada/crypto/hash.hpp"
#include "support.hpp"

using namespace sada;
using namespace sada::approval;
using sada::testing::make_cluster;
using sada::testing::run_round;

namespace {

std::vector<uint64_t> sample_data(size_t n, Drbg& rng) {
  std::vector<uint64_t> d(n);
  for (auto& v : d) v = rng.uniform(10000);
  return d;
}

}  // namespace

TEST_CASE("aggregate key is order independent and matches the naive product") {
  auto g = secp256k1_group();
  Drbg rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<GroupPoint> keys;
    size_t n = 2 + rng.uniform(10);
    for (size_t i = 0; i < n; ++i) keys.push_back(schnorr::KeyPair::generate(*g, rng).pk);
    auto agg = aggregate_key(*g, keys);
    auto shuffled = keys;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(aggregate_key(*g, shuffled).pk == agg.pk);

    // independent recomputation: hash every coefficient by hand, one
    // exponentiation per key
    auto list = canonical_encode_keys(keys);
    GroupPoint naive = g->identity();
    for (const auto& k : keys) {
      auto a = domain_hash_scalar(g->scalars(), HashTag::Agg, {list, k.bytes()});
      naive = g->add(naive, g->mul(k, a));
    }
    CHECK(naive == agg.pk);
  }
}

TEST_CASE("aggregate key errors and unit coefficients") {
  auto g = toy_group();
  const auto& f = g->scalars();
  auto p1 = g->mul_gen(f.from_u64(3));
  auto p2 = g->mul_gen(f.from_u64(5));
  CHECK_THROWS_AS(aggregate_key(*g, std::vector<GroupPoint>{p1}), std::invalid_argument);
  CHECK_THROWS_AS(aggregate_key(*g, std::vector<GroupPoint>{p1, p1}), std::invalid_argument);
  std::vector<Scalar> ones{f.one(), f.one()};
  auto agg = aggregate_key_with_coeffs(*g, std::vector<GroupPoint>{p1, p2}, ones);
  // 8 * 32 mod 23 = 3 * 9 mod 23
  CHECK(sada::testing::toy_value(agg.pk) == 8 * 9 % 23);
}

TEST_CASE("toy sub-approval by hand") {
  const auto& f = toy_group()->scalars();
  CHECK(sub_approval_scalar(f, f.from_u64(4), f.one(), f.from_u64(3), f.from_u64(5)).value() == 8);
  CHECK(sub_approval_scalar(f, f.from_u64(4), f.zero(), f.from_u64(3), f.from_u64(5)).value() == 4);
}

TEST_CASE("toy two-member approval by hand") {
  // sk = (3, 5), a = (1, 1), k = (4, 2), e = 5:
  // s~ = (4 + 15) + (2 + 25) = 46 = 2 mod 11
  // R~ = 2^6 = 18, pk~ = 2^8 = 3, check 2^2 = 4 = 18 * 3^5 mod 23
  auto g = toy_group();
  const auto& f = g->scalars();
  Scalar e = f.from_u64(5);
  std::vector<SubApproval> subs;
  GroupPoint R = g->mul_gen(f.from_u64(6));
  subs.push_back({sub_approval_scalar(f, f.from_u64(4), f.one(), f.from_u64(3), e), R});
  subs.push_back({sub_approval_scalar(f, f.from_u64(2), f.one(), f.from_u64(5), e), R});
  auto appr = aggregate_approval(*g, subs);
  CHECK(appr.s.value() == 2);
  CHECK(sada::testing::toy_value(R) == 18);
  auto pk = g->mul_gen(f.from_u64(8));
  CHECK(sada::testing::toy_value(pk) == 3);
  CHECK(schnorr::check_equation(*g, pk, R, appr.s, e));
  CHECK((sada::testing::powmod(2, 2, 23)) == 18 * sada::testing::powmod(3, 5, 23) % 23);

  std::vector<SubApproval> mixed{subs[0], {subs[1].s, g->mul_gen(f.from_u64(7))}};
  CHECK_THROWS_AS(aggregate_approval(*g, mixed), std::invalid_argument);
  CHECK_THROWS_AS(aggregate_approval(*g, std::vector<SubApproval>{}), std::invalid_argument);
}

TEST_CASE("average value encoding") {
  AverageValue avg{60, 3};
  auto enc = avg.encode();
  CHECK(enc.size() == kAverageBytes);
  CHECK(to_hex(enc) == "000000000000003c00000003");
  CHECK(AverageValue::decode(enc) == avg);
  CHECK(avg.mean() == doctest::Approx(20.0));
  CHECK_THROWS_AS(AverageValue::decode(Bytes(11, 0)), DecodeError);
}

TEST_CASE("honest pipeline verifies") {
  auto g = secp256k1_group();
  Drbg rng(2);
  for (uint32_t n : {2u, 3u, 7u}) {
    auto params = masking::MaskingParams::production(n, n == 2 ? 1 : 2);
    auto c = make_cluster(g, params, rng);
    auto data = sample_data(n, rng);
    run_round(c, data);
    const auto& avg = c.sessions[0]->average();
    CHECK(avg.sum == std::accumulate(data.begin(), data.end(), uint64_t{0}));
    CHECK(avg.count == n);
    for (auto& s : c.sessions) CHECK(s->average().encode() == avg.encode());
    auto appr = aggregate_approval(*g, c.subs);
    auto pk = c.sessions[0]->agg_key().pk;
    CHECK(verify_approval(*g, pk, avg, appr));
    CHECK(verify_approval_encoded(*g, pk, avg, appr.encode(*g)).ok);

    auto shuffled = c.subs;
    std::reverse(shuffled.begin(), shuffled.end());
    CHECK(aggregate_approval(*g, shuffled).s == appr.s);

    AverageValue bumped{avg.sum + 1, avg.count};
    CHECK_FALSE(verify_approval(*g, pk, bumped, appr));
    auto s1 = appr;
    s1.s = g->scalars().add(appr.s, g->scalars().one());
    CHECK_FALSE(verify_approval(*g, pk, avg, s1));
    auto bad_sub = c.subs;
    bad_sub[0].s = g->scalars().add(bad_sub[0].s, g->scalars().from_u64(9));
    CHECK_FALSE(verify_approval(*g, pk, avg, aggregate_approval(*g, bad_sub)));
    CHECK_FALSE(verify_approval_encoded(*g, pk, avg, Bytes(65, 0xff)).ok);
  }
}

TEST_CASE("toy cluster reproduces the masked average") {
  auto g = secp256k1_group();
  Drbg rng(3);
  auto c = make_cluster(g, masking::MaskingParams::toy(3, 2), rng);
  run_round(c, {10, 20, 30});
  CHECK(c.sessions[1]->average() == AverageValue{60, 3});
  CHECK(c.sessions[1]->average().mean() == doctest::Approx(20.0));
}

TEST_CASE("commitment binds every field of m_i") {
  auto g = secp256k1_group();
  Drbg rng(4);
  auto c = make_cluster(g, masking::MaskingParams::production(4, 2), rng);
  std::vector<uint64_t> data{1, 2, 3, 4};
  for (size_t i = 0; i < 4; ++i) c.l_com.push_back(c.sessions[i]->commit(data[i]));
  for (size_t i = 0; i < 4; ++i) CHECK(commitment(c.sessions[i]->own_reveal()) == c.l_com[i]);
  for (auto& s : c.sessions) c.reveals.push_back(s->reveal(c.l_com));

  auto try_with = [&](auto mutate) {
    auto msgs = c.reveals;
    mutate(msgs[2]);
    try {
      c.sessions[0]->verify_reveals(msgs);
    } catch (const BindingError& e) {
      return static_cast<int>(e.index());
    }
    return -1;
  };
  CHECK(try_with([](RevealMsg& m) { m.c += 1; }) == 2);
  CHECK(try_with([](RevealMsg& m) { m.h[0] ^= 1; }) == 2);
  CHECK(try_with([&](RevealMsg& m) { m.nonces[0] = g->add(m.nonces[0], g->generator()); }) == 2);
  CHECK(try_with([&](RevealMsg& m) { m.nonces[1] = g->generator(); }) == 2);
  CHECK(try_with([](RevealMsg& m) { m.shares[0].ciphertext[0] ^= 1; }) == 2);
  // the failed attempts left the session usable
  CHECK(c.sessions[0]->state() == SessionState::AwaitReveals);
  CHECK_NOTHROW(c.sessions[0]->verify_reveals(c.reveals));
}

TEST_CASE("nonces change the commitment") {
  auto g = secp256k1_group();
  Drbg rng(5);
  auto params = masking::MaskingParams::production(3, 2);
  auto c1 = make_cluster(g, params, rng);
  // same member, same data, same masks; only the nonces differ
  std::map<uint32_t, masking::PairwiseSecret> sec;
  for (uint32_t j = 1; j < 3; ++j) sec[j] = masking::agree_pairwise(*g, c1.keys[0], j, c1.roster[j], c1.uid);
  SessionSetup setup{g, params, 0, c1.uid, c1.roster, 2};
  ApprovalSession a(setup, c1.keys[0], sec, Drbg(7));
  ApprovalSession b(setup, c1.keys[0], sec, Drbg(7));
  const auto& f = g->scalars();
  auto ca = a.commit_with_nonces(5, {f.from_u64(11), f.from_u64(12)});
  auto cb = b.commit_with_nonces(5, {f.from_u64(13), f.from_u64(12)});
  CHECK(ca != cb);
}

TEST_CASE("session state machine") {
  auto g = secp256k1_group();
  Drbg rng(6);
  auto c = make_cluster(g, masking::MaskingParams::production(3, 2), rng);
  auto& s = *c.sessions[0];
  std::vector<Digest> fake(3);
  CHECK_THROWS_AS(s.reveal(fake), ProtocolStateError);
  CHECK_THROWS_AS(s.sub_approve({0, 3}), ProtocolStateError);
  for (auto& x : c.sessions) c.l_com.push_back(x->commit(1));
  CHECK_THROWS_AS(s.commit(1), ProtocolStateError);
  auto missing = c.l_com;
  missing[0][5] ^= 1;
  CHECK_THROWS_AS(s.reveal(missing), std::runtime_error);
  CHECK(s.state() == SessionState::AwaitLcom);
  for (auto& x : c.sessions) c.reveals.push_back(x->reveal(c.l_com));
  for (auto& x : c.sessions) x->verify_reveals(c.reveals);
  CHECK_THROWS_AS(s.sub_approve({4, 3}), std::invalid_argument);
  CHECK_NOTHROW(s.sub_approve(s.average()));
  CHECK_THROWS_AS(s.sub_approve(s.average()), ProtocolStateError);
  CHECK_THROWS_AS(s.re_approve(s.average()), ProtocolStateError);
}

TEST_CASE("single-member clusters are rejected") {
  auto g = secp256k1_group();
  Drbg rng(7);
  auto kp = schnorr::KeyPair::generate(*g, rng);
  SessionSetup setup{g, masking::MaskingParams::toy(1, 1), 0, {}, {kp.pk}, 2};
  CHECK_THROWS_AS(ApprovalSession(setup, kp, {}, Drbg(1)), std::invalid_argument);
}

TEST_CASE("exclusion and re-approval") {
  auto g = secp256k1_group();
  Drbg rng(8);
  auto params = masking::MaskingParams::production(6, 3);
  auto c = make_cluster(g, params, rng);
  std::vector<uint64_t> data{5, 10, 15, 20, 25, 30};
  run_round(c, data);

  // member 4 is excluded; members 0, 1, 2 provide their shares of β_4
  std::vector<masking::Share> shares;
  for (uint32_t j : {0u, 1u, 2u}) shares.push_back({masking::share_point(j), c.sessions[j]->held_share(4)});
  uint64_t beta = masking::reconstruct_beta(shares, params);
  CHECK(beta == c.sessions[4]->masking_output().beta);

  std::vector<uint32_t> bad{4};
  std::map<uint32_t, uint64_t> betas{{4, beta}};
  std::map<uint32_t, uint64_t> wrong{{4, beta + 1}};
  CHECK_THROWS_AS(c.sessions[0]->apply_exclusion(bad, wrong), std::invalid_argument);
  CHECK_THROWS_AS(c.sessions[4]->apply_exclusion(bad, betas), ProtocolStateError);

  std::vector<SubApproval> subs;
  std::vector<GroupPoint> keys;
  AverageValue avg;
  for (uint32_t i = 0; i < 6; ++i) {
    if (i == 4) continue;
    avg = c.sessions[i]->apply_exclusion(bad, betas);
    subs.push_back(c.sessions[i]->re_approve(avg));
    keys.push_back(c.roster[i]);
  }
  CHECK(avg == AverageValue{80, 5});
  auto pk = aggregate_key(*g, keys).pk;
  CHECK(pk == c.sessions[0]->agg_key().pk);
  CHECK(verify_approval(*g, pk, avg, aggregate_approval(*g, subs)));
  CHECK_THROWS_AS(c.sessions[0]->re_approve(avg), ProtocolStateError);
}

TEST_CASE("rogue key attack fails") {
  // The adversary announces pk_adv = g^x − Σ a_i·pk_i, hoping pk~ = g^x.
  // Its coefficients are recomputed over the final list, so the forged
  // signature under g^x does not verify.
  auto g = secp256k1_group();
  const auto& f = g->scalars();
  Drbg rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<GroupPoint> honest;
    for (int i = 0; i < 4; ++i) honest.push_back(schnorr::KeyPair::generate(*g, rng).pk);
    auto honest_agg = aggregate_key(*g, honest);
    Scalar x = f.random_nonzero(rng);
    GroupPoint pk_adv = g->sub(g->mul_gen(x), honest_agg.pk);
    auto all = honest;
    all.push_back(pk_adv);
    auto agg = aggregate_key(*g, all);
    CHECK_FALSE(agg.pk == g->mul_gen(x));

    AverageValue avg{123, 5};
    Scalar k = f.random_nonzero(rng);
    GroupPoint R = g->mul_gen(k);
    // signature valid for the key the adversary believes in
    Scalar e_target = approval_challenge(*g, g->mul_gen(x), R, avg);
    ClusterApproval forged{f.add(k, f.mul(x, e_target)), R};
    CHECK(verify_approval(*g, g->mul_gen(x), avg, forged));
    CHECK_FALSE(verify_approval(*g, agg.pk, avg, forged));
    Scalar e_real = approval_challenge(*g, agg.pk, R, avg);
    ClusterApproval forged2{f.add(k, f.mul(x, e_real)), R};
    CHECK_FALSE(verify_approval(*g, agg.pk, avg, forged2));
  }
}

TEST_CASE("reveal message wire layout") {
  auto g = secp256k1_group();
  Drbg rng(10);
  auto c = make_cluster(g, masking::MaskingParams::production(20, 10), rng);
  for (auto& s : c.sessions) c.l_com.push_back(s->commit(rng.uniform(100)));
  const auto& m = c.sessions[3]->own_reveal();
  auto enc = m.encode();
  CHECK(enc.size() == 1 + 2 * 33 + 8 + 32 + 1 + 19 * (1 + 8 + 16));
  auto back = RevealMsg::decode(*g, enc, 8);
  CHECK(back.encode() == enc);
  CHECK(commitment(back) == c.l_com[3]);
  CHECK_THROWS_AS(RevealMsg::decode(*g, Bytes(enc.begin(), enc.end() - 1), 8), DecodeError);

  auto toy_c = make_cluster(g, masking::MaskingParams{65519, 65521, 10, 20}, rng);
  toy_c.sessions[0]->commit(7);
  CHECK(toy_c.sessions[0]->own_reveal().encode().size() == 1 + 66 + 8 + 32 + 1 + 19 * (1 + 2 + 16));
}
