#include <doctest.h>

#include "sada/crypto/rng.hpp"
#include "sada/schnorr/batch.hpp"
#include "sada/schnorr/schnorr.hpp"
#include "support.hpp"

using namespace sada;
using namespace sada::schnorr;
using sada::testing::toy_value;

namespace {

std::vector<BatchItem> honest_batch(const Group& g, size_t n, Drbg& rng) {
  std::vector<BatchItem> items;
  for (size_t i = 0; i < n; ++i) {
    auto kp = KeyPair::generate(g, rng);
    auto msg = rng.bytes(16);
    items.push_back({kp.pk, msg, sign(g, kp, msg, rng)});
  }
  return items;
}

void corrupt(const Group& g, BatchItem& item) {
  item.sig.s = g.scalars().add(item.sig.s, g.scalars().one());
}

std::vector<size_t> oracle(const Group& g, const std::vector<BatchItem>& items) {
  std::vector<size_t> bad;
  for (size_t i = 0; i < items.size(); ++i)
    if (!verify(g, items[i].pk, items[i].message, items[i].sig)) bad.push_back(i);
  return bad;
}

}  // namespace

TEST_CASE("toy keygen and signing by hand") {
  auto g = toy_group();
  const auto& f = g->scalars();
  auto kp = KeyPair::from_secret(*g, f.from_u64(3));
  CHECK(toy_value(kp.pk) == 8);
  auto sig = sign_with_challenge(*g, kp, f.from_u64(4), f.from_u64(5));
  CHECK(sig.s.value() == 8);
  CHECK(toy_value(sig.R) == 16);
  // g^8 = 3 = 16 * 8^5 mod 23
  CHECK(toy_value(g->mul_gen(sig.s)) == 3);
  CHECK(check_equation(*g, kp.pk, sig.R, sig.s, f.from_u64(5)));
  CHECK_FALSE(check_equation(*g, kp.pk, sig.R, f.from_u64(9), f.from_u64(5)));
  CHECK_THROWS_AS(KeyPair::from_secret(*g, f.zero()), std::invalid_argument);
}

TEST_CASE("keygen is seeded and keys are on the group") {
  auto g = secp256k1_group();
  Drbg a(1), b(1);
  auto ka = KeyPair::generate(*g, a);
  auto kb = KeyPair::generate(*g, b);
  CHECK(ka.sk == kb.sk);
  CHECK(ka.pk == kb.pk);
  auto toy = toy_group();
  Drbg r(2);
  for (int i = 0; i < 10000; ++i) {
    auto kp = KeyPair::generate(*toy, r);
    CHECK_FALSE(kp.sk.is_zero());
    CHECK(toy->decode(kp.pk.bytes()) == kp.pk);
  }
}

TEST_CASE("sign and verify") {
  auto g = secp256k1_group();
  Drbg rng(3);
  for (int i = 0; i < 200; ++i) {
    auto kp = KeyPair::generate(*g, rng);
    auto other = KeyPair::generate(*g, rng);
    auto msg = rng.bytes(1 + rng.uniform(64));
    auto sig = sign(*g, kp, msg, rng);
    CHECK(verify(*g, kp.pk, msg, sig));
    auto flipped = msg;
    flipped[rng.uniform(flipped.size())] ^= static_cast<uint8_t>(1u << rng.uniform(8));
    CHECK_FALSE(verify(*g, kp.pk, flipped, sig));
    CHECK_FALSE(verify(*g, other.pk, msg, sig));
    auto bumped = sig;
    bumped.s = g->scalars().add(sig.s, g->scalars().one());
    CHECK_FALSE(verify(*g, kp.pk, msg, bumped));
  }
}

TEST_CASE("signature wire form") {
  auto g = secp256k1_group();
  Drbg rng(4);
  auto kp = KeyPair::generate(*g, rng);
  auto msg = to_bytes("hello");
  auto sig = sign(*g, kp, msg, rng);
  auto enc = sig.encode(*g);
  CHECK(enc.size() == 65);
  auto back = Signature::decode(*g, enc);
  CHECK(back.s == sig.s);
  CHECK(back.R == sig.R);
  CHECK(verify_encoded(*g, kp.pk, msg, enc).ok);

  auto shortened = Bytes(enc.begin(), enc.end() - 1);
  auto r = verify_encoded(*g, kp.pk, msg, shortened);
  CHECK_FALSE(r.ok);
  CHECK_FALSE(r.detail.empty());
  Bytes big_s(enc.begin(), enc.end());
  std::fill(big_s.begin(), big_s.begin() + 32, 0xff);
  CHECK_FALSE(verify_encoded(*g, kp.pk, msg, big_s).ok);
  Bytes bad_r(enc.begin(), enc.end());
  bad_r[32] = 0x07;
  CHECK_FALSE(verify_encoded(*g, kp.pk, msg, bad_r).ok);
}

TEST_CASE("batch verification") {
  auto g = secp256k1_group();
  Drbg rng(5);
  CHECK(batch_verify(*g, {}, rng).valid);
  auto items = honest_batch(*g, 20, rng);
  CHECK(batch_verify(*g, items, rng).valid);
  CHECK(batch_verify_naive(*g, items, rng).valid);
  corrupt(*g, items[13]);
  CHECK_FALSE(batch_verify(*g, items, rng).valid);
  CHECK_FALSE(batch_verify_naive(*g, items, rng).valid);

  auto malformed = honest_batch(*g, 3, rng);
  malformed[1].sig.R = GroupPoint{};
  auto out = batch_verify(*g, malformed, rng);
  CHECK_FALSE(out.valid);
  REQUIRE(out.malformed_index.has_value());
  CHECK(*out.malformed_index == 1);
}

TEST_CASE("batch and naive agree on random batches") {
  auto g = secp256k1_group();
  Drbg rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    auto items = honest_batch(*g, 1 + rng.uniform(8), rng);
    auto n_bad = rng.uniform(3);
    for (uint64_t k = 0; k < n_bad; ++k) corrupt(*g, items[rng.uniform(items.size())]);
    bool expect = oracle(*g, items).empty();
    CHECK(batch_verify(*g, items, rng).valid == expect);
    CHECK(batch_verify_naive(*g, items, rng).valid == expect);
  }
}

TEST_CASE("toy batch false-accept rate stays near 1/q") {
  // Weights live in Z_11, so a single bad item slips through with
  // probability about 1/11.
  auto g = toy_group();
  Drbg rng(7);
  int accepts = 0;
  const int trials = 2000;
  for (int t = 0; t < trials; ++t) {
    auto items = honest_batch(*g, 4, rng);
    corrupt(*g, items[1 + rng.uniform(3)]);
    if (batch_verify(*g, items, rng).valid) ++accepts;
  }
  CHECK(accepts < trials / 11 * 2);
}

TEST_CASE("bad signature identification") {
  auto g = secp256k1_group();
  Drbg rng(8);
  auto items = honest_batch(*g, 8, rng);
  CHECK(identify_bad_signatures(*g, items, rng).empty());
  auto one = items;
  corrupt(*g, one[5]);
  CHECK(identify_bad_signatures(*g, one, rng) == std::vector<size_t>{5});
  auto two = items;
  corrupt(*g, two[2]);
  corrupt(*g, two[7]);
  IdentifyStats stats;
  CHECK(identify_bad_signatures(*g, two, rng, &stats) == std::vector<size_t>{2, 7});
  CHECK(stats.individual_checks > 0);

  for (int trial = 0; trial < 10; ++trial) {
    auto batch = honest_batch(*g, 2 + rng.uniform(10), rng);
    for (uint64_t k = 0, n = rng.uniform(4); k < n; ++k) corrupt(*g, batch[rng.uniform(batch.size())]);
    CHECK(identify_bad_signatures(*g, batch, rng) == oracle(*g, batch));
  }
}
