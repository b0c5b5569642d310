#include <doctest.h>

#include <numeric>
#include <set>

#include "sada/crypto/rng.hpp"
#include "sada/masking/modarith.hpp"
#include "sada/masking/pairwise.hpp"
#include "sada/masking/recoverable_masking.hpp"
#include "sada/masking/shamir.hpp"
#include "support.hpp"

using namespace sada;
using namespace sada::masking;

namespace {

// Symmetric random masks for a whole cluster.
std::vector<MaskMap> random_masks(uint32_t n, uint64_t p, Drbg& rng) {
  std::vector<MaskMap> m(n);
  for (uint32_t i = 0; i < n; ++i)
    for (uint32_t j = i + 1; j < n; ++j) {
      U256 a = rng.uniform(p);
      m[i][j] = a;
      m[j][i] = a;
    }
  return m;
}

std::vector<MaskMap> toy_masks() {
  std::vector<MaskMap> m(3);
  m[0] = {{1, 5}, {2, 7}};
  m[1] = {{0, 5}, {2, 11}};
  m[2] = {{0, 7}, {1, 11}};
  return m;
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(MaskingParams::production(20, 10).validate());
  CHECK_NOTHROW(MaskingParams::toy(3, 2).validate());
  CHECK_NOTHROW(MaskingParams::toy(2, 1).validate());
  CHECK_THROWS_AS(MaskingParams::toy(3, 1).validate(), std::invalid_argument);
  CHECK_THROWS_AS(MaskingParams::toy(3, 3).validate(), std::invalid_argument);
  CHECK_THROWS_AS(MaskingParams::toy(1, 1).validate(), std::invalid_argument);
  CHECK_THROWS_AS((MaskingParams{97, 100, 2, 3}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((MaskingParams{101, 97, 2, 3}).validate(), std::invalid_argument);
  CHECK(MaskingParams::toy(3, 2).share_width() == 2);
  CHECK(MaskingParams::production(20, 10).share_width() == 8);
  CHECK(is_prime_u64(kDefaultShareField));
  CHECK(is_prime_u64(kDefaultMaskModulus));
  for (uint64_t n = kDefaultMaskModulus + 1; n < kDefaultShareField; ++n) CHECK_FALSE(is_prime_u64(n));
  CHECK(is_prime_u64(65521));
  CHECK_FALSE(is_prime_u64(65519 * 3ULL));
}

TEST_CASE("toy reconstruction parameters") {
  auto params = MaskingParams::toy(3, 2);
  auto masks = toy_masks();
  CHECK(compute_beta(0, masks[0], params) == 12);
  CHECK(compute_beta(1, masks[1], params) == 6);
  CHECK(compute_beta(2, masks[2], params) == 79);
  CHECK((12 + 6 + 79) % 97 == 0);
  MaskMap missing = {{1, 5}};
  CHECK_THROWS_AS(compute_beta(0, missing, params), std::invalid_argument);
}

TEST_CASE("toy masking and sum") {
  auto params = MaskingParams::toy(3, 2);
  auto masks = toy_masks();
  Drbg rng(1);
  std::vector<uint64_t> data{10, 20, 30};
  std::vector<uint64_t> cs;
  for (uint32_t i = 0; i < 3; ++i) cs.push_back(mask_data(i, data[i], params, masks[i], rng).c);
  CHECK(cs == std::vector<uint64_t>{22, 26, 12});
  CHECK(sum_masked(cs, params) == 60);
  CHECK_THROWS_AS(sum_masked(std::vector<uint64_t>{22, 26}, params), std::invalid_argument);
  CHECK(exclude_and_resum(60, 12, 79, params) == 30);
  CHECK_THROWS_AS(mask_data(0, 97, params, masks[0], rng), std::invalid_argument);
}

TEST_CASE("two-member cluster") {
  auto params = MaskingParams::toy(2, 1);
  std::vector<MaskMap> masks{{{1, 96}}, {{0, 96}}};
  Drbg rng(2);
  auto c0 = mask_data(0, 1, params, masks[0], rng).c;
  auto c1 = mask_data(1, 1, params, masks[1], rng).c;
  CHECK(c0 == 0);
  CHECK(c1 == 2);
  CHECK(sum_masked(std::vector<uint64_t>{c0, c1}, params) == 2);
}

TEST_CASE("zero masks leave data unchanged") {
  auto params = MaskingParams::toy(4, 2);
  Drbg rng(3);
  for (uint32_t i = 0; i < 4; ++i) {
    MaskMap m;
    for (uint32_t j = 0; j < 4; ++j)
      if (j != i) m[j] = 0;
    auto out = mask_data(i, 40 + i, params, m, rng);
    CHECK(out.beta == 0);
    CHECK(out.c == 40 + i);
  }
}

TEST_CASE("shares follow the supplied polynomial") {
  // β = 12, f(x) = 12 + 3x over GF(101)
  auto params = MaskingParams::toy(3, 2);
  auto masks = toy_masks();
  std::vector<uint64_t> higher{3};
  auto out = mask_data_with_polynomial(0, 10, params, masks[0], higher);
  CHECK(out.beta == 12);
  CHECK(out.shares.size() == 2);
  CHECK(out.shares.at(1) == 18);  // x = 2
  CHECK(out.shares.at(2) == 21);  // x = 3
  CHECK(out.h == hash_mask(12));
  std::vector<Share> s{{2, 18}, {3, 21}};
  CHECK(reconstruct_beta(s, params) == 12);
  CHECK((18 * 3 + 101 - (21 * 2) % 101) % 101 == 12);
}

TEST_CASE("reconstruction errors and zero secret") {
  auto params = MaskingParams::toy(5, 3);
  std::vector<Share> two{{1, 5}, {2, 6}};
  CHECK_THROWS_AS(reconstruct_beta(two, params), std::invalid_argument);
  std::vector<Share> dup{{1, 5}, {1, 5}, {2, 6}};
  CHECK_THROWS_AS(reconstruct_beta(dup, params), std::invalid_argument);
  Drbg rng(4);
  auto poly = random_polynomial(0, 3, params.p_sm, rng);
  std::vector<Share> s;
  for (uint32_t x : {2u, 4u, 5u}) s.push_back({x, eval_polynomial(poly, x, params.p_sm)});
  CHECK(reconstruct_beta(s, params) == 0);
}

TEST_CASE("hash_mask check") {
  CHECK(verify_beta(12, hash_mask(12)));
  CHECK_FALSE(verify_beta(13, hash_mask(12)));
}

TEST_CASE("reconstruction from random share subsets") {
  Drbg rng(5);
  auto params = MaskingParams::production(20, 10);
  int caught = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto masks = random_masks(20, params.p_mk, rng);
    uint32_t self = static_cast<uint32_t>(rng.uniform(20));
    auto out = mask_data(self, rng.uniform(1000), params, masks[self], rng);
    std::vector<uint32_t> holders;
    for (auto& [j, v] : out.shares) holders.push_back(j);
    std::shuffle(holders.begin(), holders.end(), rng);
    std::vector<Share> s;
    for (uint32_t k = 0; k < params.t_sm; ++k) s.push_back({share_point(holders[k]), out.shares[holders[k]]});
    auto beta = reconstruct_beta(s, params);
    CHECK(beta == out.beta);
    CHECK(verify_beta(beta, out.h));
    // a corrupted share must not pass the hash check
    s[rng.uniform(s.size())].y = add_mod(s[0].y, 1 + rng.uniform(params.p_sm - 1), params.p_sm);
    if (!verify_beta(reconstruct_beta(s, params), out.h)) ++caught;
  }
  CHECK(caught == 1000);
}

TEST_CASE("fewer than t shares leave beta undetermined on the toy field") {
  // With t = 3 and two shares fixed, every candidate secret in GF(101) has
  // exactly one consistent polynomial.
  const uint64_t p = 101;
  std::vector<uint64_t> poly{12, 40, 7};
  std::vector<Share> known{{2, eval_polynomial(poly, 2, p)}, {5, eval_polynomial(poly, 5, p)}};
  std::vector<int> count(p, 0);
  for (uint64_t a1 = 0; a1 < p; ++a1)
    for (uint64_t a2 = 0; a2 < p; ++a2)
      for (uint64_t a0 = 0; a0 < p; ++a0) {
        std::vector<uint64_t> cand{a0, a1, a2};
        if (eval_polynomial(cand, 2, p) == known[0].y && eval_polynomial(cand, 5, p) == known[1].y)
          ++count[a0];
      }
  for (int c : count) CHECK(c == 1);
}

TEST_CASE("masked sum equals plain sum") {
  Drbg rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    uint32_t n = 2 + static_cast<uint32_t>(rng.uniform(39));
    auto params = MaskingParams::production(n, n == 2 ? 1 : 2);
    auto masks = random_masks(n, params.p_mk, rng);
    std::vector<uint64_t> data(n), cs(n);
    uint64_t beta_sum = 0;
    for (uint32_t i = 0; i < n; ++i) {
      data[i] = rng.uniform(1u << 20);
      auto out = mask_data(i, data[i], params, masks[i], rng);
      cs[i] = out.c;
      beta_sum = add_mod(beta_sum, out.beta, params.p_mk);
    }
    CHECK(beta_sum == 0);
    CHECK(sum_masked(cs, params) == std::accumulate(data.begin(), data.end(), uint64_t{0}));
  }
}

TEST_CASE("exclusion matches a fresh run without the member") {
  Drbg rng(7);
  auto params = MaskingParams::production(8, 4);
  auto masks = random_masks(8, params.p_mk, rng);
  std::vector<uint64_t> data(8), cs(8), betas(8);
  for (uint32_t i = 0; i < 8; ++i) {
    data[i] = rng.uniform(1000);
    auto out = mask_data(i, data[i], params, masks[i], rng);
    cs[i] = out.c;
    betas[i] = out.beta;
  }
  uint64_t sum = sum_masked(cs, params);
  uint64_t after = exclude_and_resum(sum, cs[3], betas[3], params);
  uint64_t expect = 0;
  for (uint32_t i = 0; i < 8; ++i)
    if (i != 3) expect += data[i];
  CHECK(after == expect);
  // and back again
  CHECK(sub_mod(add_mod(after, cs[3], params.p_mk), betas[3], params.p_mk) == sum);

  // exclude the only nonzero contributor
  std::vector<uint64_t> zeros(8, 0);
  zeros[5] = 77;
  for (uint32_t i = 0; i < 8; ++i) cs[i] = mask_data(i, zeros[i], params, masks[i], rng).c;
  CHECK(exclude_and_resum(sum_masked(cs, params), cs[5], betas[5], params) == 0);
}

TEST_CASE("pairwise agreement") {
  auto g = secp256k1_group();
  Drbg rng(8);
  auto a = schnorr::KeyPair::generate(*g, rng);
  auto b = schnorr::KeyPair::generate(*g, rng);
  auto uid1 = rng.bytes(32);
  auto uid2 = rng.bytes(32);
  auto ab = agree_pairwise(*g, a, 1, b.pk, uid1);
  auto ba = agree_pairwise(*g, b, 0, a.pk, uid1);
  CHECK(ab.alpha == ba.alpha);
  CHECK(ab.key == ba.key);
  CHECK(ab.peer == 1);
  auto ab2 = agree_pairwise(*g, a, 1, b.pk, uid2);
  CHECK(ab2.alpha != ab.alpha);
  CHECK(ab2.key != ab.key);
  CHECK_THROWS_AS(agree_pairwise(*g, a, 1, g->identity(), uid1), std::invalid_argument);
  CHECK_THROWS_AS(agree_pairwise(*g, a, 1, a.pk, uid1), std::invalid_argument);

  std::set<U256> seen;
  for (int i = 0; i < 1000; ++i) seen.insert(agree_pairwise(*g, a, 1, b.pk, rng.bytes(32)).alpha);
  CHECK(seen.size() == 1000);
}

TEST_CASE("toy pairwise shared point") {
  auto g = toy_group();
  const auto& f = g->scalars();
  auto a = schnorr::KeyPair::from_secret(*g, f.from_u64(3));
  auto b = schnorr::KeyPair::from_secret(*g, f.from_u64(4));
  auto shared = dh_shared_point(*g, a, b.pk);
  CHECK(sada::testing::toy_value(shared) == sada::testing::powmod(2, 3 * 4, 23));
  CHECK(shared == dh_shared_point(*g, b, a.pk));
  auto s = derive_pairwise(shared, 1, as_view("uid"));
  CHECK(s.alpha == agree_pairwise(*g, b, 0, a.pk, as_view("uid")).alpha);
}
