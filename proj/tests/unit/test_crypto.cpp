#include <doctest.h>

#include <algorithm>
#include <set>

#include "sada/crypto/encoding.hpp"
#include "sada/crypto/group.hpp"
#include "sada/crypto/hash.hpp"
#include "sada/crypto/pke.hpp"
#include "sada/crypto/rng.hpp"
#include "sada/crypto/symmetric.hpp"
#include "support.hpp"

using namespace sada;
using sada::testing::powmod;
using sada::testing::toy_point;
using sada::testing::toy_value;

TEST_CASE("toy scalar field matches integer arithmetic mod 11") {
  const auto& f = toy_group()->scalars();
  for (uint64_t a = 0; a < 11; ++a) {
    for (uint64_t b = 0; b < 11; ++b) {
      const auto sa = f.from_u64(a);
      const auto sb = f.from_u64(b);
      CHECK(f.add(sa, sb).value() == (a + b) % 11);
      CHECK(f.sub(sa, sb).value() == (a + 11 - b) % 11);
      CHECK(f.mul(sa, sb).value() == (a * b) % 11);
    }
    CHECK(f.neg(f.from_u64(a)).value() == (11 - a) % 11);
    if (a != 0) CHECK(f.mul(f.from_u64(a), f.inv(f.from_u64(a))) == f.one());
  }
  CHECK(f.from_u64(23).value() == 1);
}

TEST_CASE("toy group exponentiation") {
  auto g = toy_group();
  const auto& f = g->scalars();
  for (uint64_t k = 0; k < 11; ++k) {
    auto p = g->mul_gen(f.from_u64(k));
    if (k == 0) {
      CHECK(p.is_identity());
    } else {
      CHECK(toy_value(p) == powmod(2, k, 23));
    }
  }
  CHECK(toy_value(g->mul_gen(f.from_u64(3))) == 8);
  // shared point for sk 3 and 4 is g^12 = g^1 since g has order 11
  CHECK(toy_value(g->mul(g->mul_gen(f.from_u64(3)), f.from_u64(4))) == powmod(2, 12, 23));
  CHECK(powmod(2, 12, 23) == 2);
}

TEST_CASE("toy decode rejects non-members") {
  auto g = toy_group();
  std::set<uint64_t> qr;
  for (uint64_t k = 1; k < 11; ++k) qr.insert(powmod(2, k, 23));
  for (uint64_t v = 2; v < 23; ++v) {
    if (qr.count(v)) {
      CHECK(toy_value(toy_point(*g, v)) == v);
    } else {
      CHECK_THROWS_AS(toy_point(*g, v), DecodeError);
    }
  }
  CHECK_THROWS_AS(toy_point(*g, 23), DecodeError);
  CHECK_THROWS_AS(toy_point(*g, 1), DecodeError);  // identity has its own encoding
}

TEST_CASE("point encodings round-trip on both groups") {
  Drbg rng(1);
  for (auto g : {toy_group(), secp256k1_group()}) {
    for (int i = 0; i < 20; ++i) {
      auto p = g->mul_gen(g->scalars().random(rng));
      auto back = g->decode(p.bytes());
      CHECK(back == p);
      CHECK(std::equal(back.bytes().begin(), back.bytes().end(), p.bytes().begin()));
    }
    auto id = g->identity();
    CHECK(id.is_identity());
    CHECK(std::all_of(id.bytes().begin(), id.bytes().end(), [](uint8_t b) { return b == 0; }));
    CHECK(g->decode(id.bytes()) == id);
    CHECK_THROWS_AS(g->decode(Bytes(32, 0)), DecodeError);
  }
}

TEST_CASE("secp256k1 rejects off-curve and malformed bytes") {
  auto g = secp256k1_group();
  Drbg rng(2);
  auto p = g->mul_gen(g->scalars().random(rng));
  Bytes enc(p.bytes().begin(), p.bytes().end());
  Bytes bad_prefix = enc;
  bad_prefix[0] = 0x04;
  CHECK_THROWS_AS(g->decode(bad_prefix), DecodeError);
  // x = 5 has no square root of x^3 + 7 mod p
  Bytes x5(kPointBytes, 0);
  x5[0] = 0x02;
  x5[32] = 5;
  CHECK_THROWS_AS(g->decode(x5), DecodeError);
  CHECK_FALSE(toy_group()->owns(p));
}

TEST_CASE("group law on secp256k1") {
  auto g = secp256k1_group();
  const auto& f = g->scalars();
  Drbg rng(3);
  auto a = f.random(rng);
  auto b = f.random(rng);
  CHECK(g->add(g->mul_gen(a), g->mul_gen(b)) == g->mul_gen(f.add(a, b)));
  CHECK(g->mul(g->mul_gen(a), b) == g->mul(g->mul_gen(b), a));
  CHECK(g->add(g->mul_gen(a), g->negate(g->mul_gen(a))).is_identity());
  CHECK(g->mul_gen(f.zero()).is_identity());
}

TEST_CASE("multi_mul agrees with the naive sum") {
  for (auto g : {toy_group(), secp256k1_group()}) {
    Drbg rng(4);
    for (size_t n : {0u, 1u, 2u, 3u, 7u, 20u}) {
      std::vector<MulTerm> terms;
      for (size_t i = 0; i < n; ++i) {
        auto k = g->scalars().random(rng);
        if (i == 1) k = g->scalars().zero();
        terms.push_back({k, g->mul_gen(g->scalars().random(rng))});
      }
      if (n == 3) terms[2].point = g->identity();
      CHECK(g->multi_mul(terms) == g->multi_mul_naive(terms));
    }
  }
}

TEST_CASE("domain hash framing") {
  auto a = domain_hash(HashTag::Com, {as_view("ab"), as_view("c")});
  auto b = domain_hash(HashTag::Com, {as_view("a"), as_view("bc")});
  CHECK(a != b);
  CHECK(a == domain_hash(HashTag::Com, {as_view("ab"), as_view("c")}));
  CHECK(a != domain_hash(HashTag::Agg, {as_view("ab"), as_view("c")}));
  CHECK(domain_hash(HashTag::Com, {}) != domain_hash(HashTag::Com, {as_view("")}));

  CHECK(is_registered_tag(0x01));
  CHECK(is_registered_tag(0x06));
  CHECK_FALSE(is_registered_tag(0x00));
  CHECK_FALSE(is_registered_tag(0x07));
  CHECK_THROWS_AS(hash_tag_from_byte(0x42), std::invalid_argument);
  CHECK(hash_tag_from_byte(0x04) == HashTag::App);
}

TEST_CASE("scalar hash outputs are reduced") {
  Drbg rng(5);
  auto toy = toy_group();
  auto secp = secp256k1_group();
  for (int i = 0; i < 10000; ++i) {
    auto input = rng.bytes(1 + rng.uniform(40));
    CHECK(domain_hash_scalar(toy->scalars(), HashTag::App, {input}).value() < 11);
    CHECK(domain_hash_scalar(secp->scalars(), HashTag::App, {input}).value() < secp->order());
  }
}

TEST_CASE("canonical key encoding") {
  auto g = secp256k1_group();
  Drbg rng(6);
  auto pa = g->mul_gen(g->scalars().random_nonzero(rng));
  auto pb = g->mul_gen(g->scalars().random_nonzero(rng));
  std::vector<GroupPoint> ab{pa, pb};
  std::vector<GroupPoint> ba{pb, pa};
  CHECK(canonical_encode_keys(ab) == canonical_encode_keys(ba));

  std::vector<GroupPoint> one{pa};
  auto enc = canonical_encode_keys(one);
  REQUIRE(enc.size() == 4 + kPointBytes);
  CHECK(enc[0] == 0);
  CHECK(enc[3] == 1);
  CHECK(std::equal(pa.bytes().begin(), pa.bytes().end(), enc.begin() + 4));

  CHECK_THROWS_AS(canonical_encode_keys(std::vector<GroupPoint>{}), std::invalid_argument);
  CHECK_THROWS_AS(canonical_encode_keys(std::vector<GroupPoint>{GroupPoint{}}), std::invalid_argument);
}

TEST_CASE("distinct toy key sets encode distinctly") {
  auto g = toy_group();
  std::vector<GroupPoint> elems;
  for (uint64_t k = 1; k < 11; ++k) elems.push_back(g->mul_gen(g->scalars().from_u64(k)));
  std::set<Bytes> seen;
  for (unsigned mask = 1; mask < (1u << elems.size()); ++mask) {
    std::vector<GroupPoint> set;
    for (size_t i = 0; i < elems.size(); ++i)
      if (mask & (1u << i)) set.push_back(elems[i]);
    CHECK(seen.insert(canonical_encode_keys(set)).second);
  }
}

TEST_CASE("uid") {
  auto g = secp256k1_group();
  Drbg rng(7);
  std::vector<GroupPoint> keys;
  for (int i = 0; i < 5; ++i) keys.push_back(g->mul_gen(g->scalars().random_nonzero(rng)));
  auto uid = compute_uid(keys, 1000);
  std::reverse(keys.begin(), keys.end());
  CHECK(compute_uid(keys, 1000) == uid);

  std::set<Digest> uids;
  for (int i = 0; i < 10000; ++i) {
    uint64_t t = rng.next_u64() >> 1;
    auto u0 = compute_uid(keys, t);
    auto u1 = compute_uid(keys, t + 1);
    CHECK(u0 != u1);
    uids.insert(u0);
  }
  CHECK(uids.size() == 10000);
}

TEST_CASE("drbg") {
  Drbg a(9), b(9), c(10);
  auto x = a.bytes(100);
  CHECK(x == b.bytes(100));
  CHECK(x != c.bytes(100));
  CHECK(Drbg(9).fork(1).next_u64() != Drbg(9).fork(2).next_u64());
  Drbg r(11);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 7000; ++i) {
    auto v = r.uniform(7);
    REQUIRE(v < 7);
    ++hist[v];
  }
  for (int h : hist) CHECK(h > 800);
}

TEST_CASE("aead and hmac") {
  Drbg rng(12);
  SymKey key{};
  rng.fill(key);
  AeadNonce nonce{};
  auto pt = to_bytes("masked share");
  auto ct = aead_seal(key, nonce, pt, as_view("aad"));
  CHECK(ct.size() == pt.size() + kAeadTagBytes);
  CHECK(aead_open(key, nonce, ct, as_view("aad")) == pt);
  CHECK_FALSE(aead_open(key, nonce, ct, as_view("other")).has_value());
  for (size_t bit = 0; bit < ct.size() * 8; ++bit) {
    auto bad = ct;
    bad[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
    CHECK_FALSE(aead_open(key, nonce, bad, as_view("aad")).has_value());
  }
  auto tag = hmac_sha256(key, pt);
  CHECK(hmac_sha256_verify(key, pt, tag));
  auto bad = pt;
  bad[0] ^= 1;
  CHECK_FALSE(hmac_sha256_verify(key, bad, tag));
  // RFC 4231 case 2
  CHECK(to_hex(hmac_sha256(as_view("Jefe"), as_view("what do ya want for nothing?"))) ==
        "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843");
  CHECK(to_hex(sha256(as_view("abc"))) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("public-key encryption") {
  for (const char* name : {"hybrid", "rsa2048"}) {
    auto pke = make_pke(name);
    Drbg rng(13);
    auto kp = pke->keygen(rng);
    auto other = pke->keygen(rng);
    auto pt = rng.bytes(64);
    auto ct = pke->encrypt(kp.public_key, pt, rng);
    CHECK(pke->decrypt(kp.private_key, ct) == pt);
    CHECK_FALSE(pke->decrypt(other.private_key, ct).has_value());
    auto bad = ct;
    bad.back() ^= 1;
    CHECK_FALSE(pke->decrypt(kp.private_key, bad).has_value());
  }
  auto hybrid = make_hybrid_pke();
  Drbg r1(14), r2(14);
  auto k1 = hybrid->keygen(r1);
  auto k2 = hybrid->keygen(r2);
  CHECK(k1.public_key == k2.public_key);
  CHECK(hybrid->encrypt(k1.public_key, as_view("x"), r1) == hybrid->encrypt(k2.public_key, as_view("x"), r2));
  CHECK_THROWS_AS(make_pke("elgamal"), std::invalid_argument);
}

TEST_CASE("byte reader") {
  Bytes b;
  append_u8(b, 1);
  append_u16_be(b, 0x0203);
  append_u32_be(b, 0x04050607);
  append_u64_be(b, 0x08090a0b0c0d0e0fULL);
  ByteReader r(b);
  CHECK(r.u8() == 1);
  CHECK(r.u16() == 0x0203);
  CHECK(r.u32() == 0x04050607);
  CHECK(r.u64() == 0x08090a0b0c0d0e0fULL);
  r.expect_end();
  CHECK_THROWS_AS(r.u8(), DecodeError);
  CHECK(from_hex(to_hex(b)) == b);
}

TEST_CASE("fixed-base and two-scalar paths match generic multiplication") {
  for (auto g : {toy_group(), secp256k1_group()}) {
    const auto& f = g->scalars();
    Drbg rng(15);
    std::vector<Scalar> ks{f.zero(), f.one(), f.neg(f.one()), f.from_u64(16), f.from_u64(255)};
    for (int i = 0; i < 30; ++i) ks.push_back(f.random(rng));
    auto P = g->mul(g->generator(), f.random_nonzero(rng));
    for (const auto& k : ks) {
      CHECK(g->mul_gen(k) == g->mul(g->generator(), k));
      auto b = f.random(rng);
      CHECK(g->mul_gen_add(k, P, b) == g->add(g->mul(g->generator(), k), g->mul(P, b)));
    }
  }
}
