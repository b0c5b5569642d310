#include <openssl/bn.h>
#include <openssl/ec.h>
#include <openssl/obj_mac.h>
#include <openssl/sha.h>

#include <memory>
#include <stdexcept>

#include "sada/crypto/group.hpp"

namespace sada {
namespace {

struct BnDeleter {
  void operator()(BIGNUM* p) const { BN_clear_free(p); }
};
struct PointDeleter {
  void operator()(EC_POINT* p) const { EC_POINT_free(p); }
};
struct GroupDeleter {
  void operator()(EC_GROUP* p) const { EC_GROUP_free(p); }
};
using BnPtr = std::unique_ptr<BIGNUM, BnDeleter>;
using EcPointPtr = std::unique_ptr<EC_POINT, PointDeleter>;

BN_CTX* thread_ctx() {
  struct CtxHolder {
    BN_CTX* ctx = BN_CTX_new();
    ~CtxHolder() { BN_CTX_free(ctx); }
  };
  thread_local CtxHolder holder;
  return holder.ctx;
}

void check(int rc, const char* what) {
  if (rc != 1) {
    throw std::runtime_error(std::string("OpenSSL failure: ") + what);
  }
}

BnPtr to_bn(const Scalar& k) {
  const ScalarBytes be = u256_to_be(k.value());
  BnPtr bn(BN_bin2bn(be.data(), static_cast<int>(be.size()), nullptr));
  if (!bn) throw std::bad_alloc();
  return bn;
}

class EcPointRep final : public detail::PointRep {
 public:
  EcPointRep(const EC_GROUP* group, EcPointPtr point) : group_(group), point_(std::move(point)) {}
  const EC_POINT* raw() const { return point_.get(); }

 protected:
  PointBytes compute_encoding() const override {
    PointBytes out{};
    if (EC_POINT_is_at_infinity(group_, point_.get())) return out;
    size_t n = EC_POINT_point2oct(group_, point_.get(), POINT_CONVERSION_COMPRESSED, out.data(),
                                  out.size(), thread_ctx());
    if (n != kPointBytes) throw std::runtime_error("unexpected compressed point length");
    return out;
  }

 private:
  const EC_GROUP* group_;
  EcPointPtr point_;
};

class Secp256k1Group final : public Group {
 public:
  Secp256k1Group()
      : Group(U256("0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEBAAEDCE6AF48A03BBFD25E8CD0364141")),
        group_(EC_GROUP_new_by_curve_name(NID_secp256k1)) {
    if (!group_) throw std::runtime_error("secp256k1 unavailable in OpenSSL");
    generator_ = wrap(dup(EC_GROUP_get0_generator(group_.get())));
    EcPointPtr inf(EC_POINT_new(group_.get()));
    check(EC_POINT_set_to_infinity(group_.get(), inf.get()), "set_to_infinity");
    identity_ = wrap(std::move(inf));
    // Precomputed multiples of g speed up every g^k.
    check(EC_GROUP_precompute_mult(group_.get(), thread_ctx()), "precompute_mult");
    build_comb();
  }

  std::string name() const override { return "secp256k1"; }
  GroupPoint generator() const override { return generator_; }
  GroupPoint identity() const override { return identity_; }

  GroupPoint negate(const GroupPoint& a) const override {
    check_owned(a);
    EcPointPtr r = dup(raw(a));
    check(EC_POINT_invert(group_.get(), r.get(), thread_ctx()), "invert");
    return wrap(std::move(r));
  }

  GroupPoint decode(ByteView bytes) const override {
    if (bytes.size() != kPointBytes) {
      throw DecodeError("point encoding must be 33 bytes");
    }
    bool all_zero = true;
    for (uint8_t b : bytes) all_zero = all_zero && b == 0;
    if (all_zero) return identity_;
    if (bytes[0] != 0x02 && bytes[0] != 0x03) {
      throw DecodeError("point encoding must be compressed");
    }
    EcPointPtr p(EC_POINT_new(group_.get()));
    if (EC_POINT_oct2point(group_.get(), p.get(), bytes.data(), bytes.size(), thread_ctx()) != 1) {
      throw DecodeError("bytes are not a secp256k1 point");
    }
    return wrap(std::move(p));
  }

  GroupPoint hash_to_point(ByteView seed) const override {
    // Try-and-increment on x = SHA-256(tag || seed || counter).
    for (uint32_t counter = 0;; ++counter) {
      Bytes in = to_bytes("sada/secp256k1/h2c");
      append(in, seed);
      append_u32_be(in, counter);
      PointBytes enc{};
      enc[0] = 0x02;
      SHA256(in.data(), in.size(), enc.data() + 1);
      EcPointPtr p(EC_POINT_new(group_.get()));
      if (EC_POINT_oct2point(group_.get(), p.get(), enc.data(), enc.size(), thread_ctx()) == 1) {
        return wrap(std::move(p));
      }
    }
  }

  bool owns(const GroupPoint& p) const override {
    return dynamic_cast<const EcPointRep*>(p.rep()) != nullptr;
  }

 protected:
  GroupPoint add_impl(const GroupPoint& a, const GroupPoint& b) const override {
    EcPointPtr r(EC_POINT_new(group_.get()));
    check(EC_POINT_add(group_.get(), r.get(), raw(a), raw(b), thread_ctx()), "add");
    return wrap(std::move(r));
  }

  GroupPoint mul_impl(const GroupPoint& p, const Scalar& k) const override {
    EcPointPtr r(EC_POINT_new(group_.get()));
    BnPtr bn = to_bn(k);
    check(EC_POINT_mul(group_.get(), r.get(), nullptr, raw(p), bn.get(), thread_ctx()), "mul");
    return wrap(std::move(r));
  }

  // OpenSSL's two-scalar path (wNAF over g's precomputed table and p).
  GroupPoint mul_gen_add_impl(const Scalar& a, const GroupPoint& p, const Scalar& b) const override {
    EcPointPtr r(EC_POINT_new(group_.get()));
    BnPtr bn_a = to_bn(a);
    BnPtr bn_b = to_bn(b);
    check(EC_POINT_mul(group_.get(), r.get(), bn_a.get(), raw(p), bn_b.get(), thread_ctx()),
          "mul_gen_add");
    return wrap(std::move(r));
  }

  // Fixed-base comb: k = Σ d_i 16^i, g^k = Σ comb_[i][d_i]. Not constant time.
  GroupPoint mul_gen_impl(const Scalar& k) const override {
    const ScalarBytes be = u256_to_be(k.value());
    EcPointPtr r(EC_POINT_new(group_.get()));
    check(EC_POINT_set_to_infinity(group_.get(), r.get()), "set_to_infinity");
    BN_CTX* ctx = thread_ctx();
    for (size_t i = 0; i < kCombWindows; ++i) {
      const uint8_t byte = be[kScalarBytes - 1 - i / 2];
      const uint8_t digit = (i % 2 == 0) ? (byte & 0x0f) : (byte >> 4);
      if (digit == 0) continue;
      check(EC_POINT_add(group_.get(), r.get(), r.get(), comb_[i][digit].get(), ctx), "comb add");
    }
    return wrap(std::move(r));
  }

 private:
  static constexpr size_t kCombWindows = 64;

  void build_comb() {
    BN_CTX* ctx = thread_ctx();
    EcPointPtr base = dup(EC_GROUP_get0_generator(group_.get()));
    comb_.resize(kCombWindows);
    for (size_t i = 0; i < kCombWindows; ++i) {
      auto& row = comb_[i];
      row.resize(16);
      row[0].reset(EC_POINT_new(group_.get()));
      check(EC_POINT_set_to_infinity(group_.get(), row[0].get()), "set_to_infinity");
      row[1] = dup(base.get());
      for (size_t d = 2; d < 16; ++d) {
        row[d].reset(EC_POINT_new(group_.get()));
        check(EC_POINT_add(group_.get(), row[d].get(), row[d - 1].get(), base.get(), ctx), "comb");
      }
      // Affine table entries make the additions cheaper.
      std::vector<EC_POINT*> ptrs;
      for (auto& p : row) ptrs.push_back(p.get());
      check(EC_POINTs_make_affine(group_.get(), ptrs.size() - 1, ptrs.data() + 1, ctx), "affine");
      EcPointPtr next(EC_POINT_new(group_.get()));
      check(EC_POINT_add(group_.get(), next.get(), row[15].get(), base.get(), ctx), "comb");
      base = std::move(next);
    }
  }

  static const EC_POINT* raw(const GroupPoint& p) {
    return static_cast<const EcPointRep*>(p.rep())->raw();
  }
  EcPointPtr dup(const EC_POINT* p) const {
    EcPointPtr r(EC_POINT_dup(p, group_.get()));
    if (!r) throw std::bad_alloc();
    return r;
  }
  GroupPoint wrap(EcPointPtr p) const {
    return GroupPoint(std::make_shared<EcPointRep>(group_.get(), std::move(p)));
  }

  std::unique_ptr<EC_GROUP, GroupDeleter> group_;
  GroupPoint generator_;
  GroupPoint identity_;
  std::vector<std::vector<EcPointPtr>> comb_;
};

}  // namespace

std::shared_ptr<const Group> secp256k1_group() {
  static const std::shared_ptr<const Group> group = std::make_shared<Secp256k1Group>();
  return group;
}

}  // namespace sada
