#include <openssl/sha.h>

#include <stdexcept>

#include "sada/crypto/group.hpp"

namespace sada {
namespace {

using boost::multiprecision::powm;

class ModpPointRep final : public detail::PointRep {
 public:
  ModpPointRep(U256 v, const void* owner) : v_(std::move(v)), owner_(owner) {}
  const U256& value() const { return v_; }
  const void* owner() const { return owner_; }

 protected:
  // Identity (1) is 33 zero bytes; everything else is 0x02 || value.
  PointBytes compute_encoding() const override {
    PointBytes out{};
    if (v_ == 1) return out;
    out[0] = 0x02;
    const ScalarBytes be = u256_to_be(v_);
    std::copy(be.begin(), be.end(), out.begin() + 1);
    return out;
  }

 private:
  U256 v_;
  const void* owner_;
};

class ModpGroup final : public Group {
 public:
  ModpGroup(U256 p, U256 q, U256 g, std::string name)
      : Group(q), p_(std::move(p)), name_(std::move(name)) {
    if (p_ < 3 || (p_ - 1) % q != 0) {
      throw std::invalid_argument("group order must divide p - 1");
    }
    if (g <= 1 || g >= p_ || powm(g, q, p_) != 1) {
      throw std::invalid_argument("generator does not have order q");
    }
    generator_ = wrap(g);
    identity_ = wrap(1);
  }

  std::string name() const override { return name_; }
  GroupPoint generator() const override { return generator_; }
  GroupPoint identity() const override { return identity_; }

  GroupPoint negate(const GroupPoint& a) const override {
    check_owned(a);
    // Inverse in Z_p^* is a^(q-1) within the order-q subgroup.
    return wrap(powm(value(a), order() - 1, p_));
  }

  GroupPoint decode(ByteView bytes) const override {
    if (bytes.size() != kPointBytes) {
      throw DecodeError("point encoding must be 33 bytes");
    }
    bool all_zero = true;
    for (uint8_t b : bytes) all_zero = all_zero && b == 0;
    if (all_zero) return identity_;
    if (bytes[0] != 0x02) {
      throw DecodeError("bad point prefix");
    }
    U256 v = u256_from_be(bytes.subspan(1));
    if (v <= 1 || v >= p_ || powm(v, order(), p_) != 1) {
      throw DecodeError("value is not in the order-q subgroup");
    }
    return wrap(v);
  }

  GroupPoint hash_to_point(ByteView seed) const override {
    const U256 cofactor = (p_ - 1) / order();
    for (uint32_t counter = 0;; ++counter) {
      Bytes in = to_bytes("sada/modp/h2g");
      append(in, seed);
      append_u32_be(in, counter);
      Digest d{};
      SHA256(in.data(), in.size(), d.data());
      U256 x = u256_from_be(d) % p_;
      if (x == 0) continue;
      U256 h = powm(x, cofactor, p_);
      if (h != 1) return wrap(h);
    }
  }

  bool owns(const GroupPoint& p) const override {
    const auto* rep = dynamic_cast<const ModpPointRep*>(p.rep());
    return rep != nullptr && rep->owner() == this;
  }

 protected:
  GroupPoint add_impl(const GroupPoint& a, const GroupPoint& b) const override {
    return wrap(static_cast<U256>((U512(value(a)) * U512(value(b))) % U512(p_)));
  }

  GroupPoint mul_impl(const GroupPoint& p, const Scalar& k) const override {
    return wrap(powm(value(p), k.value(), p_));
  }

 private:
  static const U256& value(const GroupPoint& p) {
    return static_cast<const ModpPointRep*>(p.rep())->value();
  }
  GroupPoint wrap(U256 v) const {
    return GroupPoint(std::make_shared<ModpPointRep>(std::move(v), this));
  }

  U256 p_;
  std::string name_;
  GroupPoint generator_;
  GroupPoint identity_;
};

}  // namespace

std::shared_ptr<const Group> make_modp_group(U256 p, U256 q, U256 g, std::string name) {
  return std::make_shared<ModpGroup>(std::move(p), std::move(q), std::move(g), std::move(name));
}

}  // namespace sada
