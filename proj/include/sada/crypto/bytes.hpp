#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sada {

using Bytes = std::vector<uint8_t>;
using ByteView = std::span<const uint8_t>;
using Digest = std::array<uint8_t, 32>;

/// Raised when wire bytes cannot be parsed or fail a membership check.
class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void append_u8(Bytes& out, uint8_t v);
void append_u16_be(Bytes& out, uint16_t v);
void append_u32_be(Bytes& out, uint32_t v);
void append_u64_be(Bytes& out, uint64_t v);
void append(Bytes& out, ByteView data);

inline ByteView as_view(std::string_view s) {
  return {reinterpret_cast<const uint8_t*>(s.data()), s.size()};
}
Bytes to_bytes(std::string_view s);
std::string to_hex(ByteView data);
Bytes from_hex(std::string_view hex);

/// Sequential big-endian reader over a byte span. Every read is bounds
/// checked and throws DecodeError on truncation.
class ByteReader {
 public:
  explicit ByteReader(ByteView data) : data_(data) {}

  uint8_t u8();
  uint16_t u16();
  uint32_t u32();
  uint64_t u64();
  ByteView take(size_t n);
  template <size_t N>
  std::array<uint8_t, N> take_array() {
    auto v = take(N);
    std::array<uint8_t, N> out{};
    std::copy(v.begin(), v.end(), out.begin());
    return out;
  }

  size_t remaining() const { return data_.size() - pos_; }
  void expect_end() const;

 private:
  ByteView data_;
  size_t pos_ = 0;
};

}  // namespace sada
