#include "sada/crypto/bytes.hpp"

#include <algorithm>

namespace sada {

void append_u8(Bytes& out, uint8_t v) { out.push_back(v); }

void append_u16_be(Bytes& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

void append_u32_be(Bytes& out, uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<uint8_t>(v >> shift));
  }
}

void append_u64_be(Bytes& out, uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    out.push_back(static_cast<uint8_t>(v >> shift));
  }
}

void append(Bytes& out, ByteView data) { out.insert(out.end(), data.begin(), data.end()); }

Bytes to_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

std::string to_hex(ByteView data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (uint8_t b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0F]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) {
    throw DecodeError("hex string has odd length");
  }
  auto nibble = [](char c) -> uint8_t {
    if (c >= '0' && c <= '9') return static_cast<uint8_t>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<uint8_t>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<uint8_t>(c - 'A' + 10);
    throw DecodeError("invalid hex digit");
  };
  Bytes out(hex.size() / 2);
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<uint8_t>((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
  }
  return out;
}

uint8_t ByteReader::u8() { return take(1)[0]; }

uint16_t ByteReader::u16() {
  auto v = take(2);
  return static_cast<uint16_t>((v[0] << 8) | v[1]);
}

uint32_t ByteReader::u32() {
  auto v = take(4);
  return (uint32_t{v[0]} << 24) | (uint32_t{v[1]} << 16) | (uint32_t{v[2]} << 8) | uint32_t{v[3]};
}

uint64_t ByteReader::u64() {
  auto v = take(8);
  uint64_t out = 0;
  for (uint8_t b : v) out = (out << 8) | b;
  return out;
}

ByteView ByteReader::take(size_t n) {
  if (n > remaining()) {
    throw DecodeError("truncated input: wanted " + std::to_string(n) + " bytes, have " +
                      std::to_string(remaining()));
  }
  auto out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

void ByteReader::expect_end() const {
  if (remaining() != 0) {
    throw DecodeError("trailing bytes: " + std::to_string(remaining()));
  }
}

}  // namespace sada
