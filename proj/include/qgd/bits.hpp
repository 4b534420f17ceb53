#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qgd/error.hpp"

namespace qgd {

/// Variable-length bit string. Bit i lives in byte i/8 at position i%8, so the
/// earliest appended bit is the least significant bit of the first byte.
/// Fixed-width integer fields are packed little-endian (lowest bit first).
class BitString {
 public:
  BitString() = default;

  size_t size() const { return nbits_; }
  bool empty() const { return nbits_ == 0; }

  bool get(size_t i) const {
    if (i >= nbits_) fail(Errc::out_of_range, "bit index past end");
    return (bytes_[i >> 3] >> (i & 7)) & 1;
  }

  void push_back(bool bit) {
    if ((nbits_ & 7) == 0) bytes_.push_back(0);
    if (bit) bytes_.back() |= static_cast<uint8_t>(1u << (nbits_ & 7));
    ++nbits_;
  }

  /// Append `width` bits of `value`, lowest bit first.
  void append_uint(uint64_t value, int width) {
    for (int b = 0; b < width; ++b) push_back((value >> b) & 1);
  }

  /// Read `width` bits starting at `pos`, lowest bit first.
  uint64_t read_uint(size_t pos, int width) const {
    uint64_t v = 0;
    for (int b = 0; b < width; ++b)
      if (get(pos + b)) v |= (uint64_t{1} << b);
    return v;
  }

  /// Interpret the whole string as a little-endian integer (size() <= 64).
  uint64_t as_uint() const {
    if (nbits_ > 64) fail(Errc::out_of_range, "bit string wider than 64");
    return read_uint(0, static_cast<int>(nbits_));
  }

  static BitString from_uint(uint64_t value, int width) {
    BitString s;
    s.append_uint(value, width);
    return s;
  }

  const std::vector<uint8_t>& bytes() const { return bytes_; }

  /// Two hex digits per byte, bytes in order; trailing pad bits are zero.
  std::string to_hex() const;
  static BitString from_hex(const std::string& hex, size_t nbits);

  bool operator==(const BitString& o) const {
    return nbits_ == o.nbits_ && bytes_ == o.bytes_;
  }
  bool operator!=(const BitString& o) const { return !(*this == o); }

 private:
  std::vector<uint8_t> bytes_;
  size_t nbits_ = 0;
};

}  // namespace qgd
