#pragma once

#include <bit>
#include <cstdint>
#include <string_view>

namespace circlelab {

// 64-bit FNV-1a. Doubles are hashed by their bit pattern.
class Fnv1a {
 public:
  void add_byte(unsigned char b) {
    state_ ^= b;
    state_ *= 0x100000001b3ULL;
  }
  void add(std::uint64_t v) {
    for (int k = 0; k < 8; ++k) add_byte(static_cast<unsigned char>(v >> (8 * k)));
  }
  void add(std::int64_t v) { add(static_cast<std::uint64_t>(v)); }
  void add(double v) { add(std::bit_cast<std::uint64_t>(v)); }
  void add(std::string_view s) {
    for (char c : s) add_byte(static_cast<unsigned char>(c));
  }
  std::uint64_t value() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

}  // namespace circlelab
