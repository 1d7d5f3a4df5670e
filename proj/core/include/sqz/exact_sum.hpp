#pragma once

#include <array>
#include <cstdint>

namespace sqz {

// Order-independent summation of doubles. Every addend is converted to a
// 384-bit two's-complement fixed-point integer (LSB 2^-200) and added
// exactly, so the result of any grouping or ordering of additions is
// bit-identical. Addend bits below 2^-200 are truncated before summing.
class ExactSum {
 public:
  static constexpr int kWords = 6;
  static constexpr int kLsbExponent = -200;

  void add(double x);
  ExactSum& operator+=(const ExactSum& other);

  long double value() const;
  bool operator==(const ExactSum&) const = default;

 private:
  void add_magnitude(std::uint64_t mantissa, int bit_position, bool negative);

  std::array<std::uint64_t, kWords> words_{};
};

}  // namespace sqz
