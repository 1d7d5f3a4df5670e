#include "sqz/exact_sum.hpp"

#include <cmath>
#include <stdexcept>

namespace sqz {

namespace {

constexpr int kTopBit = ExactSum::kWords * 64 - 1;

}  // namespace

void ExactSum::add(double x) {
  if (x == 0.0) return;
  if (!std::isfinite(x)) throw std::domain_error("ExactSum: non-finite addend");
  int exponent = 0;
  const double fraction = std::frexp(std::fabs(x), &exponent);
  auto mantissa = static_cast<std::uint64_t>(std::ldexp(fraction, 53));
  int position = exponent - 53 - kLsbExponent;
  if (position < 0) {
    if (position <= -64) return;
    mantissa >>= -position;
    position = 0;
    if (mantissa == 0) return;
  }
  if (position + 53 >= kTopBit) throw std::overflow_error("ExactSum: addend out of range");
  add_magnitude(mantissa, position, x < 0.0);
}

void ExactSum::add_magnitude(std::uint64_t mantissa, int bit_position, bool negative) {
  const int word = bit_position / 64;
  const int bit = bit_position % 64;
  std::array<std::uint64_t, 2> parts{mantissa << bit, bit == 0 ? 0 : mantissa >> (64 - bit)};

  if (!negative) {
    std::uint64_t carry = 0;
    for (int i = word; i < kWords; ++i) {
      const std::uint64_t addend = (i - word < 2) ? parts[i - word] : 0;
      const std::uint64_t before = words_[i];
      const std::uint64_t sum = before + addend;
      const std::uint64_t total = sum + carry;
      carry = (sum < before ? 1 : 0) + (total < sum ? 1 : 0);
      words_[i] = total;
      if (carry == 0 && i - word >= 1) break;
    }
  } else {
    std::uint64_t borrow = 0;
    for (int i = word; i < kWords; ++i) {
      const std::uint64_t subtrahend = (i - word < 2) ? parts[i - word] : 0;
      const std::uint64_t before = words_[i];
      const std::uint64_t diff = before - subtrahend;
      const std::uint64_t total = diff - borrow;
      borrow = (before < subtrahend ? 1 : 0) + (diff < borrow ? 1 : 0);
      words_[i] = total;
      if (borrow == 0 && i - word >= 1) break;
    }
  }
}

ExactSum& ExactSum::operator+=(const ExactSum& other) {
  std::uint64_t carry = 0;
  for (int i = 0; i < kWords; ++i) {
    const std::uint64_t sum = words_[i] + other.words_[i];
    const std::uint64_t total = sum + carry;
    carry = (sum < words_[i] ? 1 : 0) + (total < sum ? 1 : 0);
    words_[i] = total;
  }
  return *this;
}

long double ExactSum::value() const {
  auto words = words_;
  const bool negative = (words[kWords - 1] >> 63) != 0;
  if (negative) {
    std::uint64_t carry = 1;
    for (auto& w : words) {
      w = ~w;
      const std::uint64_t total = w + carry;
      carry = total < w ? 1 : 0;
      w = total;
    }
  }
  long double result = 0.0L;
  for (int i = kWords - 1; i >= 0; --i) {
    if (words[i] != 0) result += std::ldexp(static_cast<long double>(words[i]), 64 * i + kLsbExponent);
  }
  return negative ? -result : result;
}

}  // namespace sqz
