#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>

#include "laman/errors.hpp"

namespace laman {

/// Exact nonnegative Laman number; arithmetic throws OverflowError instead of wrapping.
class LamValue {
public:
  constexpr LamValue() = default;
  constexpr explicit LamValue(std::uint64_t v) : value_(v) {}

  constexpr std::uint64_t value() const { return value_; }
  constexpr bool is_zero() const { return value_ == 0; }

  friend LamValue operator+(LamValue a, LamValue b) {
    std::uint64_t r;
    if (__builtin_add_overflow(a.value_, b.value_, &r))
      throw OverflowError("Laman number sum exceeds 64 bits");
    return LamValue(r);
  }
  friend LamValue operator*(LamValue a, LamValue b) {
    std::uint64_t r;
    if (__builtin_mul_overflow(a.value_, b.value_, &r))
      throw OverflowError("Laman number product exceeds 64 bits");
    return LamValue(r);
  }
  LamValue& operator+=(LamValue o) { return *this = *this + o; }

  friend constexpr auto operator<=>(LamValue, LamValue) = default;
  friend std::ostream& operator<<(std::ostream& os, LamValue v) { return os << v.value_; }

private:
  std::uint64_t value_ = 0;
};

} // namespace laman
