#pragma once

// Exact fixed-width integers: checked 128-bit helpers and a signed 192-bit
// accumulator. Every operation that would wrap throws OverflowError.

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "cubicsq/errors.hpp"

namespace cubicsq {

using Int128 = __int128;
using UInt128 = unsigned __int128;

template <typename T>
inline T checked_mul(T a, T b) {
  T r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("exact multiplication overflowed its fixed width");
  return r;
}

template <typename T>
inline T checked_add(T a, T b) {
  T r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("exact addition overflowed its fixed width");
  return r;
}

std::string to_string(Int128 v);
Int128 parse_int128(std::string_view text);

/// Signed two's-complement integer of 192 bits.
class WideInt {
 public:
  static constexpr int kBits = 192;

  constexpr WideInt() = default;
  WideInt(Int128 v);  // NOLINT(google-explicit-constructor)

  WideInt& operator+=(const WideInt& rhs);
  WideInt& operator+=(Int128 rhs) { return *this += WideInt(rhs); }
  WideInt operator-() const;
  WideInt& operator-=(const WideInt& rhs) { return *this += -rhs; }

  friend WideInt operator+(WideInt a, const WideInt& b) { return a += b; }
  friend WideInt operator-(WideInt a, const WideInt& b) { return a -= b; }

  bool is_negative() const { return (limbs_[2] >> 63) != 0; }
  bool is_zero() const { return limbs_[0] == 0 && limbs_[1] == 0 && limbs_[2] == 0; }

  /// Low 64 bits; residues modulo powers of two read directly from here.
  std::uint64_t low_word() const { return limbs_[0]; }

  long double to_long_double() const;
  std::string to_string() const;
  static WideInt parse(std::string_view text);

  friend bool operator==(const WideInt&, const WideInt&) = default;
  friend std::strong_ordering operator<=>(const WideInt& a, const WideInt& b);

 private:
  std::array<std::uint64_t, 3> limbs_{};  // little endian
};

}  // namespace cubicsq
