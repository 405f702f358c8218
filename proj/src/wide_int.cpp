#include "cubicsq/wide_int.hpp"

#include <algorithm>
#include <cmath>

namespace cubicsq {

std::string to_string(Int128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  UInt128 u = neg ? UInt128(0) - static_cast<UInt128>(v) : static_cast<UInt128>(v);
  std::string out;
  while (u != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) out.push_back('-');
  std::reverse(out.begin(), out.end());
  return out;
}

Int128 parse_int128(std::string_view text) {
  if (text.empty()) throw DomainError("empty integer literal");
  bool neg = false;
  std::size_t i = 0;
  if (text[0] == '-' || text[0] == '+') {
    neg = text[0] == '-';
    i = 1;
  }
  if (i == text.size()) throw DomainError("malformed integer literal: " + std::string(text));
  Int128 v = 0;
  for (; i < text.size(); ++i) {
    const char ch = text[i];
    if (ch < '0' || ch > '9') throw DomainError("malformed integer literal: " + std::string(text));
    // Accumulate with the final sign so the most negative value parses.
    const Int128 digit = neg ? -(ch - '0') : (ch - '0');
    v = checked_add(checked_mul<Int128>(v, 10), digit);
  }
  return v;
}

WideInt::WideInt(Int128 v) {
  const auto u = static_cast<UInt128>(v);
  limbs_[0] = static_cast<std::uint64_t>(u);
  limbs_[1] = static_cast<std::uint64_t>(u >> 64);
  limbs_[2] = v < 0 ? ~std::uint64_t{0} : 0;
}

WideInt& WideInt::operator+=(const WideInt& rhs) {
  const bool a_neg = is_negative();
  const bool b_neg = rhs.is_negative();
  unsigned char carry = 0;
  for (int i = 0; i < 3; ++i) {
    const UInt128 s = UInt128(limbs_[i]) + rhs.limbs_[i] + carry;
    limbs_[i] = static_cast<std::uint64_t>(s);
    carry = static_cast<unsigned char>(s >> 64);
  }
  if (a_neg == b_neg && is_negative() != a_neg) throw OverflowError("192-bit accumulator overflowed");
  return *this;
}

WideInt WideInt::operator-() const {
  WideInt r;
  unsigned char carry = 1;
  for (int i = 0; i < 3; ++i) {
    const UInt128 s = UInt128(~limbs_[i]) + carry;
    r.limbs_[i] = static_cast<std::uint64_t>(s);
    carry = static_cast<unsigned char>(s >> 64);
  }
  if (!is_zero() && r.is_negative() == is_negative()) throw OverflowError("192-bit negation overflowed");
  return r;
}

std::strong_ordering operator<=>(const WideInt& a, const WideInt& b) {
  if (a.is_negative() != b.is_negative()) return a.is_negative() ? std::strong_ordering::less : std::strong_ordering::greater;
  for (int i = 2; i >= 0; --i) {
    if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] <=> b.limbs_[i];
  }
  return std::strong_ordering::equal;
}

long double WideInt::to_long_double() const {
  if (is_negative()) return -(-*this).to_long_double();
  return std::ldexp(static_cast<long double>(limbs_[2]), 128) + std::ldexp(static_cast<long double>(limbs_[1]), 64) +
         static_cast<long double>(limbs_[0]);
}

std::string WideInt::to_string() const {
  if (is_zero()) return "0";
  if (is_negative()) return "-" + (-*this).to_string();
  constexpr std::uint64_t kChunk = 10'000'000'000'000'000'000ULL;  // 10^19
  std::array<std::uint64_t, 3> n = limbs_;
  std::string out;
  auto nonzero = [&] { return n[0] != 0 || n[1] != 0 || n[2] != 0; };
  while (nonzero()) {
    UInt128 rem = 0;
    for (int i = 2; i >= 0; --i) {
      const UInt128 cur = (rem << 64) | n[i];
      n[i] = static_cast<std::uint64_t>(cur / kChunk);
      rem = cur % kChunk;
    }
    auto chunk = static_cast<std::uint64_t>(rem);
    for (int d = 0; d < 19; ++d) {
      out.push_back(static_cast<char>('0' + chunk % 10));
      chunk /= 10;
    }
  }
  while (out.size() > 1 && out.back() == '0') out.pop_back();
  std::reverse(out.begin(), out.end());
  return out;
}

WideInt WideInt::parse(std::string_view text) {
  if (text.empty()) throw DomainError("empty integer literal");
  bool neg = false;
  std::size_t i = 0;
  if (text[0] == '-' || text[0] == '+') {
    neg = text[0] == '-';
    i = 1;
  }
  if (i == text.size()) throw DomainError("malformed integer literal: " + std::string(text));
  WideInt v;
  for (; i < text.size(); ++i) {
    const char ch = text[i];
    if (ch < '0' || ch > '9') throw DomainError("malformed integer literal: " + std::string(text));
    // v = 10 v +- digit through doublings, so += catches overflow and the
    // most negative value still parses.
    WideInt twice = v;
    twice += v;
    WideInt eight = twice;
    eight += eight;
    eight += eight;
    v = eight;
    v += twice;
    v += Int128(neg ? '0' - ch : ch - '0');
  }
  return v;
}

}  // namespace cubicsq
