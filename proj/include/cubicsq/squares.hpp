#pragma once

// r_8(n), the number of representations of n as an ordered sum of eight
// squares, via Jacobi's divisor sum r_8 = 16 g with
// g(n) = (-1)^n sum_{d | n} (-1)^d d^3, and a lattice-count oracle.

#include <cstdint>
#include <vector>

#include "cubicsq/arith.hpp"
#include "cubicsq/wide_int.hpp"

namespace cubicsq::squares {

/// Direct divisor sum.
Int128 g(std::uint64_t n);

/// g(2^k) = -1 + 2^3 + ... + 2^(3k) for k >= 1; g(p^k) = 1 + p^3 + ... + p^(3k)
/// for odd p.
Int128 g_prime_power(std::uint64_t p, std::uint32_t k);

Int128 r8(std::uint64_t n);

/// g as a multiplicative spec; sieves carry the factor 16 separately.
arith::MultiplicativeSpec<Int128> g_spec();

/// Largest n accepted by the lattice oracle.
inline constexpr std::uint64_t kBruteforceLimit = 100'000;

/// r_8(n) counted from lattice points: r_8 = r_4 * r_4 (additive
/// convolution), r_4 enumerated over Z^4.
std::int64_t r8_bruteforce(std::uint64_t n);

/// r_8_bruteforce(0..limit) in one pass.
std::vector<std::int64_t> r8_bruteforce_table(std::uint64_t limit);

}  // namespace cubicsq::squares
