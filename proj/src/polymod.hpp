#pragma once

// Small dense polynomials over the prime field F_p, enough to factor a cubic.

#include <cstdint>
#include <utility>
#include <vector>

namespace cubicsq::polymod {

/// Coefficients low to high, reduced into [0, p), no trailing zeros.
using Poly = std::vector<std::uint64_t>;

Poly normalize(Poly f, std::uint64_t p);
int degree(const Poly& f);
Poly sub(const Poly& f, const Poly& g, std::uint64_t p);
Poly mul(const Poly& f, const Poly& g, std::uint64_t p);
/// Quotient and remainder; g must be nonzero.
std::pair<Poly, Poly> divmod(const Poly& f, const Poly& g, std::uint64_t p);
Poly rem(const Poly& f, const Poly& g, std::uint64_t p);
Poly monic(const Poly& f, std::uint64_t p);
Poly gcd(Poly f, Poly g, std::uint64_t p);
/// base^e mod modulus.
Poly powmod(const Poly& base, std::uint64_t e, const Poly& modulus, std::uint64_t p);
std::uint64_t eval(const Poly& f, std::uint64_t x, std::uint64_t p);

/// Factorization of a monic cubic mod p into linear factors (root,
/// multiplicity) plus at most one irreducible factor of degree 2 or 3.
struct CubicFactorization {
  std::vector<std::pair<std::uint64_t, int>> roots;
  Poly irreducible;  // empty when the cubic splits into linear factors
};

/// Exhaustive root search below `exhaustive_below`, distinct-degree
/// factorization with x^p - x gcds above.
CubicFactorization factor_cubic(const Poly& f, std::uint64_t p, std::uint64_t exhaustive_below = 1000);

}  // namespace cubicsq::polymod
