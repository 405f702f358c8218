#include "cubicsq/squares.hpp"

#include <string>

namespace cubicsq::squares {

Int128 g(std::uint64_t n) {
  if (n == 0) throw DomainError("g(n) requires n >= 1");
  Int128 sum = 0;
  for (std::uint64_t d : arith::divisors(arith::factorize(n))) {
    const Int128 cube = checked_mul(checked_mul<Int128>(d, d), Int128(d));
    sum = checked_add(sum, d % 2 == 0 ? cube : -cube);
  }
  return n % 2 == 0 ? sum : -sum;
}

Int128 g_prime_power(std::uint64_t p, std::uint32_t k) {
  if (k == 0) return 1;
  const Int128 cube = checked_mul(checked_mul<Int128>(p, p), Int128(p));
  Int128 term = 1, sum = 1;
  for (std::uint32_t i = 1; i <= k; ++i) {
    term = checked_mul(term, cube);
    sum = checked_add(sum, term);
  }
  return p == 2 ? sum - 2 : sum;
}

Int128 r8(std::uint64_t n) { return checked_mul<Int128>(16, g(n)); }

arith::MultiplicativeSpec<Int128> g_spec() {
  return {"g", [](std::uint64_t p, std::uint32_t e) { return g_prime_power(p, e); }};
}

std::vector<std::int64_t> r8_bruteforce_table(std::uint64_t limit) {
  if (limit > kBruteforceLimit)
    throw DomainError("lattice oracle is limited to n <= " + std::to_string(kBruteforceLimit));
  // r_4 over nonnegative coordinates, weighted 2 per nonzero coordinate for
  // the sign choices.
  std::vector<std::int64_t> r4(limit + 1, 0);
  for (std::uint64_t a = 0; a * a <= limit; ++a) {
    const std::uint64_t sa = a * a;
    const int wa = a ? 2 : 1;
    for (std::uint64_t b = 0; sa + b * b <= limit; ++b) {
      const std::uint64_t sb = sa + b * b;
      const int wb = wa * (b ? 2 : 1);
      for (std::uint64_t c = 0; sb + c * c <= limit; ++c) {
        const std::uint64_t sc = sb + c * c;
        const int wc = wb * (c ? 2 : 1);
        for (std::uint64_t d = 0; sc + d * d <= limit; ++d) r4[sc + d * d] += wc * (d ? 2 : 1);
      }
    }
  }
  std::vector<std::int64_t> r8v(limit + 1, 0);
  for (std::uint64_t n = 0; n <= limit; ++n) {
    std::int64_t s = 0;
    for (std::uint64_t k = 0; k <= n; ++k) s += r4[k] * r4[n - k];
    r8v[n] = s;
  }
  return r8v;
}

std::int64_t r8_bruteforce(std::uint64_t n) {
  if (n < 1) throw DomainError("r8_bruteforce requires n >= 1");
  return r8_bruteforce_table(n)[n];
}

}  // namespace cubicsq::squares
