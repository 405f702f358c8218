#include <doctest.h>

#include <random>

#include "cubicsq/arith.hpp"

using namespace cubicsq;
using namespace cubicsq::arith;

namespace {

bool prime_by_trial(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

int mobius_by_trial(std::uint64_t n) {
  int mu = 1;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    n /= d;
    if (n % d == 0) return 0;
    mu = -mu;
  }
  return n > 1 ? -mu : mu;
}

// Legendre symbol by Euler's criterion.
int legendre(std::int64_t a, std::uint64_t p) {
  const std::uint64_t r = static_cast<std::uint64_t>(((a % static_cast<std::int64_t>(p)) + static_cast<std::int64_t>(p)) %
                                                     static_cast<std::int64_t>(p));
  if (r == 0) return 0;
  return powmod(r, (p - 1) / 2, p) == 1 ? 1 : -1;
}

}  // namespace

TEST_CASE("primality agrees with trial division") {
  for (std::uint64_t n = 0; n < 20000; ++n) CHECK_MESSAGE(is_prime(n) == prime_by_trial(n), n);
  CHECK(is_prime(9999999967ull));
  CHECK_FALSE(is_prime(561));
  CHECK_FALSE(is_prime(3215031751ull));  // strong pseudoprime to bases 2, 3, 5, 7
  CHECK(is_prime((1ull << 61) - 1));
  CHECK_FALSE(is_prime(4294967291ull * 4294967279ull));
}

TEST_CASE("factorization round trip") {
  std::mt19937_64 rng(20240601);
  for (int i = 0; i < 2000; ++i) {
    const std::uint64_t n = rng() >> (i % 40) | 1u;
    const Factorization f = factorize(n);
    CHECK(multiply_out(f) == n);
    for (std::size_t j = 0; j < f.size(); ++j) {
      CHECK(is_prime(f[j].prime));
      CHECK(f[j].exponent >= 1);
      if (j) CHECK(f[j - 1].prime < f[j].prime);
    }
  }
  CHECK(factorize(1).empty());
  const Factorization semi = factorize(4294967291ull * 4294967279ull);
  REQUIRE(semi.size() == 2);
  CHECK(semi[0].prime == 4294967279ull);
  CHECK_THROWS_AS(factorize(0), DomainError);
}

TEST_CASE("divisors and divisor counts") {
  CHECK(divisors(factorize(12)) == std::vector<std::uint64_t>{1, 2, 3, 4, 6, 12});
  CHECK(divisors(factorize(1)) == std::vector<std::uint64_t>{1});
  for (std::uint64_t n = 1; n <= 3000; ++n) {
    std::uint64_t count = 0;
    for (std::uint64_t d = 1; d <= n; ++d) count += n % d == 0;
    CHECK(divisor_count(factorize(n)) == count);
    CHECK(divisors(factorize(n)).size() == count);
  }
}

TEST_CASE("mobius") {
  for (std::uint64_t n = 1; n <= 20000; ++n) CHECK(mobius(n) == mobius_by_trial(n));
  CHECK(mobius(30) == -1);
  CHECK(mobius(12) == 0);
}

TEST_CASE("small number theory helpers") {
  CHECK(isqrt(0) == 0);
  CHECK(isqrt(99) == 9);
  CHECK(isqrt(100) == 10);
  CHECK(isqrt(~std::uint64_t{0}) == 4294967295ull);
  CHECK(gcd(84, 36) == 12);
  CHECK(gcd(0, 7) == 7);
  CHECK(powmod(3, 200, 1000000007ull) == 136318165ull);
  CHECK(mulmod(~std::uint64_t{0} - 1, ~std::uint64_t{0} - 2, ~std::uint64_t{0}) == 2);
  CHECK(primes_up_to(30) == std::vector<std::uint32_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
  CHECK(primes_up_to(1).empty());
}

TEST_CASE("kronecker symbol") {
  for (std::uint32_t p : primes_up_to(500)) {
    if (p == 2) continue;
    for (std::int64_t a = -60; a <= 60; ++a) CHECK(kronecker(a, p) == legendre(a, p));
  }
  // (-23 / 2) = +1 since -23 = 1 mod 8; (5 / 2) = -1.
  CHECK(kronecker(-23, 2) == 1);
  CHECK(kronecker(5, 2) == -1);
  CHECK(kronecker(-23, 46) == 0);
  CHECK(kronecker(-23, 1) == 1);
  // Multiplicative in the bottom argument.
  for (std::uint64_t m = 1; m < 60; ++m)
    for (std::uint64_t n = 1; n < 60; ++n) CHECK(kronecker(-23, m * n) == kronecker(-23, m) * kronecker(-23, n));
}

TEST_CASE("segmented sieve matches direct evaluation") {
  const auto mu = mobius_spec();
  for (unsigned workers : {1u, 3u}) {
    for (std::uint64_t seg : {7ull, 1000ull, 65536ull}) {
      const auto table = sieve_multiplicative<std::int64_t>(mu, 30000, {seg, workers});
      REQUIRE(table.values.size() == 30001);
      for (std::uint64_t n = 1; n <= 30000; ++n) CHECK(table[n] == mobius_by_trial(n));
    }
  }
  MultiplicativeSpec<std::int64_t> tau{"d", [](std::uint64_t, std::uint32_t e) { return std::int64_t(e) + 1; }};
  const auto d = sieve_multiplicative<std::int64_t>(tau, 5000);
  for (std::uint64_t n = 1; n <= 5000; ++n) CHECK(d[n] == static_cast<std::int64_t>(divisor_count(factorize(n))));
  CHECK(evaluate_multiplicative<std::int64_t>(tau, factorize(360)) == 24);
}

TEST_CASE("sieve over an interior window") {
  const auto mu = mobius_spec();
  const auto sums = sieve_segments<std::int64_t>(mu, 1000000, 1010000, {4096, 2},
                                                 [](std::uint64_t a, std::span<const std::int64_t> v) {
                                                   std::int64_t mismatches = 0;
                                                   for (std::size_t i = 0; i < v.size(); ++i)
                                                     mismatches += v[i] != mobius_by_trial(a + i);
                                                   return mismatches;
                                                 });
  CHECK(sums.size() == 3);
  for (auto m : sums) CHECK(m == 0);
}

TEST_CASE("sieve overflow is reported") {
  MultiplicativeSpec<std::int64_t> huge{"huge", [](std::uint64_t, std::uint32_t) { return std::int64_t{1} << 40; }};
  CHECK_THROWS_AS(sieve_multiplicative<std::int64_t>(huge, 10000), OverflowError);
}

TEST_CASE("parallel_for_index rethrows the first failure by index") {
  try {
    detail::parallel_for_index(100, 4, [](std::size_t i) {
      if (i == 17 || i == 60) throw DomainError("failed at " + std::to_string(i));
    });
    FAIL("expected an exception");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()) == "failed at 17");
  }
}
