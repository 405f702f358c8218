#pragma once

// Integer factorization, divisor machinery and a segmented sieve for
// multiplicative functions with exact, overflow-checked values.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "cubicsq/errors.hpp"
#include "cubicsq/wide_int.hpp"

namespace cubicsq::arith {

struct PrimePower {
  std::uint64_t prime = 0;
  std::uint32_t exponent = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Primes strictly increasing, exponents >= 1. Empty encodes n = 1.
using Factorization = std::vector<PrimePower>;

bool is_prime(std::uint64_t n);
Factorization factorize(std::uint64_t n);
std::uint64_t multiply_out(const Factorization& f);

/// All divisors, each once, in increasing order.
std::vector<std::uint64_t> divisors(const Factorization& f);
std::uint64_t divisor_count(const Factorization& f);

int mobius(std::uint64_t n);
int mobius(const Factorization& f);

std::uint64_t isqrt(std::uint64_t n);
std::uint64_t gcd(std::uint64_t a, std::uint64_t b);
std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m);

/// Kronecker symbol (a / n).
int kronecker(std::int64_t a, std::uint64_t n);

/// Primes in [2, limit].
std::vector<std::uint32_t> primes_up_to(std::uint64_t limit);

/// A multiplicative function given by its values at prime powers.
/// rule(p, e) must be pure and thread-safe; rule(p, 0) is 1 by convention and
/// never called.
template <typename T>
struct MultiplicativeSpec {
  std::string name;
  std::function<T(std::uint64_t prime, std::uint32_t exponent)> rule;

  T operator()(std::uint64_t p, std::uint32_t e) const { return e == 0 ? T{1} : rule(p, e); }
};

template <typename T, typename Rule>
T evaluate_multiplicative(const Rule& rule, const Factorization& f) {
  T value{1};
  for (const auto& [p, e] : f) value = checked_mul<T>(value, rule(p, e));
  return value;
}

/// Dense table of f(1..limit); index 0 is unused and holds 0.
template <typename T>
struct SieveTable {
  std::uint64_t limit = 0;
  std::vector<T> values;

  const T& operator[](std::uint64_t n) const { return values[n]; }
  std::span<const T> range() const { return std::span<const T>(values).subspan(1); }
};

struct SieveOptions {
  std::uint64_t segment_size = std::uint64_t{1} << 16;
  unsigned workers = 1;
};

namespace detail {

/// Runs fn(index) for index in [0, count) on `workers` threads. The first
/// exception by index order is rethrown after all threads join.
template <typename Fn>
void parallel_for_index(std::size_t count, unsigned workers, Fn&& fn) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace detail

/// Sieves f over [lo, hi] in segments. For each segment, seg_fn(seg_lo,
/// values) is called once with values[i] = f(seg_lo + i); its results are
/// returned in segment order, independent of the worker count.
template <typename T, typename Rule, typename SegmentFn>
auto sieve_segments(const Rule& rule, std::uint64_t lo, std::uint64_t hi, const SieveOptions& opts, SegmentFn&& seg_fn) {
  using Result = decltype(seg_fn(std::uint64_t{}, std::span<const T>{}));
  if (lo < 1) throw DomainError("sieve range must start at 1 or above");
  if (opts.segment_size < 1) throw DomainError("segment size must be at least 1");
  if (hi < lo) return std::vector<Result>{};

  const std::uint64_t root = isqrt(hi);
  const std::vector<std::uint32_t> base = primes_up_to(root);
  const std::uint64_t seg = opts.segment_size;
  const std::size_t count = static_cast<std::size_t>((hi - lo) / seg + 1);
  std::vector<Result> results(count);

  detail::parallel_for_index(count, opts.workers, [&](std::size_t idx) {
    const std::uint64_t a = lo + idx * seg;
    const std::uint64_t b = std::min(hi, a + seg - 1);
    const std::size_t len = static_cast<std::size_t>(b - a + 1);
    std::vector<std::uint64_t> rest(len);
    std::vector<T> vals(len, T{1});
    for (std::size_t i = 0; i < len; ++i) rest[i] = a + i;
    for (std::uint32_t p : base) {
      if (std::uint64_t{p} * p > b) break;
      for (std::uint64_t m = (a + p - 1) / p * p; m <= b; m += p) {
        const std::size_t i = static_cast<std::size_t>(m - a);
        std::uint32_t e = 0;
        do {
          rest[i] /= p;
          ++e;
        } while (rest[i] % p == 0);
        vals[i] = checked_mul<T>(vals[i], rule(std::uint64_t{p}, e));
      }
    }
    for (std::size_t i = 0; i < len; ++i)
      if (rest[i] > 1) vals[i] = checked_mul<T>(vals[i], rule(rest[i], 1u));
    results[idx] = seg_fn(a, std::span<const T>(vals));
  });
  return results;
}

template <typename T, typename Rule>
SieveTable<T> sieve_multiplicative(const Rule& rule, std::uint64_t limit, const SieveOptions& opts = {}) {
  if (limit < 1) throw DomainError("sieve limit must be at least 1");
  SieveTable<T> table;
  table.limit = limit;
  table.values.assign(limit + 1, T{0});
  sieve_segments<T>(rule, 1, limit, opts, [&](std::uint64_t a, std::span<const T> vals) {
    std::copy(vals.begin(), vals.end(), table.values.begin() + static_cast<std::ptrdiff_t>(a));
    return 0;
  });
  return table;
}

/// Möbius function as a spec, mainly for tests and inversions.
MultiplicativeSpec<std::int64_t> mobius_spec();

}  // namespace cubicsq::arith
