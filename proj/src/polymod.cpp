#include "polymod.hpp"

#include <algorithm>
#include <stdexcept>

#include "cubicsq/arith.hpp"

namespace cubicsq::polymod {

using arith::mulmod;

namespace {

std::uint64_t inverse(std::uint64_t a, std::uint64_t p) { return arith::powmod(a, p - 2, p); }

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

// Splits a monic squarefree product of distinct linear factors into roots.
void split_linear(const Poly& d, std::uint64_t p, std::vector<std::uint64_t>& roots) {
  const int n = degree(d);
  if (n <= 0) return;
  if (n == 1) {
    roots.push_back((p - d[0]) % p);
    return;
  }
  // Deterministic equal-degree splitting: gcd((x + delta)^((p-1)/2) - 1, d).
  for (std::uint64_t delta = 0; delta < p; ++delta) {
    const Poly shifted = normalize({delta, 1}, p);
    Poly h = powmod(shifted, (p - 1) / 2, d, p);
    h = sub(h, Poly{1}, p);
    Poly g = gcd(d, h, p);
    const int dg = degree(g);
    if (dg > 0 && dg < n) {
      split_linear(g, p, roots);
      split_linear(divmod(d, g, p).first, p, roots);
      return;
    }
  }
  throw std::logic_error("equal-degree splitting failed");
}

}  // namespace

Poly normalize(Poly f, std::uint64_t p) {
  for (auto& c : f) c %= p;
  trim(f);
  return f;
}

int degree(const Poly& f) { return static_cast<int>(f.size()) - 1; }

Poly sub(const Poly& f, const Poly& g, std::uint64_t p) {
  Poly r(std::max(f.size(), g.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    const std::uint64_t a = i < f.size() ? f[i] : 0;
    const std::uint64_t b = i < g.size() ? g[i] : 0;
    r[i] = a >= b ? a - b : a + (p - b);
  }
  trim(r);
  return r;
}

Poly mul(const Poly& f, const Poly& g, std::uint64_t p) {
  if (f.empty() || g.empty()) return {};
  Poly r(f.size() + g.size() - 1, 0);
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) r[i + j] = (r[i + j] + mulmod(f[i], g[j], p)) % p;
  trim(r);
  return r;
}

std::pair<Poly, Poly> divmod(const Poly& f, const Poly& g, std::uint64_t p) {
  if (g.empty()) throw std::invalid_argument("polynomial division by zero");
  Poly r = f;
  trim(r);
  if (degree(r) < degree(g)) return {{}, r};
  Poly q(r.size() - g.size() + 1, 0);
  const std::uint64_t lead_inv = inverse(g.back(), p);
  for (int k = degree(r) - degree(g); k >= 0; --k) {
    const std::uint64_t coef = mulmod(r[k + g.size() - 1], lead_inv, p);
    q[k] = coef;
    if (coef == 0) continue;
    for (std::size_t j = 0; j < g.size(); ++j) {
      const std::uint64_t t = mulmod(coef, g[j], p);
      r[k + j] = r[k + j] >= t ? r[k + j] - t : r[k + j] + (p - t);
    }
  }
  trim(r);
  trim(q);
  return {q, r};
}

Poly rem(const Poly& f, const Poly& g, std::uint64_t p) { return divmod(f, g, p).second; }

Poly monic(const Poly& f, std::uint64_t p) {
  if (f.empty()) return f;
  const std::uint64_t inv = inverse(f.back(), p);
  Poly r = f;
  for (auto& c : r) c = mulmod(c, inv, p);
  return r;
}

Poly gcd(Poly f, Poly g, std::uint64_t p) {
  trim(f);
  trim(g);
  while (!g.empty()) {
    Poly r = rem(f, g, p);
    f = std::move(g);
    g = std::move(r);
  }
  return monic(f, p);
}

Poly powmod(const Poly& base, std::uint64_t e, const Poly& modulus, std::uint64_t p) {
  Poly result = rem(Poly{1}, modulus, p);
  Poly b = rem(base, modulus, p);
  while (e != 0) {
    if (e & 1) result = rem(mul(result, b, p), modulus, p);
    b = rem(mul(b, b, p), modulus, p);
    e >>= 1;
  }
  return result;
}

std::uint64_t eval(const Poly& f, std::uint64_t x, std::uint64_t p) {
  std::uint64_t acc = 0;
  for (auto it = f.rbegin(); it != f.rend(); ++it) acc = (mulmod(acc, x, p) + *it) % p;
  return acc;
}

CubicFactorization factor_cubic(const Poly& f_in, std::uint64_t p, std::uint64_t exhaustive_below) {
  const Poly f = normalize(f_in, p);
  if (degree(f) != 3 || f.back() != 1) throw std::invalid_argument("factor_cubic expects a monic cubic");

  std::vector<std::uint64_t> distinct;
  if (p < exhaustive_below) {
    for (std::uint64_t x = 0; x < p; ++x)
      if (eval(f, x, p) == 0) distinct.push_back(x);
  } else {
    const Poly x{0, 1};
    const Poly xp = powmod(x, p, f, p);
    const Poly d = gcd(f, sub(xp, x, p), p);
    split_linear(d, p, distinct);
    std::sort(distinct.begin(), distinct.end());
  }

  CubicFactorization out;
  Poly rest = f;
  for (std::uint64_t r : distinct) {
    const Poly lin = normalize({p - r, 1}, p);
    int mult = 0;
    while (degree(rest) >= 1 && eval(rest, r, p) == 0) {
      rest = divmod(rest, lin, p).first;
      ++mult;
    }
    out.roots.emplace_back(r, mult);
  }
  if (degree(rest) >= 2) out.irreducible = rest;
  return out;
}

}  // namespace cubicsq::polymod
