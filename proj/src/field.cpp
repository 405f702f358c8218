#include "cubicsq/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "polymod.hpp"

namespace cubicsq::field {

namespace {

constexpr std::int64_t kMaxCoefficient = 1'000'000;

Int128 eval_int(const CubicPoly& f, Int128 x) { return ((x + f.a) * x + f.b) * x + f.c; }

polymod::Poly reduce_poly(const CubicPoly& f, std::uint64_t p) {
  auto red = [p](std::int64_t v) {
    const Int128 r = Int128(v) % Int128(p);
    return static_cast<std::uint64_t>(r < 0 ? r + p : r);
  };
  return polymod::normalize({red(f.c), red(f.b), red(f.a), 1}, p);
}

}  // namespace

std::string CubicPoly::descriptor() const {
  return std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c);
}

CubicPoly CubicPoly::parse(const std::string& text) {
  std::stringstream ss(text);
  std::string item;
  std::vector<std::int64_t> coeffs;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    try {
      coeffs.push_back(std::stoll(item, &used));
    } catch (const std::exception&) {
      throw DomainError("polynomial must be given as three integers a,b,c: '" + text + "'");
    }
    if (used != item.size()) throw DomainError("polynomial must be given as three integers a,b,c: '" + text + "'");
  }
  if (coeffs.size() != 3) throw DomainError("polynomial must be given as three integers a,b,c: '" + text + "'");
  return {coeffs[0], coeffs[1], coeffs[2]};
}

Int128 discriminant(std::int64_t a, std::int64_t b, std::int64_t c) {
  const Int128 A = a, B = b, C = c;
  return 18 * A * B * C - 4 * A * A * A * C + A * A * B * B - 4 * B * B * B - 27 * C * C;
}

bool is_irreducible(const CubicPoly& f) {
  if (f.c == 0) return false;
  for (std::uint64_t d : arith::divisors(arith::factorize(static_cast<std::uint64_t>(std::llabs(f.c))))) {
    const Int128 x = static_cast<Int128>(d);
    if (eval_int(f, x) == 0 || eval_int(f, -x) == 0) return false;
  }
  return true;
}

bool dedekind_maximality_check(const CubicPoly& f, std::uint64_t p) {
  if (p >= (std::uint64_t{1} << 62) || !arith::is_prime(p)) throw DomainError("Dedekind check needs a prime below 2^62");
  const polymod::Poly fbar = reduce_poly(f, p);
  const auto fac = polymod::factor_cubic(fbar, p);

  // g = product of the distinct irreducible factors, h = fbar / g.
  polymod::Poly g{1};
  for (const auto& [root, mult] : fac.roots) g = polymod::mul(g, polymod::normalize({p - root, 1}, p), p);
  if (!fac.irreducible.empty()) g = polymod::mul(g, fac.irreducible, p);
  const polymod::Poly h = polymod::divmod(fbar, g, p).first;

  // F = (g h - f) / p over Z with g, h lifted to [0, p).
  std::vector<Int128> gh(g.size() + h.size() - 1, 0);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < h.size(); ++j) gh[i + j] += Int128(g[i]) * Int128(h[j]);
  const Int128 fz[4] = {f.c, f.b, f.a, 1};
  polymod::Poly big_f(4, 0);
  for (std::size_t i = 0; i < 4; ++i) {
    const Int128 diff = (i < gh.size() ? gh[i] : 0) - fz[i];
    if (diff % Int128(p) != 0) throw std::logic_error("lifted factorization is not congruent to f");
    Int128 q = (diff / Int128(p)) % Int128(p);
    if (q < 0) q += p;
    big_f[i] = static_cast<std::uint64_t>(q);
  }
  big_f = polymod::normalize(big_f, p);

  // Only repeated factors can be common to F, g and h; all are linear here.
  for (const auto& [root, mult] : fac.roots)
    if (mult >= 2 && polymod::eval(big_f, root, p) == 0) return false;
  return true;
}

CubicField CubicField::create(const CubicPoly& poly) {
  if (std::llabs(poly.a) > kMaxCoefficient || std::llabs(poly.b) > kMaxCoefficient ||
      std::llabs(poly.c) > kMaxCoefficient)
    throw FieldError("coefficients must lie in [-10^6, 10^6]");
  if (!is_irreducible(poly)) throw FieldError("x^3+(" + poly.descriptor() + ") is reducible over Q (it has an integer root)");
  const Int128 disc = discriminant(poly);
  if (disc >= 0) throw FieldError("discriminant " + to_string(disc) + " is not negative; only fields with D_K < 0 are supported");
  if (-disc >= (Int128(1) << 63)) throw FieldError("discriminant is too large (|D| >= 2^63)");

  CubicField field;
  field.poly_ = poly;
  field.poly_disc_ = static_cast<std::int64_t>(disc);
  const auto fac = arith::factorize(static_cast<std::uint64_t>(-disc));
  for (const auto& [p, e] : fac) {
    field.ramified_.push_back(p);
    if (e >= 2) field.certificate_.push_back({p, dedekind_maximality_check(poly, p)});
  }
  for (const auto& entry : field.certificate_) {
    if (!entry.passed)
      throw FieldError("equation order is not maximal at p=" + std::to_string(entry.prime) +
                       " (Dedekind criterion failed); non-monogenic fields are not supported");
  }
  field.field_disc_ = field.poly_disc_;
  return field;
}

bool CubicField::is_ramified(std::uint64_t p) const {
  return std::binary_search(ramified_.begin(), ramified_.end(), p);
}

SplittingType splitting_type(const CubicField& field, std::uint64_t p) {
  const auto fac = polymod::factor_cubic(reduce_poly(field.poly(), p), p);
  SplittingType st;
  for (const auto& [root, mult] : fac.roots) st.push_back({mult, 1});
  if (!fac.irreducible.empty()) st.push_back({1, polymod::degree(fac.irreducible)});
  std::sort(st.begin(), st.end());
  return st;
}

SplitCode split_code(const SplittingType& st) {
  SplittingType s = st;
  std::sort(s.begin(), s.end());
  if (s == SplittingType{{1, 1}, {1, 1}, {1, 1}}) return SplitCode::Split;
  if (s == SplittingType{{1, 1}, {1, 2}}) return SplitCode::LinearQuadratic;
  if (s == SplittingType{{1, 3}}) return SplitCode::Inert;
  if (s == SplittingType{{1, 1}, {2, 1}}) return SplitCode::PartiallyRamified;
  if (s == SplittingType{{3, 1}}) return SplitCode::TotallyRamified;
  throw DomainError("not a cubic splitting type");
}

SplittingType splitting_of(SplitCode code) {
  switch (code) {
    case SplitCode::Split: return {{1, 1}, {1, 1}, {1, 1}};
    case SplitCode::LinearQuadratic: return {{1, 1}, {1, 2}};
    case SplitCode::Inert: return {{1, 3}};
    case SplitCode::PartiallyRamified: return {{1, 1}, {2, 1}};
    case SplitCode::TotallyRamified: return {{3, 1}};
  }
  throw DomainError("unknown split code");
}

SplitCode splitting_code(const CubicField& field, std::uint64_t p) { return split_code(splitting_type(field, p)); }

std::uint64_t a_K_prime_power(const SplittingType& st, std::uint32_t k) {
  // ways[j]: tuples over the ideals seen so far with weighted sum j.
  std::vector<std::uint64_t> ways(k + 1, 0);
  ways[0] = 1;
  for (const auto& ideal : st) {
    for (std::uint32_t j = static_cast<std::uint32_t>(ideal.f); j <= k; ++j) ways[j] += ways[j - ideal.f];
  }
  return ways[k];
}

std::uint64_t a_K_prime_power(SplitCode code, std::uint32_t k) {
  const std::uint64_t kk = k;
  switch (code) {
    case SplitCode::Split: return (kk + 1) * (kk + 2) / 2;
    case SplitCode::LinearQuadratic: return kk / 2 + 1;
    case SplitCode::Inert: return kk % 3 == 0 ? 1 : 0;
    case SplitCode::PartiallyRamified: return kk + 1;
    case SplitCode::TotallyRamified: return 1;
  }
  return 0;
}

std::int64_t lambda_f_prime_power(SplitCode code, std::uint32_t k) {
  if (k == 0) return 1;
  return static_cast<std::int64_t>(a_K_prime_power(code, k)) - static_cast<std::int64_t>(a_K_prime_power(code, k - 1));
}

std::int64_t lambda_sym2_prime_power(SplitCode code, bool ramified, std::uint32_t k) {
  const std::int64_t lam = lambda_f_prime_power(code, 1);
  if (ramified) {
    std::int64_t v = 1;
    for (std::uint32_t i = 0; i < k; ++i) v = checked_mul<std::int64_t>(v, lam * lam);
    return v;
  }
  // 1 / ((1 - alpha^2 X)(1 - X)(1 - beta^2 X)) = 1 / (1 - m X + m X^2 - X^3)
  const std::int64_t m = lam * lam - 1;
  std::int64_t c3 = 0, c2 = 0, c1 = 1;  // c_{k-3}, c_{k-2}, c_{k-1} with c_{-1} = c_{-2} = 0
  if (k == 0) return 1;
  for (std::uint32_t i = 1; i <= k; ++i) {
    const std::int64_t next = checked_add(checked_add(checked_mul(m, c1), -checked_mul(m, c2)), c3);
    c3 = c2;
    c2 = c1;
    c1 = next;
  }
  return c1;
}

std::uint64_t a_K(const CubicField& field, std::uint64_t n) {
  std::uint64_t v = 1;
  for (const auto& [p, e] : arith::factorize(n)) v = checked_mul(v, a_K_prime_power(splitting_code(field, p), e));
  return v;
}

std::int64_t lambda_f(const CubicField& field, std::uint64_t n) {
  std::int64_t v = 1;
  for (const auto& [p, e] : arith::factorize(n)) v = checked_mul(v, lambda_f_prime_power(splitting_code(field, p), e));
  return v;
}

std::int64_t lambda_sym2(const CubicField& field, std::uint64_t n) {
  std::int64_t v = 1;
  for (const auto& [p, e] : arith::factorize(n))
    v = checked_mul(v, lambda_sym2_prime_power(splitting_code(field, p), field.is_ramified(p), e));
  return v;
}

SplitTable::SplitTable(const CubicField& field, std::uint64_t limit, unsigned workers)
    : field_(field), limit_(limit), codes_(limit + 1, 0) {
  const auto primes = arith::primes_up_to(limit);
  constexpr std::size_t kBlock = 4096;
  const std::size_t blocks = (primes.size() + kBlock - 1) / kBlock;
  arith::detail::parallel_for_index(blocks, workers, [&](std::size_t b) {
    const std::size_t end = std::min(primes.size(), (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i)
      codes_[primes[i]] = static_cast<std::uint8_t>(splitting_code(field_, primes[i]));
  });
}

SplitCode SplitTable::code(std::uint64_t p) const {
  if (p <= limit_) return static_cast<SplitCode>(codes_[p]);
  return splitting_code(field_, p);
}

arith::MultiplicativeSpec<std::int64_t> a_K_spec(std::shared_ptr<const SplitTable> table) {
  return {"a_K", [t = std::move(table)](std::uint64_t p, std::uint32_t e) {
            return static_cast<std::int64_t>(a_K_prime_power(t->code(p), e));
          }};
}

arith::MultiplicativeSpec<std::int64_t> lambda_f_spec(std::shared_ptr<const SplitTable> table) {
  return {"lambda_f", [t = std::move(table)](std::uint64_t p, std::uint32_t e) {
            return lambda_f_prime_power(t->code(p), e);
          }};
}

arith::MultiplicativeSpec<std::int64_t> lambda_sym2_spec(std::shared_ptr<const SplitTable> table) {
  return {"lambda_sym2", [t = std::move(table)](std::uint64_t p, std::uint32_t e) {
            return lambda_sym2_prime_power(t->code(p), t->is_ramified(p), e);
          }};
}

double real_root(const CubicPoly& f) {
  const long double bound = 1.0L + std::max({std::fabs(static_cast<long double>(f.a)),
                                             std::fabs(static_cast<long double>(f.b)),
                                             std::fabs(static_cast<long double>(f.c))});
  auto value = [&](long double x) { return ((x + f.a) * x + f.b) * x + f.c; };
  long double lo = -bound, hi = bound;
  // f(-bound) < 0 < f(bound) for a monic cubic.
  for (int i = 0; i < 200 && hi - lo > 0; ++i) {
    const long double mid = (lo + hi) / 2;
    (value(mid) < 0 ? lo : hi) = mid;
  }
  return static_cast<double>((lo + hi) / 2);
}

std::optional<ClassData> builtin_class_data(const CubicField& field) {
  if (field.poly() == CubicPoly{0, -1, -1}) {
    return ClassData{1, 1, 1, std::log(real_root(field.poly())), 2};
  }
  return std::nullopt;
}

}  // namespace cubicsq::field
