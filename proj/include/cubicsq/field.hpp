#pragma once

// The cubic field K = Q[x]/(x^3 + a x^2 + b x + c): discriminant, Dedekind's
// maximality criterion, prime splitting and the coefficient functions a_K,
// lambda_f (with zeta_K = zeta * L(s, f)) and lambda_sym2.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cubicsq/arith.hpp"
#include "cubicsq/wide_int.hpp"

namespace cubicsq::field {

struct CubicPoly {
  std::int64_t a = 0, b = 0, c = 0;

  /// "a,b,c", the descriptor used in file metadata.
  std::string descriptor() const;
  static CubicPoly parse(const std::string& text);
  friend bool operator==(const CubicPoly&, const CubicPoly&) = default;
};

Int128 discriminant(std::int64_t a, std::int64_t b, std::int64_t c);
inline Int128 discriminant(const CubicPoly& f) { return discriminant(f.a, f.b, f.c); }

/// True iff the monic cubic has no rational (hence integer) root.
bool is_irreducible(const CubicPoly& f);

/// Dedekind's criterion: is Z[theta] maximal at p? p must be prime.
bool dedekind_maximality_check(const CubicPoly& f, std::uint64_t p);

struct CertificateEntry {
  std::uint64_t prime = 0;
  bool passed = false;
};

/// One prime ideal above p: ramification index e, residue degree f.
struct PrimeIdeal {
  int e = 1;
  int f = 1;
  friend auto operator<=>(const PrimeIdeal&, const PrimeIdeal&) = default;
};

/// Sorted list of the prime ideals above p; sum of e*f is 3.
using SplittingType = std::vector<PrimeIdeal>;

/// Compact code for a splitting type.
enum class SplitCode : std::uint8_t {
  Split = 0,           // (1,1)(1,1)(1,1)
  LinearQuadratic,     // (1,1)(1,2)
  Inert,               // (1,3)
  PartiallyRamified,   // (1,1)(2,1)
  TotallyRamified,     // (3,1)
};

SplitCode split_code(const SplittingType& st);
SplittingType splitting_of(SplitCode code);

/// Validated field with a complete maximality certificate. Construction
/// throws FieldError for reducible cubics, D >= 0, |D| >= 2^63 or a failed
/// Dedekind check (the message names the failing prime).
class CubicField {
 public:
  static CubicField create(const CubicPoly& poly);
  static CubicField create(std::int64_t a, std::int64_t b, std::int64_t c) { return create(CubicPoly{a, b, c}); }

  const CubicPoly& poly() const { return poly_; }
  std::int64_t poly_disc() const { return poly_disc_; }
  std::int64_t field_disc() const { return field_disc_; }
  const std::vector<CertificateEntry>& certificate() const { return certificate_; }
  /// Primes dividing D_K.
  const std::vector<std::uint64_t>& ramified_primes() const { return ramified_; }
  bool is_ramified(std::uint64_t p) const;

 private:
  CubicPoly poly_;
  std::int64_t poly_disc_ = 0;
  std::int64_t field_disc_ = 0;
  std::vector<CertificateEntry> certificate_;
  std::vector<std::uint64_t> ramified_;
};

SplittingType splitting_type(const CubicField& field, std::uint64_t p);
SplitCode splitting_code(const CubicField& field, std::uint64_t p);

/// Number of (m_1..m_r) >= 0 with sum m_i f_i = k.
std::uint64_t a_K_prime_power(const SplittingType& st, std::uint32_t k);
std::uint64_t a_K_prime_power(SplitCode code, std::uint32_t k);
/// lambda_f(p^k) = a_K(p^k) - a_K(p^(k-1)).
std::int64_t lambda_f_prime_power(SplitCode code, std::uint32_t k);
/// Coefficients of the degree-3 Euler factor built from (alpha, beta):
/// alpha + beta = lambda_f(p), alpha beta = 1 when unramified; (lambda_f(p), 0)
/// when p | D_K.
std::int64_t lambda_sym2_prime_power(SplitCode code, bool ramified, std::uint32_t k);

std::uint64_t a_K(const CubicField& field, std::uint64_t n);
std::int64_t lambda_f(const CubicField& field, std::uint64_t n);
std::int64_t lambda_sym2(const CubicField& field, std::uint64_t n);

/// Splitting codes for every prime up to a limit, precomputed once so the
/// sieves pay O(1) per prime power. Primes above the limit are classified on
/// demand.
class SplitTable {
 public:
  SplitTable(const CubicField& field, std::uint64_t limit, unsigned workers = 1);

  const CubicField& field() const { return field_; }
  std::uint64_t limit() const { return limit_; }
  SplitCode code(std::uint64_t p) const;
  bool is_ramified(std::uint64_t p) const { return field_.is_ramified(p); }

 private:
  CubicField field_;
  std::uint64_t limit_;
  std::vector<std::uint8_t> codes_;  // indexed by n; meaningful at primes
};

arith::MultiplicativeSpec<std::int64_t> a_K_spec(std::shared_ptr<const SplitTable> table);
arith::MultiplicativeSpec<std::int64_t> lambda_f_spec(std::shared_ptr<const SplitTable> table);
arith::MultiplicativeSpec<std::int64_t> lambda_sym2_spec(std::shared_ptr<const SplitTable> table);

/// Invariants entering the residue of zeta_K at s = 1.
struct ClassData {
  int r1 = 1;
  int r2 = 1;
  std::int64_t class_number = 1;
  double regulator = 0.0;
  int roots_of_unity = 2;
};

/// Built-in entry for x^3 - x - 1 (h = 1, R = log of the real root); empty
/// for every other field.
std::optional<ClassData> builtin_class_data(const CubicField& field);

/// The real root of x^3 + a x^2 + b x + c for a field with one real embedding,
/// by bisection.
double real_root(const CubicPoly& f);

}  // namespace cubicsq::field
