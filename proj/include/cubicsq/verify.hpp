#pragma once

// The acceptance suite: identity, oracle and consistency checks, shared by
// `cubicsq verify` and the acceptance test binary.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cubicsq/field.hpp"
#include "cubicsq/fit.hpp"

namespace cubicsq::verify {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  bool skipped = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  bool quick = false;
  unsigned workers = 1;
  fit::Tolerances tolerances{};
  /// Limit of the end-to-end sum; 0 picks 10^7 (10^6 when quick).
  std::uint64_t end_to_end_limit = 0;
};

inline constexpr int kCheckCount = 10;

CheckResult run_check(int id, const field::CubicField& field, const VerifyOptions& opts);

/// Runs checks 1..10 in order; `on_result` sees each result as it completes.
std::vector<CheckResult> run_all(const field::CubicField& field, const VerifyOptions& opts,
                                 const std::function<void(const CheckResult&)>& on_result = {});

/// "PASS", "FAIL" or "SKIP".
std::string status_label(const CheckResult& r);

}  // namespace cubicsq::verify
