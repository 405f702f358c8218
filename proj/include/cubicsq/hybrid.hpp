#pragma once

// Exact partial sums S(x) = sum_{n <= x} a_K(n)^2 r_8(n) = 16 sum_{n <= x} a_K(n)^2 g(n)
// on a grid of sample points.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "cubicsq/arith.hpp"
#include "cubicsq/field.hpp"
#include "cubicsq/wide_int.hpp"

namespace cubicsq::hybrid {

struct SumSample {
  std::uint64_t x = 0;
  WideInt S;
  friend bool operator==(const SumSample&, const SumSample&) = default;
};

struct GenerationInfo {
  unsigned workers = 1;
  double wall_seconds = 0.0;
  std::string version = CUBICSQ_VERSION;
};

struct SumSeries {
  std::string descriptor;  // "a,b,c"
  std::uint64_t limit = 0;
  std::vector<SumSample> grid;
  GenerationInfo meta;
};

struct GridSpec {
  double ratio = 1.189207115002721;  // 2^(1/4)
  std::vector<std::uint64_t> points;  // used instead of the ratio when non-empty

  static GridSpec geometric(double ratio);
  static GridSpec explicit_points(std::vector<std::uint64_t> points);
};

/// Strictly increasing integer sample points in [1, X], always ending at X.
std::vector<std::uint64_t> grid_points(const GridSpec& spec, std::uint64_t X);

struct SumOptions {
  unsigned workers = 1;
  std::uint64_t segment_size = std::uint64_t{1} << 16;
  std::string checkpoint_path;  // saved after every chunk when non-empty
};

/// n -> a_K(n)^2 g(n).
arith::MultiplicativeSpec<Int128> summand_spec(std::shared_ptr<const field::SplitTable> table);

/// Single pass of a segmented sieve; when `resume` is given the pass starts
/// right after its last sample and keeps its samples.
SumSeries hybrid_sum(const field::CubicField& field, std::uint64_t X, const GridSpec& grid,
                     const SumOptions& opts = {}, const SumSeries* resume = nullptr);

/// Term-by-term S(0..X) from a_K by factorization and r_8 by divisor sums.
std::vector<Int128> naive_prefix_sums(const field::CubicField& field, std::uint64_t X);

void write_csv(const SumSeries& series, std::ostream& out, bool deterministic);
SumSeries read_csv(std::istream& in);

inline constexpr int kCheckpointVersion = 1;

/// Text checkpoint:
///   cubicsq-checkpoint <version>
///   poly <a,b,c>
///   limit <X>
///   samples <count>
///   <x>,<S>        (count lines)
///   end
void checkpoint_save(const SumSeries& series, const std::string& path);
SumSeries checkpoint_load(const std::string& path);
/// As above, and the stored descriptor must match `expected`.
SumSeries checkpoint_load(const std::string& path, const field::CubicField& expected);

/// Throws CorruptionError unless x is strictly increasing, S is nondecreasing,
/// nonnegative and divisible by 16.
void validate_samples(const std::vector<SumSample>& grid);

}  // namespace cubicsq::hybrid
