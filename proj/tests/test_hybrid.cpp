#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cubicsq/hybrid.hpp"
#include "cubicsq/squares.hpp"

using namespace cubicsq;
using namespace cubicsq::hybrid;

namespace {

const field::CubicField& k23() {
  static const field::CubicField K = field::CubicField::create(0, -1, -1);
  return K;
}

std::string temp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "cubicsq-tests";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

std::string csv_text(const SumSeries& s) {
  std::ostringstream out;
  write_csv(s, out, true);
  return out.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream(path) << text;
}

}  // namespace

TEST_CASE("small partial sums against the lattice count") {
  const auto r8 = squares::r8_bruteforce_table(200);
  Int128 running = 0;
  std::vector<Int128> oracle{0};
  for (std::uint64_t n = 1; n <= 200; ++n) {
    const Int128 a = static_cast<Int128>(field::a_K(k23(), n));
    running += a * a * Int128(r8[n]);
    oracle.push_back(running);
  }
  CHECK(oracle[1] == 16);
  CHECK(oracle[2] == 16);
  const SumSeries s = hybrid_sum(k23(), 200, GridSpec::explicit_points({1, 2, 100}));
  REQUIRE(s.grid.size() == 4);
  CHECK(s.grid[0].S == WideInt(oracle[1]));
  CHECK(s.grid[1].S == WideInt(oracle[2]));
  CHECK(s.grid[2].S == WideInt(oracle[100]));
  CHECK(s.grid[3].S == WideInt(oracle[200]));
  CHECK(s.grid[2].S.to_string() == "151343856");
}

TEST_CASE("sieve against term-by-term sums at every x") {
  const std::uint64_t X = 10000;
  const auto naive = naive_prefix_sums(k23(), X);
  std::vector<std::uint64_t> every(X);
  for (std::uint64_t x = 1; x <= X; ++x) every[x - 1] = x;
  for (std::uint64_t seg : {97ull, 4096ull}) {
    const SumSeries s = hybrid_sum(k23(), X, GridSpec::explicit_points(every), {2, seg, ""});
    REQUIRE(s.grid.size() == X);
    for (std::uint64_t x = 1; x <= X; ++x) {
      CHECK(s.grid[x - 1].x == x);
      CHECK(s.grid[x - 1].S == WideInt(naive[x]));
    }
  }
  const field::CubicField other = field::CubicField::create(0, 0, -2);
  const auto naive2 = naive_prefix_sums(other, 3000);
  const SumSeries s2 = hybrid_sum(other, 3000, GridSpec::explicit_points({10, 500, 2999}), {1, 128, ""});
  CHECK(s2.grid[1].S == WideInt(naive2[500]));
  CHECK(s2.grid[3].S == WideInt(naive2[3000]));
}

TEST_CASE("grid points") {
  const auto g = grid_points(GridSpec{}, 1000000);
  CHECK(g.front() == 1);
  CHECK(g.back() == 1000000);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
  CHECK(g.size() >= 70);
  CHECK(grid_points(GridSpec::geometric(10.0), 1000) == std::vector<std::uint64_t>{1, 10, 100, 1000});
  CHECK(grid_points(GridSpec::explicit_points({50, 7, 7, 5000}), 100) == std::vector<std::uint64_t>{7, 50, 100});
  CHECK_THROWS_AS(GridSpec::geometric(1.0), DomainError);
  CHECK_THROWS_AS(grid_points(GridSpec{}, 0), DomainError);
}

TEST_CASE("worker count does not change the output") {
  const std::string one = csv_text(hybrid_sum(k23(), 300000, GridSpec{}, {1, 4096, ""}));
  for (unsigned w : {4u, 8u}) CHECK(csv_text(hybrid_sum(k23(), 300000, GridSpec{}, {w, 4096, ""})) == one);
  CHECK(one.rfind("x,S\n", 0) == 0);
  CHECK(one.find("# poly=0,-1,-1, version=") != std::string::npos);
  CHECK(one.find("wall_seconds") == std::string::npos);
}

TEST_CASE("CSV round trip") {
  const SumSeries s = hybrid_sum(k23(), 50000, GridSpec{});
  std::ostringstream out;
  write_csv(s, out, false);
  CHECK(out.str().find("wall_seconds=") != std::string::npos);
  std::istringstream in(out.str());
  const SumSeries back = read_csv(in);
  CHECK(back.grid == s.grid);
  CHECK(back.descriptor == "0,-1,-1");
  CHECK(back.limit == 50000);

  std::istringstream bad_header("n,S\n1,16\n");
  CHECK_THROWS_AS(read_csv(bad_header), CorruptionError);
  std::istringstream bad_row("x,S\n1,16\n2,17\n");
  CHECK_THROWS_AS(read_csv(bad_row), CorruptionError);
}

TEST_CASE("validation of samples") {
  auto sample = [](std::uint64_t x, Int128 S) { return SumSample{x, WideInt(S)}; };
  CHECK_NOTHROW(validate_samples({sample(1, 16), sample(2, 16), sample(3, 32)}));
  CHECK_THROWS_AS(validate_samples({sample(1, 32), sample(2, 16)}), CorruptionError);
  CHECK_THROWS_AS(validate_samples({sample(1, 16), sample(1, 16)}), CorruptionError);
  CHECK_THROWS_AS(validate_samples({sample(1, 24)}), CorruptionError);
  CHECK_THROWS_AS(validate_samples({sample(1, -16)}), CorruptionError);
  CHECK_THROWS_AS(validate_samples({sample(0, 0)}), CorruptionError);
}

TEST_CASE("checkpoint round trip and resume") {
  const std::string path = temp_path("resume.ckpt");
  std::filesystem::remove(path);
  const SumSeries full = hybrid_sum(k23(), 400000, GridSpec{}, {2, 1024, ""});

  // A run interrupted after its first chunks: everything up to 150000.
  SumSeries partial = full;
  partial.grid.erase(std::remove_if(partial.grid.begin(), partial.grid.end(),
                                    [](const SumSample& s) { return s.x > 150000; }),
                     partial.grid.end());
  checkpoint_save(partial, path);
  const SumSeries loaded = checkpoint_load(path, k23());
  CHECK(loaded.grid == partial.grid);
  CHECK(loaded.limit == 400000);

  const SumSeries resumed = hybrid_sum(k23(), 400000, GridSpec{}, {3, 2048, path}, &loaded);
  CHECK(resumed.grid == full.grid);
  CHECK(checkpoint_load(path).grid == full.grid);

  const field::CubicField other = field::CubicField::create(0, 0, -2);
  CHECK_THROWS_AS(checkpoint_load(path, other), MismatchError);
  CHECK_THROWS_AS(hybrid_sum(other, 400000, GridSpec{}, {}, &loaded), MismatchError);
  std::filesystem::remove(path);
}

TEST_CASE("damaged checkpoints are rejected") {
  const std::string path = temp_path("damaged.ckpt");
  const std::string head = "cubicsq-checkpoint 1\npoly 0,-1,-1\nlimit 100\n";

  write_file(path, head + "samples 2\n1,16\n2,16\nend\n");
  CHECK(checkpoint_load(path).grid.size() == 2);

  write_file(path, head + "samples 2\n1,32\n2,16\nend\n");
  CHECK_THROWS_AS(checkpoint_load(path), CorruptionError);
  write_file(path, head + "samples 1\n1,17\nend\n");
  CHECK_THROWS_AS(checkpoint_load(path), CorruptionError);
  write_file(path, head + "samples 3\n1,16\n2,16\n");
  CHECK_THROWS_AS(checkpoint_load(path), CorruptionError);
  write_file(path, head + "samples 1\n1,16\n");
  CHECK_THROWS_AS(checkpoint_load(path), CorruptionError);
  write_file(path, head + "samples 1\n200,16\nend\n");
  CHECK_THROWS_AS(checkpoint_load(path), CorruptionError);
  write_file(path, "cubicsq-checkpoint 2\npoly 0,-1,-1\nlimit 100\nsamples 0\nend\n");
  CHECK_THROWS_AS(checkpoint_load(path), VersionMismatchError);
  write_file(path, "something else\n");
  CHECK_THROWS_AS(checkpoint_load(path), CorruptionError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(checkpoint_load(path), Error);
}

TEST_CASE("argument checks") {
  CHECK_THROWS_AS(hybrid_sum(k23(), 0, GridSpec{}), DomainError);
  CHECK_THROWS_AS(hybrid_sum(k23(), 100, GridSpec{}, {0, 1024, ""}), DomainError);
}
