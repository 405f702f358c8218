#include "cubicsq/hybrid.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "cubicsq/squares.hpp"

namespace cubicsq::hybrid {

namespace {

struct SegmentResult {
  Int128 total = 0;
  std::vector<std::pair<std::uint64_t, Int128>> marks;  // (grid x, partial sum up to x)
};

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && s[i] == ' ') ++i;
  return s.substr(i);
}

std::uint64_t parse_u64(const std::string& text, const char* what) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    throw CorruptionError(std::string("bad ") + what + ": '" + text + "'");
  }
  if (used != text.size() || text.empty() || text[0] == '-') throw CorruptionError(std::string("bad ") + what + ": '" + text + "'");
  return v;
}

SumSample parse_row(const std::string& line) {
  const auto comma = line.find(',');
  if (comma == std::string::npos) throw CorruptionError("malformed row '" + line + "'");
  SumSample s;
  s.x = parse_u64(line.substr(0, comma), "x");
  try {
    s.S = WideInt::parse(line.substr(comma + 1));
  } catch (const Error& e) {
    throw CorruptionError("bad S in row '" + line + "': " + e.what());
  }
  return s;
}

}  // namespace

GridSpec GridSpec::geometric(double ratio) {
  if (!(ratio > 1.0)) throw DomainError("grid ratio must exceed 1");
  GridSpec g;
  g.ratio = ratio;
  return g;
}

GridSpec GridSpec::explicit_points(std::vector<std::uint64_t> points) {
  if (points.empty()) throw DomainError("explicit grid is empty");
  GridSpec g;
  g.points = std::move(points);
  return g;
}

std::vector<std::uint64_t> grid_points(const GridSpec& spec, std::uint64_t X) {
  if (X < 1) throw DomainError("limit must be at least 1");
  std::vector<std::uint64_t> out;
  if (!spec.points.empty()) {
    for (std::uint64_t x : spec.points)
      if (x >= 1 && x < X) out.push_back(x);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  } else {
    if (!(spec.ratio > 1.0)) throw DomainError("grid ratio must exceed 1");
    const double limit = static_cast<double>(X);
    for (int i = 0;; ++i) {
      const double v = std::round(std::pow(spec.ratio, i));
      if (v >= limit) break;
      const auto x = static_cast<std::uint64_t>(v);
      if (out.empty() || x > out.back()) out.push_back(x);
    }
  }
  out.push_back(X);
  return out;
}

arith::MultiplicativeSpec<Int128> summand_spec(std::shared_ptr<const field::SplitTable> table) {
  return {"aK2g", [table](std::uint64_t p, std::uint32_t e) -> Int128 {
            const Int128 a = static_cast<Int128>(field::a_K_prime_power(table->code(p), e));
            if (a == 0) return 0;
            return checked_mul(checked_mul(a, a), squares::g_prime_power(p, e));
          }};
}

SumSeries hybrid_sum(const field::CubicField& field, std::uint64_t X, const GridSpec& grid, const SumOptions& opts,
                     const SumSeries* resume) {
  if (X < 1) throw DomainError("limit must be at least 1");
  if (opts.workers < 1) throw DomainError("worker count must be at least 1");
  const auto started = std::chrono::steady_clock::now();

  SumSeries out;
  out.descriptor = field.poly().descriptor();
  out.limit = X;
  out.meta.workers = opts.workers;

  WideInt running;
  std::uint64_t done = 0;
  if (resume) {
    if (resume->descriptor != out.descriptor)
      throw MismatchError("checkpoint is for poly " + resume->descriptor + ", not " + out.descriptor);
    validate_samples(resume->grid);
    for (const SumSample& s : resume->grid) {
      if (s.x > X) break;
      out.grid.push_back(s);
    }
    if (!out.grid.empty()) {
      done = out.grid.back().x;
      running = out.grid.back().S;
    }
  }

  std::vector<std::uint64_t> points;
  for (std::uint64_t x : grid_points(grid, X))
    if (x > done) points.push_back(x);
  if (points.empty()) {
    out.meta.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return out;
  }

  auto table = std::make_shared<const field::SplitTable>(field, X, opts.workers);
  const auto rule = summand_spec(table);
  const arith::SieveOptions sieve_opts{opts.segment_size, opts.workers};
  const std::uint64_t chunk = opts.segment_size * std::max<std::uint64_t>(64, 16 * std::uint64_t{opts.workers});

  for (std::uint64_t lo = done + 1; lo <= X;) {
    const std::uint64_t hi = X - lo < chunk ? X : lo + chunk - 1;
    auto results = arith::sieve_segments<Int128>(
        rule, lo, hi, sieve_opts, [&](std::uint64_t a, std::span<const Int128> vals) {
          SegmentResult r;
          const std::uint64_t b = a + vals.size() - 1;
          auto it = std::lower_bound(points.begin(), points.end(), a);
          for (std::size_t i = 0; i < vals.size(); ++i) {
            r.total = checked_add(r.total, checked_mul<Int128>(16, vals[i]));
            if (it != points.end() && *it <= b && *it == a + i) {
              r.marks.emplace_back(*it, r.total);
              ++it;
            }
          }
          return r;
        });
    bool emitted = false;
    for (const SegmentResult& r : results) {
      for (const auto& [x, partial] : r.marks) {
        WideInt at = running;
        at += partial;
        out.grid.push_back({x, at});
        emitted = true;
      }
      running += r.total;
    }
    if (emitted && !opts.checkpoint_path.empty()) checkpoint_save(out, opts.checkpoint_path);
    if (hi == X) break;
    lo = hi + 1;
  }
  out.meta.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return out;
}

std::vector<Int128> naive_prefix_sums(const field::CubicField& field, std::uint64_t X) {
  std::vector<Int128> prefix(X + 1, 0);
  for (std::uint64_t n = 1; n <= X; ++n) {
    const Int128 a = static_cast<Int128>(field::a_K(field, n));
    const Int128 term = a == 0 ? Int128{0} : checked_mul(checked_mul(a, a), squares::r8(n));
    prefix[n] = checked_add(prefix[n - 1], term);
  }
  return prefix;
}

void validate_samples(const std::vector<SumSample>& grid) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const SumSample& s = grid[i];
    if (s.x < 1) throw CorruptionError("sample x must be at least 1");
    if (s.S.is_negative()) throw CorruptionError("negative S at x=" + std::to_string(s.x));
    if ((s.S.low_word() & 15u) != 0) throw CorruptionError("S not divisible by 16 at x=" + std::to_string(s.x));
    if (i > 0) {
      if (s.x <= grid[i - 1].x) throw CorruptionError("x not strictly increasing at x=" + std::to_string(s.x));
      if (s.S < grid[i - 1].S) throw CorruptionError("S decreases at x=" + std::to_string(s.x));
    }
  }
}

void write_csv(const SumSeries& series, std::ostream& out, bool deterministic) {
  out << "x,S\n";
  for (const SumSample& s : series.grid) out << s.x << ',' << s.S.to_string() << '\n';
  out << "# poly=" << series.descriptor << ", version=" << series.meta.version;
  if (!deterministic) {
    std::ostringstream wall;
    wall.precision(3);
    wall << std::fixed << series.meta.wall_seconds;
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    out << ", workers=" << series.meta.workers << ", wall_seconds=" << wall.str() << ", timestamp=" << now;
  }
  out << '\n';
}

SumSeries read_csv(std::istream& in) {
  SumSeries series;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      // Items are separated by ", "; the poly value itself contains bare commas.
      const std::string body = trim(line.substr(1));
      std::size_t pos = 0;
      while (pos < body.size()) {
        std::size_t end = body.find(", ", pos);
        if (end == std::string::npos) end = body.size();
        const std::string kv = body.substr(pos, end - pos);
        const auto eq = kv.find('=');
        if (eq != std::string::npos) {
          const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
          if (key == "poly") series.descriptor = value;
          if (key == "version") series.meta.version = value;
          if (key == "workers") series.meta.workers = static_cast<unsigned>(parse_u64(value, "workers"));
        }
        pos = end + 2;
      }
      continue;
    }
    if (!header) {
      if (line != "x,S") throw CorruptionError("expected header 'x,S', got '" + line + "'");
      header = true;
      continue;
    }
    series.grid.push_back(parse_row(line));
  }
  if (!header) throw CorruptionError("missing header 'x,S'");
  validate_samples(series.grid);
  series.limit = series.grid.empty() ? 0 : series.grid.back().x;
  return series;
}

void checkpoint_save(const SumSeries& series, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error("cannot write checkpoint " + tmp);
    out << "cubicsq-checkpoint " << kCheckpointVersion << '\n';
    out << "poly " << series.descriptor << '\n';
    out << "limit " << series.limit << '\n';
    out << "samples " << series.grid.size() << '\n';
    for (const SumSample& s : series.grid) out << s.x << ',' << s.S.to_string() << '\n';
    out << "end\n";
    if (!out) throw Error("write failed for checkpoint " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

SumSeries checkpoint_load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read checkpoint " + path);
  auto next = [&](const char* what) {
    std::string line;
    if (!std::getline(in, line)) throw CorruptionError(std::string("checkpoint truncated before ") + what);
    return trim(line);
  };
  auto field_value = [&](const char* key) {
    const std::string line = next(key);
    const std::string prefix = std::string(key) + " ";
    if (line.rfind(prefix, 0) != 0) throw CorruptionError(std::string("expected '") + key + "' line, got '" + line + "'");
    return line.substr(prefix.size());
  };

  const std::string version = field_value("cubicsq-checkpoint");
  if (version != std::to_string(kCheckpointVersion))
    throw VersionMismatchError("checkpoint version " + version + ", this build reads version " +
                               std::to_string(kCheckpointVersion));
  SumSeries series;
  series.descriptor = field_value("poly");
  (void)field::CubicPoly::parse(series.descriptor);
  series.limit = parse_u64(field_value("limit"), "limit");
  const std::uint64_t count = parse_u64(field_value("samples"), "sample count");
  for (std::uint64_t i = 0; i < count; ++i) series.grid.push_back(parse_row(next("all samples")));
  if (next("end marker") != "end") throw CorruptionError("missing end marker");
  validate_samples(series.grid);
  if (!series.grid.empty() && series.grid.back().x > series.limit)
    throw CorruptionError("sample beyond the recorded limit");
  return series;
}

SumSeries checkpoint_load(const std::string& path, const field::CubicField& expected) {
  SumSeries series = checkpoint_load(path);
  if (series.descriptor != expected.poly().descriptor())
    throw MismatchError("checkpoint is for poly " + series.descriptor + ", not " + expected.poly().descriptor());
  return series;
}

}  // namespace cubicsq::hybrid
