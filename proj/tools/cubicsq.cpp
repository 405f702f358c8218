#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cubicsq/arith.hpp"
#include "cubicsq/field.hpp"
#include "cubicsq/fit.hpp"
#include "cubicsq/hybrid.hpp"
#include "cubicsq/series.hpp"
#include "cubicsq/squares.hpp"
#include "cubicsq/verify.hpp"

using namespace cubicsq;
using Json = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  bool deterministic = false;
  unsigned workers = 0;  // 0: not given on the command line
};

unsigned resolve_workers(const Globals& g) {
  if (g.workers > 0) return g.workers;
  if (const char* env = std::getenv("CUBICSQ_WORKERS"); env && *env) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 4096) throw UsageError(std::string("CUBICSQ_WORKERS must be a positive integer, got '") + env + "'");
    return static_cast<unsigned>(v);
  }
  return 1;
}

// Writes to the path, or stdout for "" and "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path, std::ios::trunc);
      if (!*file_) throw Error("cannot open " + path + " for writing");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string metadata_line(const std::string& poly, const Globals& g, unsigned workers) {
  std::ostringstream out;
  out << "# poly=" << poly << ", version=" << CUBICSQ_VERSION;
  if (!g.deterministic) out << ", workers=" << workers << ", timestamp=" << std::time(nullptr);
  return out.str();
}

Json metadata_json(const std::string& poly, const Globals& g, unsigned workers) {
  Json m;
  m["poly"] = poly;
  m["version"] = CUBICSQ_VERSION;
  if (!g.deterministic) {
    m["workers"] = workers;
    m["timestamp"] = static_cast<std::int64_t>(std::time(nullptr));
  }
  return m;
}

Json euler_json(const series::EulerEval& e) {
  return Json{{"value", e.value},
              {"tail_estimate", e.tail_estimate},
              {"cutoff", e.prime_cutoff},
              {"method", series::to_string(e.method)}};
}

Json local_json(const series::LocalSeries& l) {
  return Json{{"value", l.value}, {"tail_estimate", l.tail_estimate}, {"depth", l.depth}};
}

const char* code_name(field::SplitCode c) {
  switch (c) {
    case field::SplitCode::Split: return "split";
    case field::SplitCode::LinearQuadratic: return "linear*quadratic";
    case field::SplitCode::Inert: return "inert";
    case field::SplitCode::PartiallyRamified: return "partially ramified";
    case field::SplitCode::TotallyRamified: return "totally ramified";
  }
  return "?";
}

int cmd_field(const std::string& poly) {
  const auto K = field::CubicField::create(field::CubicPoly::parse(poly));
  std::cout << "poly: x^3 + (" << K.poly().a << ")x^2 + (" << K.poly().b << ")x + (" << K.poly().c << ")\n";
  std::cout << "disc(poly) = " << K.poly_disc() << "\n";
  std::cout << "D_K = " << K.field_disc() << "\n";
  std::cout << "ramified primes:";
  for (auto p : K.ramified_primes()) std::cout << ' ' << p << " (" << code_name(field::splitting_code(K, p)) << ")";
  std::cout << "\ncertificate:";
  if (K.certificate().empty()) std::cout << " (no prime squared divides disc(poly))";
  for (const auto& e : K.certificate()) std::cout << ' ' << e.prime << (e.passed ? ":maximal" : ":FAILED");
  std::cout << "\ncertificate OK\n";
  return 0;
}

int cmd_ak(const std::string& poly, std::optional<std::uint64_t> n, std::optional<std::uint64_t> upto,
           const std::string& out_path, const Globals& g) {
  const auto K = field::CubicField::create(field::CubicPoly::parse(poly));
  const unsigned workers = resolve_workers(g);
  if (n) {
    if (*n < 1) throw DomainError("n must be at least 1");
    std::cout << "a_K(" << *n << ") = " << field::a_K(K, *n) << "\n";
    std::cout << "lambda_f(" << *n << ") = " << field::lambda_f(K, *n) << "\n";
    std::cout << "lambda_sym2(" << *n << ") = " << field::lambda_sym2(K, *n) << "\n";
    if (arith::is_prime(*n)) std::cout << "splitting: " << code_name(field::splitting_code(K, *n)) << "\n";
    return 0;
  }
  if (*upto < 1) throw DomainError("--upto must be at least 1");
  auto table = std::make_shared<const field::SplitTable>(K, *upto, workers);
  const arith::SieveOptions so{std::uint64_t{1} << 16, workers};
  const auto a = arith::sieve_multiplicative<std::int64_t>(field::a_K_spec(table), *upto, so);
  const auto lf = arith::sieve_multiplicative<std::int64_t>(field::lambda_f_spec(table), *upto, so);
  const auto ls = arith::sieve_multiplicative<std::int64_t>(field::lambda_sym2_spec(table), *upto, so);
  Output out(out_path);
  auto& os = out.stream();
  os << "n,a_K,lambda_f,lambda_sym2\n";
  for (std::uint64_t i = 1; i <= *upto; ++i)
    os << i << ',' << a.values[i] << ',' << lf.values[i] << ',' << ls.values[i] << '\n';
  os << metadata_line(K.poly().descriptor(), g, workers) << '\n';
  return 0;
}

int cmd_r8(std::optional<std::uint64_t> n, std::optional<std::uint64_t> upto, const std::string& out_path,
           const Globals& g) {
  if (n) {
    if (*n < 1) throw DomainError("n must be at least 1");
    std::cout << to_string(squares::r8(*n)) << "\n";
    return 0;
  }
  if (*upto < 1) throw DomainError("--upto must be at least 1");
  const unsigned workers = resolve_workers(g);
  const auto gt = arith::sieve_multiplicative<Int128>(squares::g_spec(), *upto, {std::uint64_t{1} << 16, workers});
  Output out(out_path);
  auto& os = out.stream();
  os << "n,r8\n";
  for (std::uint64_t i = 1; i <= *upto; ++i) os << i << ',' << to_string(checked_mul<Int128>(16, gt.values[i])) << '\n';
  os << metadata_line("-", g, workers) << '\n';
  return 0;
}

std::vector<std::uint64_t> read_grid_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read grid file " + path);
  std::vector<std::uint64_t> pts;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::uint64_t v;
    while (ls >> v) {
      pts.push_back(v);
      if (ls.peek() == ',') ls.ignore();
    }
    if (!ls.eof()) throw DomainError("grid file " + path + ": not an integer in '" + line + "'");
  }
  return pts;
}

int cmd_sum(const std::string& poly, std::uint64_t limit, std::optional<double> ratio,
            const std::string& grid_file, const std::string& checkpoint, const std::string& out_path,
            const Globals& g) {
  const auto K = field::CubicField::create(field::CubicPoly::parse(poly));
  hybrid::GridSpec grid;
  if (!grid_file.empty()) grid = hybrid::GridSpec::explicit_points(read_grid_file(grid_file));
  else if (ratio) grid = hybrid::GridSpec::geometric(*ratio);
  hybrid::SumOptions opts;
  opts.workers = resolve_workers(g);
  opts.checkpoint_path = checkpoint;
  std::optional<hybrid::SumSeries> resume;
  if (!checkpoint.empty() && std::ifstream(checkpoint).good()) {
    resume = hybrid::checkpoint_load(checkpoint, K);
    std::cerr << "resuming from " << checkpoint << " at x=" << (resume->grid.empty() ? 0 : resume->grid.back().x) << "\n";
  }
  const hybrid::SumSeries s = hybrid::hybrid_sum(K, limit, grid, opts, resume ? &*resume : nullptr);
  Output out(out_path);
  hybrid::write_csv(s, out.stream(), g.deterministic);
  return 0;
}

int cmd_constants(const std::string& poly, std::uint64_t prime_cutoff, std::uint64_t coefficient_cutoff,
                  const std::string& out_path, const Globals& g) {
  const auto K = field::CubicField::create(field::CubicPoly::parse(poly));
  const unsigned workers = resolve_workers(g);
  const series::SeriesContext ctx(K, coefficient_cutoff, prime_cutoff, workers);
  const series::MainTermCoeffs mc = series::main_term_coeffs(ctx);
  const series::HEvaluation& h = mc.at4;

  Json j;
  j["poly"] = K.poly().descriptor();
  j["field_discriminant"] = K.field_disc();
  j["c1"] = mc.c1;
  j["c0"] = mc.c0;
  j["H4"] = mc.H4;
  j["dH4"] = mc.dH4;
  j["gamma"] = mc.gamma;
  Json steps = Json::array();
  for (const auto& r : mc.steps) steps.push_back(Json{{"step", r.step}, {"derivative", r.derivative}, {"c0", r.c0}});
  j["derivative"] = Json{{"step", mc.step}, {"c0_step_delta", mc.c0_step_delta}, {"steps", steps}};
  j["cutoffs"] = Json{{"coefficient", mc.coefficient_cutoff}, {"prime", mc.prime_cutoff}};
  j["at_4"] = Json{{"ratio_B2_A2", local_json(h.ratio)},
                   {"L_f_1", euler_json(h.lf_shift)},
                   {"L_sym2_1", euler_json(h.ls2_shift)},
                   {"zeta_4", h.zeta},
                   {"L_f_4", euler_json(h.lf)},
                   {"L_sym2_4", euler_json(h.ls2)},
                   {"harmless_B_4", euler_json(h.harmless)},
                   {"G_4", h.G}};
  if (const auto cd = field::builtin_class_data(K)) j["L_f_1_class_number_formula"] = series::L1f_classnumber(K, *cd);
  j["metadata"] = metadata_json(K.poly().descriptor(), g, workers);
  Output out(out_path);
  out.stream() << j.dump(2) << '\n';
  return 0;
}

int cmd_fit(const std::string& input, const std::string& constants, double x_min, const fit::Tolerances& tol,
            const std::string& out_path, const Globals& g) {
  std::ifstream csv(input);
  if (!csv) throw Error("cannot read " + input);
  const hybrid::SumSeries s = hybrid::read_csv(csv);
  std::ifstream cj(constants);
  if (!cj) throw Error("cannot read " + constants);
  Json c;
  try {
    c = Json::parse(cj);
  } catch (const std::exception& e) {
    throw CorruptionError(constants + " is not valid JSON: " + e.what());
  }
  if (!c.contains("c1") || !c.contains("c0") || !c.contains("poly")) throw CorruptionError(constants + " lacks c1, c0 or poly");
  const std::string poly = c["poly"].get<std::string>();
  if (!s.descriptor.empty() && s.descriptor != poly)
    throw MismatchError("sums are for poly " + s.descriptor + " but constants for " + poly);
  const double c1 = c["c1"].get<double>(), c0 = c["c0"].get<double>();

  const fit::FitResult fr = fit::fit_main_term(s, x_min);
  const fit::ResidualFit rr = fit::residual_exponent(s, c1, c0, x_min);
  const fit::LadderOutcome lad = fit::apply_tolerances(fr, rr, c1, tol);

  Json j;
  j["poly"] = poly;
  j["x_min"] = x_min;
  j["c1"] = c1;
  j["c0"] = c0;
  j["c1_hat"] = fr.c1_hat;
  j["c0_hat"] = fr.c0_hat;
  j["c1_hat_se"] = fr.c1_se;
  j["c0_hat_se"] = fr.c0_se;
  j["condition_number"] = fr.condition_number;
  j["points_used"] = fr.points_used;
  j["residual_slope"] = rr.slope;
  j["residual_slope_se"] = rr.slope_se;
  j["residual_points_used"] = rr.points_used;
  j["zero_residuals_dropped"] = rr.zero_residuals_dropped;
  j["reference_exponent"] = 198.0 / 53.0;
  j["tolerances"] = Json{{"c1_relative", tol.c1_relative}, {"slope_low", tol.slope_low}, {"slope_high", tol.slope_high}};
  j["c1_relative_error"] = lad.c1_relative_error;
  j["pass"] = Json{{"c1", lad.c1_ok}, {"slope", lad.slope_ok}, {"overall", lad.passed()}};
  j["metadata"] = metadata_json(poly, g, 1);
  Output out(out_path);
  out.stream() << j.dump(2) << '\n';
  if (!lad.passed()) {
    std::cerr << "fit outside tolerance ladder: c1 " << (lad.c1_ok ? "ok" : "FAIL") << ", slope "
              << (lad.slope_ok ? "ok" : "FAIL") << "\n";
    return 1;
  }
  return 0;
}

int cmd_verify(const std::string& poly, bool quick, const fit::Tolerances& tol, const Globals& g) {
  const auto K = field::CubicField::create(field::CubicPoly::parse(poly));
  verify::VerifyOptions opts;
  opts.quick = quick;
  opts.workers = resolve_workers(g);
  opts.tolerances = tol;
  bool ok = true;
  std::cout << "  #  status  time(s)  check\n";
  verify::run_all(K, opts, [&](const verify::CheckResult& r) {
    if (!r.passed && !r.skipped) ok = false;
    std::cout << std::setw(3) << r.id << "  " << verify::status_label(r) << "  " << std::setw(8) << std::fixed
              << std::setprecision(2) << r.seconds << "  " << r.name << ": " << r.detail << std::endl;
  });
  std::cout << (ok ? "all checks passed" : "some checks FAILED") << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact sums of a_K(n)^2 r_8(n) over cubic fields and their main term"};
  app.set_version_flag("--version", std::string(CUBICSQ_VERSION));
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_flag("--deterministic", g.deterministic, "Omit timestamps and worker counts from output metadata");
  app.add_option("--workers", g.workers, "Worker threads (default: $CUBICSQ_WORKERS, else 1)")
      ->check(CLI::Range(1u, 4096u));

  std::string poly = "0,-1,-1";
  std::string out_path;

  auto* field_cmd = app.add_subcommand("field", "Validate a cubic field and print D_K and its certificate");
  field_cmd->add_option("--poly", poly, "Coefficients a,b,c of x^3+ax^2+bx+c")->required();

  std::optional<std::uint64_t> n, upto;
  auto* ak_cmd = app.add_subcommand("ak", "Ideal counts a_K(n) and the coefficients lambda_f, lambda_sym2");
  ak_cmd->add_option("--poly", poly, "Coefficients a,b,c")->required();
  auto* ak_n = ak_cmd->add_option("--n", n, "Single n");
  auto* ak_up = ak_cmd->add_option("--upto", upto, "Table for 1..N as CSV");
  ak_n->excludes(ak_up);
  ak_cmd->add_option("--out", out_path, "Output path (default stdout)");

  auto* r8_cmd = app.add_subcommand("r8", "Representations as a sum of eight squares");
  auto* r8_n = r8_cmd->add_option("--n", n, "Single n");
  auto* r8_up = r8_cmd->add_option("--upto", upto, "Table for 1..N as CSV n,r8");
  r8_n->excludes(r8_up);
  r8_cmd->add_option("--out", out_path, "Output path (default stdout)");

  std::uint64_t limit = 0;
  std::optional<double> ratio;
  std::string grid_file, checkpoint;
  auto* sum_cmd = app.add_subcommand("sum", "Exact S(x) on a grid up to X, CSV x,S");
  sum_cmd->add_option("--poly", poly, "Coefficients a,b,c")->required();
  sum_cmd->add_option("--limit", limit, "X")->required()->check(CLI::PositiveNumber);
  auto* ratio_opt = sum_cmd->add_option("--grid-ratio", ratio, "Geometric grid ratio (default 2^(1/4))");
  auto* grid_opt = sum_cmd->add_option("--grid-file", grid_file, "Explicit grid, one integer per line");
  ratio_opt->excludes(grid_opt);
  sum_cmd->add_option("--checkpoint", checkpoint, "Checkpoint file; resumed from when it exists");
  sum_cmd->add_option("--out", out_path, "Output path (default stdout)");

  std::uint64_t prime_cutoff = 1000000, coefficient_cutoff = 4000000;
  auto* const_cmd = app.add_subcommand("constants", "Main-term coefficients c1, c0 and every constituent, JSON");
  const_cmd->add_option("--poly", poly, "Coefficients a,b,c")->required();
  const_cmd->add_option("--prime-cutoff", prime_cutoff, "Primes in the harmless-factor product")->capture_default_str();
  const_cmd->add_option("--coefficient-cutoff", coefficient_cutoff, "Terms available to the L-series sums")
      ->capture_default_str();
  const_cmd->add_option("--out", out_path, "Output path (default stdout)");

  std::string input, constants;
  double x_min = fit::kDefaultXMin;
  fit::Tolerances tol;
  auto* fit_cmd = app.add_subcommand("fit", "Fit sums against the main term, JSON");
  fit_cmd->add_option("--input", input, "CSV from `sum`")->required();
  fit_cmd->add_option("--constants", constants, "JSON from `constants`")->required();
  fit_cmd->add_option("--x-min", x_min, "Ignore grid points below this x")->capture_default_str();
  auto add_tolerances = [&tol](CLI::App* cmd) {
    cmd->add_option("--c1-tolerance", tol.c1_relative, "Relative tolerance on c1")->capture_default_str();
    cmd->add_option("--slope-low", tol.slope_low, "Residual slope window, lower end")->capture_default_str();
    cmd->add_option("--slope-high", tol.slope_high, "Residual slope window, upper end")->capture_default_str();
  };
  add_tolerances(fit_cmd);
  fit_cmd->add_option("--out", out_path, "Output path (default stdout)");

  bool quick = false;
  auto* verify_cmd = app.add_subcommand("verify", "Run the acceptance suite and print a pass/fail table");
  verify_cmd->add_option("--poly", poly, "Coefficients a,b,c")->capture_default_str();
  verify_cmd->add_flag("--quick", quick, "Smaller ranges and X = 10^6");
  add_tolerances(verify_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*field_cmd) return cmd_field(poly);
    if (*ak_cmd) {
      if (!n && !upto) throw UsageError("ak needs --n or --upto");
      return cmd_ak(poly, n, upto, out_path, g);
    }
    if (*r8_cmd) {
      if (!n && !upto) throw UsageError("r8 needs --n or --upto");
      return cmd_r8(n, upto, out_path, g);
    }
    if (*sum_cmd) return cmd_sum(poly, limit, ratio, grid_file, checkpoint, out_path, g);
    if (*const_cmd) return cmd_constants(poly, prime_cutoff, coefficient_cutoff, out_path, g);
    if (*fit_cmd) return cmd_fit(input, constants, x_min, tol, out_path, g);
    if (*verify_cmd) return cmd_verify(poly, quick, tol, g);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
