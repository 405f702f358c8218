#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>

#include "cubicsq/verify.hpp"

using namespace cubicsq;

int main() {
  try {
    verify::VerifyOptions opts;
    if (const char* env = std::getenv("CUBICSQ_WORKERS")) {
      const long w = std::strtol(env, nullptr, 10);
      if (w >= 1 && w <= 256) opts.workers = static_cast<unsigned>(w);
    }
    const field::CubicField K = field::CubicField::create(0, -1, -1);
    int failed = 0;
    verify::run_all(K, opts, [&](const verify::CheckResult& r) {
      if (!r.passed && !r.skipped) ++failed;
      std::printf("%s %2d %-34s %8.1fs  %s\n", verify::status_label(r).c_str(), r.id, r.name.c_str(), r.seconds,
                  r.detail.c_str());
      std::fflush(stdout);
    });
    std::printf("%s\n", failed ? (std::to_string(failed) + " check(s) failed").c_str() : "all checks passed");
    return failed ? 1 : 0;
  } catch (const std::exception& e) {
    std::printf("FAIL acceptance aborted: %s\n", e.what());
    return 1;
  }
}
