// One PASS/FAIL line per acceptance criterion. Each criterion runs one or
// more scenarios with their pinned defaults and must also meet its
// runtime budget.

#include "vv/experiments.hpp"

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

using namespace vv;

namespace {

struct Criterion {
  int id;
  const char* title;
  std::vector<std::string> scenarios;
  double budget;  ///< seconds
};

}  // namespace

int main(int argc, char** argv) {
  int threads = 1;
  if (argc > 1) threads = std::max(1, std::atoi(argv[1]));
  const std::vector<Criterion> criteria = {
      {1, "volume unbiasedness", {"volume-unbiased"}, 10},
      {2, "Euler exactness", {"euler-exactness"}, 30},
      {3, "Euler weight values", {"euler-weights"}, 10},
      {4, "counting oracle", {"count-validate"}, 60},
      {5, "two-path polygon expectation", {"polygon-two-path"}, 120},
      {6, "Euler bias blow-up", {"euler-blowup"}, 180},
      {7, "KR formula", {"kr-crosscheck"}, 120},
      {8, "rotation bias", {"box-rotation-bias"}, 10},
      {9, "mean-curvature limit", {"meancurv-crosscheck", "musthold-residual"}, 480},
      {10, "symmetrization", {"symmetrize-check"}, 10},
  };
  int failed = 0;
  for (auto& c : criteria) {
    bool pass = true;
    std::string note;
    auto t0 = std::chrono::steady_clock::now();
    for (auto& name : c.scenarios) {
      ScenarioConfig cfg;
      cfg.name = name;
      cfg.threads = threads;
      try {
        ScenarioResult r = runScenario(cfg);
        for (auto& ch : r.checks)
          if (!ch.pass) {
            pass = false;
            note += " [" + name + ": " + ch.name + (ch.detail.empty() ? "" : " | " + ch.detail) + "]";
          }
      } catch (const std::exception& e) {
        pass = false;
        note += " [" + name + " threw: " + e.what() + "]";
      }
    }
    double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (t > c.budget) {
      pass = false;
      note += " [over runtime budget]";
    }
    failed += !pass;
    std::printf("%s criterion %d: %s (%.1f s, budget %.0f s)%s\n", pass ? "PASS" : "FAIL", c.id, c.title, t,
                c.budget, note.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
