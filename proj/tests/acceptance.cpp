// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Every criterion allows 0 failures; the translation run must also finish
// within 600 seconds.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "stavi/laws.hpp"

using namespace stavi;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failed = 0;

void line(int n, bool pass, const std::string& what) {
  std::printf("[%s] %d %s\n", pass ? "PASS" : "FAIL", n, what.c_str());
  std::fflush(stdout);
  if (!pass) ++failed;
}

std::string summary(const LawReport& r) {
  std::string s = r.law + " trials=" + std::to_string(r.trials) +
                  " checks=" + std::to_string(r.checks);
  for (const auto& [k, v] : r.stats) s += " " + k + "=" + std::to_string(v);
  s += " failures=" + std::to_string(r.failures);
  if (r.failures) s += " first: " + r.counterexample;
  return s;
}

FuzzConfig config(std::size_t trials, std::uint64_t seed) {
  FuzzConfig cfg;
  cfg.trials = trials;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

int main() {
  // all chains of at most 4 points over P, Q and 200 gapped models of at
  // most 7 regions
  const auto corpus = default_corpus(4, 2, 200, 2024, 7);
  std::size_t finite = 0;
  for (const auto& m : corpus) finite += m.is_finite_chain();
  std::printf("corpus %zu models (%zu finite chains, %zu gapped)\n", corpus.size(), finite,
              corpus.size() - finite);

  {
    const auto t0 = Clock::now();
    const auto r = law_translate(config(2000, 1), corpus);
    const double s = seconds_since(t0);
    char buf[64];
    std::snprintf(buf, sizeof buf, " time=%.1fs limit=600s", s);
    line(1, r.pass() && r.trials >= 2000 && s <= 600, summary(r) + buf);
  }
  {
    const auto r = law_expansions(config(2000, 2), corpus);
    line(2, r.pass(), summary(r));
  }
  {
    const auto r = law_negate(config(2000, 3), corpus, 0);
    line(3, r.pass() && r.trials >= 2000, summary(r));
  }
  {
    const auto a = law_simple_to_normal(config(1000, 4), corpus);
    const auto [b, c] = law_exists(config(1000, 5), corpus);
    const auto d = law_pe_conjoin(config(1000, 6), corpus);
    bool pass = true;
    std::string what;
    for (const auto* r : {&a, &b, &c, &d}) {
      pass = pass && r->pass() && r->trials >= 1000;
      what += (what.empty() ? "" : "; ") + summary(*r);
    }
    line(4, pass, what);
  }
  {
    const auto r = law_build_f(config(200, 7), corpus);
    line(5, r.pass(), summary(r));
  }
  {
    const auto r = law_finite(config(500, 8), corpus);
    line(6, r.pass(), summary(r));
  }
  {
    const auto r = law_differential(config(10000, 9));
    line(7, r.pass() && r.trials >= 10000, summary(r));
  }
  std::printf("%s\n", failed ? "ACCEPTANCE FAILED" : "ACCEPTANCE PASSED");
  return failed ? 1 : 0;
}
