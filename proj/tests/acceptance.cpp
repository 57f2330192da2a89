// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "chopt/analytic.hpp"
#include "chopt/optimizer.hpp"
#include "chopt/reference_table.hpp"

using namespace chopt;

namespace {

constexpr double kTsirelson = 0.20710678118654752;

struct Outcome {
  bool passed = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, double budget_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = seconds < budget_seconds;
  const bool passed = out.passed && in_time;
  if (!passed) ++failures;
  std::printf("AC%-2d %s  %s | %s | %.2fs (budget %.0fs%s)\n", id, passed ? "PASS" : "FAIL", title.c_str(),
              out.detail.c_str(), seconds, budget_seconds, in_time ? "" : ", exceeded");
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

OptimizerSettings samples(std::size_t n) {
  OptimizerSettings s;
  s.sample_count = n;
  return s;
}

const OptimumRecord& best_q(const std::vector<OptimumRecord>& records) {
  return *std::max_element(records.begin(), records.end(),
                           [](const auto& a, const auto& b) { return a.report.q < b.report.q; });
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main() {
  const auto figure_grid = ratio_grid(0.005, 0.995, 199);

  criterion(1, "Hardy fraction peak", 1.0, [&] {
    const auto& best = best_q(sweep(figure_grid, Strategy::hardy(), samples(1)));
    const bool ok = std::abs(best.report.q - 0.0903) <= 0.001 && std::abs(best.ratio - 0.46) <= 0.01;
    return Outcome{ok, fmt("max q %.5f at ratio %.3f", best.report.q, best.ratio)};
  });

  criterion(2, "(n,m)=(3,10) peak", 1.0, [&] {
    const auto& best = best_q(sweep(figure_grid, Strategy::nm(3, 10), samples(1)));
    const bool ok = std::abs(best.report.q - 0.188) <= 0.002 && std::abs(best.ratio - 0.74) <= 0.01;
    return Outcome{ok, fmt("max q %.5f at ratio %.3f", best.report.q, best.ratio)};
  });

  criterion(3, "Tsirelson limit at ratio 1", 30.0, [&] {
    const auto state = make_state(1.0);
    const auto r = max_violation(state, OptimizerSettings{});
    // The optimum is the largest of all 10^4 converged starts; add 10^5 raw samples.
    double ceiling = r.report.q;
    StreamRng rng(kDefaultSeed, 1);
    for (int i = 0; i < 100000; ++i) {
      const auto st = make_state(rng.uniform(1e-3, 1.0));
      ceiling = std::max(ceiling, q_objective(st, random_start(rng)));
    }
    const bool ok = std::abs(r.report.q - kTsirelson) <= 5e-4 && ceiling <= kTsirelson + 1e-9;
    return Outcome{ok, fmt("q %.10f, largest sampled %.10f", r.report.q, ceiling)};
  });

  criterion(4, "Efficiency floor 2/3 and 0.828 (two ratios)", 120.0, [&] {
    const auto t0 = std::chrono::steady_clock::now();
    const double low = *min_eta(make_state(0.01), OptimizerSettings{}).report.eta_crit;
    const double t_low = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double high = *min_eta(make_state(1.0), OptimizerSettings{}).report.eta_crit;
    const double t_high = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() - t_low;
    const bool ok = std::abs(low - 2.0 / 3.0) <= 5e-3 && std::abs(high - 0.828) <= 2e-3 && t_low < 60 && t_high < 60;
    return Outcome{ok, fmt("eta(0.01) %.6f in %.1fs, eta(1) %.6f in %.1fs", low, t_low, high, t_high)};
  });

  criterion(5, "Exponent table reproduction", 300.0, [&] {
    bool ok = true;
    double worst = -INFINITY;
    int sine_mismatches = 0;
    for (const auto& row : reference_exponent_table()) {
      const auto st = make_state(row.ratio);
      const auto found = k_search(st, SearchSettings{});
      const auto reference_config = k_config(st, row.k);
      const double reference = eta_crit(st, reference_config).value_or(INFINITY);
      const double gap = found.report.eta_crit.value_or(INFINITY) - reference;
      worst = std::max(worst, gap);
      ok = ok && gap <= 1e-6;
      for (std::size_t i = 0; i < 4; ++i) {
        if (truncate_two_decimals(std::sin(reference_config[i].phi)) != row.sin_phi[i]) ++sine_mismatches;
      }
    }
    ok = ok && sine_mismatches == 0;
    return Outcome{ok, fmt("worst found-minus-reference eta %.3g, sine mismatches %d/28", worst, sine_mismatches)};
  });

  criterion(6, "Characteristic polynomial and trigonometric roots vs eigensolver", 10.0, [&] {
    StreamRng rng(kDefaultSeed, 6);
    double quartic_worst = 0.0, trig_worst = 0.0;
    for (int i = 0; i < 500; ++i) {
      const AnalyticPoint p{rng.uniform(1e-3, 1.0), rng.uniform(), rng.uniform()};
      const auto quartic = char_quartic(p);
      for (double l : numeric_eigenvalues(p)) quartic_worst = std::max(quartic_worst, quartic.scaled_residual(l));
    }
    for (int i = 0; i < 200; ++i) {
      const double eta = rng.uniform(1e-3, 1.0), t = rng.uniform();
      const auto r = reduced_cubic_roots(eta, t);
      std::array<double, 4> mine{r.lambda1, r.lambda2, r.lambda3, r.lambda4};
      std::sort(mine.begin(), mine.end());
      const auto numeric = numeric_eigenvalues({eta, t, t});
      for (int k = 0; k < 4; ++k) trig_worst = std::max(trig_worst, std::abs(mine[k] - numeric(k)));
    }
    const bool ok = quartic_worst < 1e-8 && trig_worst < 1e-9;
    return Outcome{ok, fmt("quartic residual %.3g, trig root error %.3g", quartic_worst, trig_worst)};
  });

  criterion(7, "Analytic boundary cases", 1.0, [&] {
    const double t1 = optimal_t(1.0);
    const double c0 = optimal_t_quartic(2.0 / 3.0)[0];
    const double s = stationary_lambda(2.0 / 3.0, 0.0);
    const bool ok = std::abs(t1 - 0.5) <= 1e-10 && std::abs(c0) <= 1e-12 && std::abs(s) <= 1e-12;
    return Outcome{ok, fmt("optimal_t(1)-0.5 %.3g, constant term %.3g, stationary %.3g", t1 - 0.5, c0, s)};
  });

  criterion(8, "Analytic frontier bridges to numeric min_eta", 300.0, [&] {
    bool ok = true;
    std::string detail;
    for (double eta : {0.70, 0.75, 0.80, 0.828}) {
      const auto point = max_violation_for_eta(eta);
      const double found = *min_eta(point.state, OptimizerSettings{}).report.eta_crit;
      ok = ok && found <= eta + 2e-3;
      detail += fmt("%s%.3f->%.5f", detail.empty() ? "" : ", ", eta, found);
    }
    return Outcome{ok, detail};
  });

  criterion(9, "Dominance on a 50-point grid (1000 multistarts)", 600.0, [&] {
    const auto grid = ratio_grid(0.02, 1.0, 50);
    const auto settings = samples(1000);
    const auto maxq = sweep(grid, Strategy::maxq(), settings);
    const auto mineta = sweep(grid, Strategy::mineta(), settings);
    std::vector<std::vector<OptimumRecord>> fixed{sweep(grid, Strategy::hardy(), settings),
                                                  sweep(grid, Strategy::nm(3, 10), settings),
                                                  sweep(grid, Strategy::ksearch(), settings)};
    double q_deficit = 0.0, eta_excess = 0.0;
    for (const auto& family : fixed) {
      for (std::size_t i = 0; i < grid.size(); ++i) {
        q_deficit = std::max(q_deficit, family[i].report.q - maxq[i].report.q);
        if (family[i].report.eta_crit) {
          eta_excess = std::max(eta_excess, *mineta[i].report.eta_crit - *family[i].report.eta_crit);
        }
      }
    }
    const bool ok = q_deficit <= 1e-9 && eta_excess <= 1e-6;
    return Outcome{ok, fmt("worst q shortfall %.3g, worst eta excess %.3g", q_deficit, eta_excess)};
  });

  criterion(10, "Byte-identical outputs across repeated runs", 120.0, [&] {
    const auto dir = std::filesystem::temp_directory_path() / ("chopt_acceptance_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    const std::vector<std::string> commands{
        "curve --strategy mineta --ratios 0.1:1:5 --samples 100 --format csv",
        "curve --strategy maxq --ratios 0.1:1:5 --samples 100 --format json",
        "table1 --format csv",
        "analytic --eta 0.68:1:9 --format csv",
        "verify --format json",
    };
    bool ok = true;
    for (std::size_t i = 0; i < commands.size(); ++i) {
      std::string bytes[2];
      for (int run = 0; run < 2; ++run) {
        const auto out = dir / (std::to_string(i) + "_" + std::to_string(run));
        const std::string cmd =
            std::string(CHOPT_CLI_PATH) + " " + commands[i] + " --seed 42 --out " + out.string() + " > /dev/null";
        const int status = std::system(cmd.c_str());
        ok = ok && WIFEXITED(status) && WEXITSTATUS(status) == 0;
        bytes[run] = slurp(out);
      }
      ok = ok && !bytes[0].empty() && bytes[0] == bytes[1];
    }
    std::filesystem::remove_all(dir);
    return Outcome{ok, fmt("%zu commands compared", commands.size())};
  });

  std::printf("%s: %d criterion(s) failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
