#pragma once

// Multistart conjugate-gradient search over the eight setting parameters and
// the staged integer search over generalized Hardy exponents.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "chopt/chmetrics.hpp"
#include "chopt/error.hpp"
#include "chopt/parallel.hpp"
#include "chopt/random.hpp"
#include "chopt/states.hpp"

namespace chopt {

inline constexpr std::size_t kParameterCount = 8;

/// (phi1..phi4, nu1..nu4).
using ParameterVector = std::array<double, kParameterCount>;

inline constexpr std::uint64_t kDefaultSeed = 20110707;

struct OptimizerSettings {
  std::size_t sample_count = 10000;
  double gradient_step = 1e-6;
  double tolerance = 1e-10;
  int max_iterations = 1000;
  std::uint64_t seed = kDefaultSeed;

  void validate() const {
    if (sample_count < 1) throw Error(ErrorCode::InvalidArgument, "sample_count must be >= 1");
    if (!(gradient_step > 0.0 && gradient_step < 1e-2)) {
      throw Error(ErrorCode::InvalidArgument, "gradient_step must lie in (0, 1e-2)");
    }
    if (!(tolerance > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
    if (max_iterations < 1) throw Error(ErrorCode::InvalidArgument, "max_iterations must be >= 1");
  }
};

struct SearchSettings {
  int coarse_kmax = 32;
  int full_kmax = kDefaultExponentCeiling;
  int refine_rounds = 8;

  void validate() const {
    if (coarse_kmax < 1 || coarse_kmax > full_kmax || full_kmax > kDefaultExponentCeiling) {
      throw Error(ErrorCode::InvalidArgument, "need 1 <= coarse_kmax <= full_kmax <= 1024");
    }
    if (refine_rounds < 0) throw Error(ErrorCode::InvalidArgument, "refine_rounds must be >= 0");
  }
};

enum class Objective { Fixed, MaxQ, MinEta };

constexpr const char* to_string(Objective o) noexcept {
  switch (o) {
    case Objective::Fixed: return "fixed";
    case Objective::MaxQ: return "max-q";
    case Objective::MinEta: return "min-eta";
  }
  return "?";
}

struct OptimumRecord {
  double ratio = 0.0;
  MeasurementConfig config;
  std::optional<ExponentQuad> k;
  ViolationReport report;
  Objective objective = Objective::Fixed;
};

struct CgResult {
  ParameterVector point{};
  double value = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;  // gradient norm reached the tolerance
};

namespace detail {

inline double dot(const ParameterVector& a, const ParameterVector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < kParameterCount; ++i) s += a[i] * b[i];
  return s;
}

inline ParameterVector axpy(const ParameterVector& x, double alpha, const ParameterVector& d) {
  ParameterVector y;
  for (std::size_t i = 0; i < kParameterCount; ++i) y[i] = x[i] + alpha * d[i];
  return y;
}

}  // namespace detail

/// Polak-Ribiere (PR+) conjugate-gradient ascent with central-difference
/// gradients, restarted every eight iterations and whenever the direction
/// stops being an ascent direction. The line search backtracks until the
/// sufficient-increase (Armijo) condition holds; once function values can no
/// longer resolve the increase it falls back to a secant on the directional
/// derivative. To minimize, pass the negated objective.
template <class Fn>
CgResult cg_maximize(Fn&& objective, const ParameterVector& start, const OptimizerSettings& settings) {
  settings.validate();
  constexpr double armijo = 1e-4;
  constexpr std::size_t n = kParameterCount;
  const double h = settings.gradient_step;

  auto eval = [&](const ParameterVector& x) {
    const double v = objective(x);
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteObjective, "objective returned a non-finite value");
    return v;
  };
  auto gradient = [&](ParameterVector x) {
    ParameterVector g;
    for (std::size_t i = 0; i < n; ++i) {
      const double xi = x[i];
      x[i] = xi + h;
      const double fp = eval(x);
      x[i] = xi - h;
      const double fm = eval(x);
      x[i] = xi;
      g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
  };

  CgResult result;
  ParameterVector x = start;
  double fx = eval(x);
  ParameterVector g = gradient(x);
  ParameterVector d = g;
  double prev_alpha = 0.0;
  double prev_slope = 0.0;
  int since_restart = 0;

  int iter = 0;
  for (; iter < settings.max_iterations; ++iter) {
    const double gnorm = std::sqrt(detail::dot(g, g));
    if (gnorm <= settings.tolerance) {
      result.converged = true;
      break;
    }
    double slope = detail::dot(g, d);
    if (!(slope > 0.0)) {
      d = g;
      slope = gnorm * gnorm;
      since_restart = 0;
    }
    const double dnorm = std::sqrt(detail::dot(d, d));
    double alpha = prev_alpha > 0.0 ? prev_alpha * prev_slope / slope : 0.5 / dnorm;
    alpha = std::min(alpha, 1.0 / dnorm);

    // Line search along d.
    const double noise = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(fx));
    bool accepted = false;
    ParameterVector x1;
    double f1 = 0.0;
    std::optional<ParameterVector> g1;
    for (int trial = 0; trial < 60 && alpha * dnorm > 1e-16; ++trial) {
      x1 = detail::axpy(x, alpha, d);
      f1 = eval(x1);
      if (f1 >= fx + armijo * alpha * slope && f1 > fx) {
        accepted = true;
        // Refine with the maximizer of the quadratic through (0, fx, slope) and (alpha, f1).
        const double curvature = (f1 - fx - slope * alpha) / (alpha * alpha);
        double trial_alpha = curvature < 0.0 ? -slope / (2.0 * curvature) : 2.0 * alpha;
        trial_alpha = std::min(trial_alpha, 4.0 * alpha);
        if (std::abs(trial_alpha - alpha) > 0.05 * alpha) {
          const ParameterVector x2 = detail::axpy(x, trial_alpha, d);
          const double f2 = eval(x2);
          if (f2 > f1) {
            x1 = x2;
            f1 = f2;
            alpha = trial_alpha;
          }
        }
        break;
      }
      if (f1 >= fx - noise) {
        // Values are indistinguishable; work with the directional derivative.
        ParameterVector gt = gradient(x1);
        const double s1 = detail::dot(gt, d);
        if (s1 < slope) {
          // Secant step to the zero of the directional derivative.
          const double secant = std::min(alpha * slope / (slope - s1), 4.0 * alpha);
          const ParameterVector x2 = detail::axpy(x, secant, d);
          const double f2 = eval(x2);
          const ParameterVector g2 = gradient(x2);
          const double s2 = detail::dot(g2, d);
          if (f2 >= fx - noise && std::abs(s2) < std::abs(s1) && std::abs(s2) <= 0.9 * slope) {
            accepted = true;
            x1 = x2;
            f1 = f2;
            g1 = g2;
            alpha = secant;
            break;
          }
        }
        if (std::abs(s1) <= 0.9 * slope) {
          accepted = true;
          g1 = gt;
          break;
        }
        if (s1 > 0.0) {
          alpha *= 2.0;
        } else {
          alpha *= slope / (slope - s1);
        }
        continue;
      }
      const double denom = 2.0 * (f1 - fx - slope * alpha);
      const double model = denom < 0.0 ? -slope * alpha * alpha / denom : 0.5 * alpha;
      alpha = std::clamp(model, 0.1 * alpha, 0.5 * alpha);
    }

    if (!accepted) {
      if (since_restart == 0) break;  // steepest ascent stalled: noise floor reached
      d = g;
      since_restart = 0;
      prev_alpha = 0.0;
      continue;
    }

    const ParameterVector g_new = g1 ? *g1 : gradient(x1);
    double beta = 0.0;
    const double gg = detail::dot(g, g);
    if (++since_restart < static_cast<int>(n)) {
      double num = 0.0;
      for (std::size_t i = 0; i < n; ++i) num += g_new[i] * (g_new[i] - g[i]);
      beta = std::max(0.0, num / gg);
    } else {
      since_restart = 0;
    }
    prev_alpha = alpha;
    prev_slope = slope;
    x = x1;
    fx = f1;
    g = g_new;
    for (std::size_t i = 0; i < n; ++i) d[i] = g[i] + beta * d[i];
  }

  result.point = x;
  result.value = fx;
  result.gradient_norm = std::sqrt(detail::dot(g, g));
  result.iterations = iter;
  if (result.gradient_norm <= settings.tolerance) result.converged = true;
  return result;
}

// ---------------------------------------------------------------------------
// Parameterization of the eight-variable setting space.

inline MeasurementConfig config_from_parameters(const ParameterVector& x) {
  MeasurementConfig config;
  for (std::size_t i = 0; i < 4; ++i) config[i] = {x[i], x[i + 4]};
  return config;
}

inline MeasurementConfig canonical_config(const ParameterVector& x) {
  MeasurementConfig config;
  for (std::size_t i = 0; i < 4; ++i) config[i] = canonical_setting(x[i], x[i + 4]);
  return config;
}

inline ParameterVector parameters_from_config(const MeasurementConfig& config) {
  ParameterVector x;
  for (std::size_t i = 0; i < 4; ++i) {
    x[i] = config[i].phi;
    x[i + 4] = config[i].nu;
  }
  return x;
}

inline double q_objective(const SchmidtState& state, const ParameterVector& x) {
  return detail::violation_terms(state, config_from_parameters(x)).q;
}

/// eta_crit where Q > 0; 1 + |Q| elsewhere, which meets eta_crit continuously
/// at Q = 0 and slopes toward the violating region.
inline double penalized_eta(const SchmidtState& state, const ParameterVector& x) {
  const ViolationReport r = detail::violation_terms(state, config_from_parameters(x));
  return r.eta_crit ? *r.eta_crit : 1.0 + std::abs(r.q);
}

inline ParameterVector random_start(StreamRng& rng) {
  ParameterVector x;
  for (std::size_t i = 0; i < 4; ++i) x[i] = rng.uniform(0.0, std::numbers::pi);
  for (std::size_t i = 4; i < 8; ++i) x[i] = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return x;
}

namespace detail {

/// Runs cg_maximize from every start; returns the best result, ties going to
/// the lowest start index so the outcome does not depend on scheduling.
template <class Fn>
CgResult best_of_multistart(Fn&& objective, const std::vector<ParameterVector>& starts,
                            const OptimizerSettings& settings) {
  std::vector<CgResult> results(starts.size());
  parallel_for(starts.size(), [&](std::size_t i) { results[i] = cg_maximize(objective, starts[i], settings); });
  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (results[i].value > results[best].value) best = i;
  }
  return results[best];
}

inline std::vector<ParameterVector> uniform_starts(const OptimizerSettings& settings, std::uint64_t stream) {
  StreamRng rng(settings.seed, stream);
  std::vector<ParameterVector> starts(settings.sample_count);
  for (auto& s : starts) s = random_start(rng);
  return starts;
}

inline OptimumRecord make_record(const SchmidtState& state, const MeasurementConfig& config, Objective objective,
                                 std::optional<ExponentQuad> k = std::nullopt) {
  OptimumRecord record;
  record.ratio = state.ratio();
  record.config = config;
  record.k = k;
  record.report = ch_q(state, config);
  record.objective = objective;
  return record;
}

}  // namespace detail

/// Largest Q over all settings for this state (uniform multistart CG).
/// `stream` selects an independent random sequence, e.g. the ratio index of a sweep.
inline OptimumRecord max_violation(const SchmidtState& state, const OptimizerSettings& settings,
                                   std::uint64_t stream = 0) {
  settings.validate();
  detail::require_nondegenerate(state);
  const auto starts = detail::uniform_starts(settings, stream);
  const CgResult best =
      detail::best_of_multistart([&](const ParameterVector& x) { return q_objective(state, x); }, starts, settings);
  return detail::make_record(state, canonical_config(best.point), Objective::MaxQ);
}

/// Smallest eta_crit over all settings for this state.
inline OptimumRecord min_eta(const SchmidtState& state, const OptimizerSettings& settings, std::uint64_t stream = 0) {
  settings.validate();
  detail::require_nondegenerate(state);
  const auto starts = detail::uniform_starts(settings, stream);
  const CgResult best = detail::best_of_multistart(
      [&](const ParameterVector& x) { return -penalized_eta(state, x); }, starts, settings);
  OptimumRecord record = detail::make_record(state, canonical_config(best.point), Objective::MinEta);
  if (!record.report.eta_crit) {
    throw Error(ErrorCode::NoViolationFound, "no start reached a violating configuration");
  }
  return record;
}

// ---------------------------------------------------------------------------
// Exponent search.

namespace detail {

/// Precomputed generalized Hardy weights for k = 1..kmax with a fast
/// phase-free evaluation of (eta_crit, Q) for any quad.
class HardyTable {
 public:
  HardyTable(const SchmidtState& state, int kmax) : alpha_(state.alpha()), beta_(state.beta()) {
    const double ratio = state.ratio();
    sin_.resize(static_cast<std::size_t>(kmax) + 1);
    cos_.resize(static_cast<std::size_t>(kmax) + 1);
    for (int k = 1; k <= kmax; ++k) {
      const auto [s, c] = hardy_weights(ratio, k);
      sin_[static_cast<std::size_t>(k)] = s;
      cos_[static_cast<std::size_t>(k)] = c;
    }
  }

  struct Score {
    double eta = std::numeric_limits<double>::infinity();  // +inf when undefined
    double q = 0.0;
  };

  Score score(const std::array<int, 4>& k) const {
    const double s1 = sin_[idx(k[0])], c1 = -cos_[idx(k[0])];
    const double s2 = sin_[idx(k[1])], c2 = cos_[idx(k[1])];
    const double s3 = sin_[idx(k[2])], c3 = -cos_[idx(k[2])];
    const double s4 = sin_[idx(k[3])], c4 = cos_[idx(k[3])];
    const double a = alpha_, b = beta_;
    const double p23 = sq(a * s2 * s3 + b * c2 * c3);
    const double p1t3 = sq(a * c1 * s3 - b * s1 * c3);
    const double p14 = sq(a * s1 * s4 + b * c1 * c4);
    const double p2t4 = sq(a * s2 * c4 - b * c2 * s4);
    const double m2 = a * a * s2 * s2 + b * b * c2 * c2;
    const double m3 = a * a * s3 * s3 + b * b * c3 * c3;
    Score out;
    out.q = p23 - p1t3 - p14 - p2t4;
    if (out.q > 0.0) out.eta = (m2 + m3) / (out.q + m2 + m3);
    return out;
  }

 private:
  static double sq(double x) { return x * x; }
  static std::size_t idx(int k) { return static_cast<std::size_t>(k); }

  double alpha_;
  double beta_;
  std::vector<double> sin_;
  std::vector<double> cos_;
};

struct QuadScore {
  std::array<int, 4> k{1, 1, 1, 1};
  HardyTable::Score score;
};

/// Lower eta_crit wins, then higher Q, then the lexicographically smaller quad.
inline bool better(const QuadScore& a, const QuadScore& b) {
  if (a.score.eta != b.score.eta) return a.score.eta < b.score.eta;
  if (a.score.q != b.score.q) return a.score.q > b.score.q;
  return a.k < b.k;
}

inline QuadScore coarse_search(const HardyTable& table, int kmax) {
  QuadScore best{{1, 1, 1, 1}, table.score({1, 1, 1, 1})};
  std::array<int, 4> k{};
  for (k[0] = 1; k[0] <= kmax; ++k[0])
    for (k[1] = 1; k[1] <= kmax; ++k[1])
      for (k[2] = 1; k[2] <= kmax; ++k[2])
        for (k[3] = 1; k[3] <= kmax; ++k[3]) {
          const QuadScore candidate{k, table.score(k)};
          if (better(candidate, best)) best = candidate;
        }
  return best;
}

/// One coordinate: grow the step by doubling while moves keep improving,
/// then halve it back down to 1, trying both directions at each size.
inline bool refine_coordinate(const HardyTable& table, QuadScore& current, std::size_t i, int kmax) {
  bool moved = false;
  auto attempt = [&](int value) {
    if (value < 1 || value > kmax || value == current.k[i]) return false;
    QuadScore candidate = current;
    candidate.k[i] = value;
    candidate.score = table.score(candidate.k);
    if (!better(candidate, current)) return false;
    current = candidate;
    moved = true;
    return true;
  };

  int step = 1;
  for (int dir : {+1, -1}) {
    step = 1;
    while (attempt(std::clamp(current.k[i] + dir * step, 1, kmax))) step *= 2;
    if (moved) break;
  }
  for (step = std::max(1, step / 2); step >= 1; step /= 2) {
    while (attempt(current.k[i] + step) || attempt(current.k[i] - step)) {
    }
  }
  return moved;
}

inline QuadScore refine_search(const HardyTable& table, QuadScore start, const SearchSettings& search) {
  for (int round = 0; round < search.refine_rounds; ++round) {
    bool moved = false;
    for (std::size_t i = 0; i < 4; ++i) moved = refine_coordinate(table, start, i, search.full_kmax) || moved;
    if (!moved) break;
  }
  return start;
}

}  // namespace detail

/// Stage 1 only: exhaustive enumeration of [1, kmax]^4.
inline OptimumRecord k_search_coarse(const SchmidtState& state, int kmax) {
  detail::require_nondegenerate(state);
  if (kmax < 1 || kmax > kDefaultExponentCeiling) throw Error(ErrorCode::InvalidArgument, "kmax out of range");
  const detail::HardyTable table(state, kmax);
  const detail::QuadScore best = detail::coarse_search(table, kmax);
  const ExponentQuad quad(best.k[0], best.k[1], best.k[2], best.k[3]);
  return detail::make_record(state, k_config(state, quad), Objective::MinEta, quad);
}

/// Quad minimizing eta_crit: exhaustive over [1, coarse_kmax]^4, then
/// coordinate-wise refinement up to full_kmax.
inline OptimumRecord k_search(const SchmidtState& state, const SearchSettings& search = {}) {
  search.validate();
  detail::require_nondegenerate(state);
  const detail::HardyTable table(state, search.full_kmax);
  const detail::QuadScore coarse = detail::coarse_search(table, search.coarse_kmax);
  const detail::QuadScore best = detail::refine_search(table, coarse, search);
  const ExponentQuad quad(best.k[0], best.k[1], best.k[2], best.k[3]);
  return detail::make_record(state, k_config(state, quad), Objective::MinEta, quad);
}

// ---------------------------------------------------------------------------
// Sweeps.

struct Strategy {
  enum class Kind { Hardy, Nm, K, KSearch, MaxQ, MinEta };

  Kind kind = Kind::Hardy;
  int n = 0;
  int m = 0;
  std::optional<ExponentQuad> quad;

  static Strategy hardy() { return {Kind::Hardy, 0, 0, std::nullopt}; }
  static Strategy nm(int n, int m) { return {Kind::Nm, n, m, std::nullopt}; }
  static Strategy k(const ExponentQuad& q) { return {Kind::K, 0, 0, q}; }
  static Strategy ksearch() { return {Kind::KSearch, 0, 0, std::nullopt}; }
  static Strategy maxq() { return {Kind::MaxQ, 0, 0, std::nullopt}; }
  static Strategy mineta() { return {Kind::MinEta, 0, 0, std::nullopt}; }

  std::string name() const {
    switch (kind) {
      case Kind::Hardy: return "hardy";
      case Kind::Nm: return "nm(" + std::to_string(n) + "," + std::to_string(m) + ")";
      case Kind::K: {
        const auto& v = quad->values();
        return "k(" + std::to_string(v[0]) + "," + std::to_string(v[1]) + "," + std::to_string(v[2]) + "," +
               std::to_string(v[3]) + ")";
      }
      case Kind::KSearch: return "ksearch";
      case Kind::MaxQ: return "maxq";
      case Kind::MinEta: return "mineta";
    }
    return "?";
  }
};

inline OptimumRecord evaluate_strategy(const SchmidtState& state, const Strategy& strategy,
                                       const OptimizerSettings& settings, const SearchSettings& search,
                                       std::uint64_t stream) {
  using Kind = Strategy::Kind;
  switch (strategy.kind) {
    case Kind::Hardy: return detail::make_record(state, hardy_config(state), Objective::Fixed);
    case Kind::Nm:
      return detail::make_record(state, nm_config(state, strategy.n, strategy.m), Objective::Fixed,
                                 ExponentQuad(strategy.n, strategy.m, strategy.m, strategy.n));
    case Kind::K: return detail::make_record(state, k_config(state, *strategy.quad), Objective::Fixed, strategy.quad);
    case Kind::KSearch: return k_search(state, search);
    case Kind::MaxQ: return max_violation(state, settings, stream);
    case Kind::MinEta: return min_eta(state, settings, stream);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown strategy");
}

/// One record per ratio, in input order. Ratio i uses random stream i.
inline std::vector<OptimumRecord> sweep(const std::vector<double>& ratios, const Strategy& strategy,
                                        const OptimizerSettings& settings, const SearchSettings& search = {}) {
  for (double r : ratios) {
    if (!(r > 0.0 && r <= 1.0)) throw Error(ErrorCode::InvalidArgument, "sweep ratios must lie in (0, 1]");
  }
  std::vector<OptimumRecord> records(ratios.size());
  parallel_for(ratios.size(), [&](std::size_t i) {
    records[i] = evaluate_strategy(make_state(ratios[i]), strategy, settings, search, i);
    records[i].ratio = ratios[i];
  });
  return records;
}

/// start:stop:count grid, endpoints included.
inline std::vector<double> ratio_grid(double start, double stop, std::size_t count) {
  if (count == 0) throw Error(ErrorCode::InvalidArgument, "grid needs at least one point");
  std::vector<double> grid(count);
  if (count == 1) return {start};
  // Each half is measured from its nearer endpoint, so both endpoints are exact.
  const double span = stop - start;
  const double last = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const double steps = static_cast<double>(i);
    grid[i] = 2 * i < count ? start + span * steps / last : stop - span * (last - steps) / last;
  }
  return grid;
}

}  // namespace chopt
