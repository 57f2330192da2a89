// Evaluates the named measurement families for one state, then optimizes.

#include <cstdio>

#include "chopt/chopt.hpp"

int main() {
  using namespace chopt;
  const SchmidtState state = make_state(0.74);

  const ViolationReport hardy = ch_q(state, hardy_config(state));
  const ViolationReport nm = ch_q(state, nm_config(state, 3, 10));
  std::printf("ratio 0.74  hardy Q = %.5f  nm(3,10) Q = %.5f  eta_crit = %.5f\n", hardy.q, nm.q, *nm.eta_crit);

  OptimizerSettings settings;
  settings.sample_count = 500;
  const OptimumRecord best_q = max_violation(state, settings);
  const OptimumRecord best_eta = min_eta(state, settings);
  const OptimumRecord best_k = k_search(state);
  std::printf("max Q = %.5f  min eta_crit = %.5f  best quad (%d,%d,%d,%d) eta_crit = %.5f\n", best_q.report.q,
              *best_eta.report.eta_crit, (*best_k.k)[0], (*best_k.k)[1], (*best_k.k)[2], (*best_k.k)[3],
              *best_k.report.eta_crit);

  const FrontierPoint frontier = max_violation_for_eta(0.9);
  std::printf("eta 0.90  lambda1 = %.5f  t* = %.5f  optimal ratio = %.4f\n", frontier.lambda, frontier.t,
              frontier.state.ratio());
}
