#pragma once

// Detection probabilities, the CH operator, and the efficiency threshold.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <optional>
#include <string>

#include "chopt/error.hpp"
#include "chopt/states.hpp"

namespace chopt {

/// The four joint terms of the CH combination, the two marginals that enter
/// the efficiency correction, and the resulting threshold.
struct ViolationReport {
  double p23 = 0.0;   // P(phi2, phi3)
  double p1t3 = 0.0;  // P(~phi1, phi3)
  double p14 = 0.0;   // P(phi1, phi4)
  double p2t4 = 0.0;  // P(phi2, ~phi4)
  double m2 = 0.0;    // P(phi2)
  double m3 = 0.0;    // P(phi3)
  double q = 0.0;
  double q_operator = 0.0;        // <Psi|I_CH|Psi>, the independent route to q
  std::optional<double> eta_crit;  // empty when q <= 0
};

/// Reduced density operator diag(alpha^2, beta^2) of either particle.
struct ReducedState {
  double plus = 0.0;
  double minus = 0.0;

  double trace() const noexcept { return plus + minus; }
  double expectation(const Amplitudes& w) const noexcept { return plus * std::norm(w[0]) + minus * std::norm(w[1]); }
};

inline ReducedState reduced_state(const SchmidtState& state) {
  return {state.alpha() * state.alpha(), state.beta() * state.beta()};
}

namespace detail {

inline std::complex<double> overlap(const SchmidtState& state, const Amplitudes& a, const Amplitudes& b) {
  return state.alpha() * std::conj(a[0]) * std::conj(b[0]) + state.beta() * std::conj(a[1]) * std::conj(b[1]);
}

inline const Amplitudes& pick(const BasisPair& pair, bool flip) { return flip ? pair.u : pair.v; }

/// Eberhard threshold from its ingredients; empty for non-violating terms.
inline std::optional<double> threshold_from_terms(double q, double m2, double m3) {
  if (!(q > 0.0)) return std::nullopt;
  return (m2 + m3) / (q + m2 + m3);
}

/// Probability-route evaluation shared by ch_q and the optimizer objectives.
inline ViolationReport violation_terms(const SchmidtState& state, const MeasurementConfig& config) {
  const BasisPair b1 = basis_vectors(config[0]);
  const BasisPair b2 = basis_vectors(config[1]);
  const BasisPair b3 = basis_vectors(config[2]);
  const BasisPair b4 = basis_vectors(config[3]);
  ViolationReport r;
  r.p23 = std::norm(overlap(state, b2.v, b3.v));
  r.p1t3 = std::norm(overlap(state, b1.u, b3.v));
  r.p14 = std::norm(overlap(state, b1.v, b4.v));
  r.p2t4 = std::norm(overlap(state, b2.v, b4.u));
  const ReducedState rho = reduced_state(state);
  r.m2 = rho.expectation(b2.v);
  r.m3 = rho.expectation(b3.v);
  r.q = r.p23 - r.p1t3 - r.p14 - r.p2t4;
  r.q_operator = r.q;
  r.eta_crit = threshold_from_terms(r.q, r.m2, r.m3);
  return r;
}

inline Eigen::Matrix2cd projector(const Amplitudes& w) {
  Eigen::Vector2cd x(w[0], w[1]);
  return x * x.adjoint();
}

}  // namespace detail

/// |<w_A (x) w_B|Psi>|^2 with w = v, or u when the flip flag is set.
inline double joint_probability(const SchmidtState& state, const MeasurementSetting& a, bool flip_a,
                                const MeasurementSetting& b, bool flip_b) {
  return std::norm(detail::overlap(state, detail::pick(basis_vectors(a), flip_a), detail::pick(basis_vectors(b), flip_b)));
}

/// alpha^2 sin^2(phi) + beta^2 cos^2(phi); the phase drops out.
inline double marginal_probability(const SchmidtState& state, const MeasurementSetting& setting) {
  const double s = std::sin(setting.phi);
  const double c = std::cos(setting.phi);
  return state.alpha() * state.alpha() * s * s + state.beta() * state.beta() * c * c;
}

/// I_CH = (P2 - P~1) (x) P3 - P1 (x) P4 - P2 (x) P~4 in the product basis
/// (|++>, |+->, |-+>, |-->).
inline Eigen::Matrix4cd ch_operator(const MeasurementConfig& config) {
  const BasisPair b1 = basis_vectors(config[0]);
  const BasisPair b2 = basis_vectors(config[1]);
  const BasisPair b3 = basis_vectors(config[2]);
  const BasisPair b4 = basis_vectors(config[3]);
  using detail::projector;
  const Eigen::Matrix2cd p1 = projector(b1.v), p1t = projector(b1.u);
  const Eigen::Matrix2cd p2 = projector(b2.v);
  const Eigen::Matrix2cd p3 = projector(b3.v);
  const Eigen::Matrix2cd p4 = projector(b4.v), p4t = projector(b4.u);
  Eigen::Matrix4cd op;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          op(2 * i + k, 2 * j + l) = (p2(i, j) - p1t(i, j)) * p3(k, l) - p1(i, j) * p4(k, l) - p2(i, j) * p4t(k, l);
  return op;
}

inline Eigen::Vector4cd state_vector(const SchmidtState& state) {
  return Eigen::Vector4cd(state.alpha(), 0.0, 0.0, state.beta());
}

inline double operator_expectation(const SchmidtState& state, const Eigen::Matrix4cd& op) {
  const Eigen::Vector4cd psi = state_vector(state);
  return (psi.adjoint() * op * psi)(0, 0).real();
}

/// Largest eigenvalue of I_CH: the best any two-qubit state can do with these settings.
inline double ch_operator_max_eigenvalue(const MeasurementConfig& config) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(ch_operator(config), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(3);
}

inline constexpr double kRouteAgreement = 1e-12;

/// Q by joint probabilities and by the assembled operator; the two must agree.
inline ViolationReport ch_q(const SchmidtState& state, const MeasurementConfig& config) {
  ViolationReport report = detail::violation_terms(state, config);
  report.q_operator = operator_expectation(state, ch_operator(config));
  if (std::abs(report.q - report.q_operator) > kRouteAgreement) {
    throw Error(ErrorCode::ConsistencyFailure, "probability and operator routes disagree on Q");
  }
  return report;
}

/// Hardy's fraction (alpha beta (alpha - beta) / (1 - alpha beta))^2.
inline double hardy_fraction(const SchmidtState& state) {
  detail::require_nondegenerate(state);
  const double a = state.alpha();
  const double b = state.beta();
  const double f = a * b * (a - b) / (1.0 - a * b);
  return f * f;
}

/// (P(phi2) + P(phi3)) / (Q + P(phi2) + P(phi3)), or empty when Q <= 0.
inline std::optional<double> eta_crit(const SchmidtState& state, const MeasurementConfig& config) {
  return detail::violation_terms(state, config).eta_crit;
}

/// Q - ((1 - eta) / eta) (P(phi2) + P(phi3)); positive iff the
/// efficiency-corrected inequality is violated.
inline double eberhard_margin(const SchmidtState& state, const MeasurementConfig& config, double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw Error(ErrorCode::InvalidEfficiency, "efficiency must lie in (0, 1], got " + std::to_string(eta));
  }
  const ViolationReport r = detail::violation_terms(state, config);
  return r.q - ((1.0 - eta) / eta) * (r.m2 + r.m3);
}

}  // namespace chopt
