#pragma once

// Closed-form treatment of the efficiency-weighted CH operator
//
//   B = eta^2 (P[a1 b1] + P[a1 b0] + P[a0 b1] - P[a0 b0]) - eta (P[a1] + P[b1])
//
// where a1, b1 project onto the first computational state and a0, b0 are
// obtained by real rotations with cos^2 = 1 - s (Alice) and 1 - t (Bob).
// Everything here is checked against a dense eigensolver in the tests.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "chopt/error.hpp"
#include "chopt/polynomial.hpp"
#include "chopt/states.hpp"

namespace chopt {

struct AnalyticPoint {
  double eta = 1.0;
  double s = 0.0;
  double t = 0.0;

  void validate() const {
    if (!(eta > 0.0 && eta <= 1.0)) throw Error(ErrorCode::InvalidEfficiency, "eta must lie in (0, 1]");
    if (!(s >= 0.0 && s <= 1.0) || !(t >= 0.0 && t <= 1.0)) {
      throw Error(ErrorCode::InvalidArgument, "rotation parameters s, t must lie in [0, 1]");
    }
  }
};

/// lambda1 >= lambda2 >= lambda3 are the cubic roots; lambda4 = eta^2 t - eta
/// belongs to the singlet.
struct EigenSet {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;
  double lambda4 = 0.0;
};

namespace detail {

inline Eigen::Matrix2d rotation(double p) {
  const double c = std::sqrt(1.0 - p);
  const double s = std::sqrt(p);
  Eigen::Matrix2d u;
  u << c, s, -s, c;
  return u;
}

inline Eigen::Matrix4d kron(const Eigen::Matrix2d& a, const Eigen::Matrix2d& b) {
  Eigen::Matrix4d out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

inline void require_efficiency(double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw Error(ErrorCode::InvalidEfficiency, "eta must lie in (0, 1], got " + std::to_string(eta));
  }
}

inline void require_frontier_efficiency(double eta) {
  if (!(eta > 2.0 / 3.0 && eta <= 1.0)) {
    throw Error(ErrorCode::InvalidEfficiency, "eta must lie in (2/3, 1], got " + std::to_string(eta));
  }
}

inline constexpr double kArccosWindow = 1e-12;

/// The trigonometric root formula without range checks on (eta, t).
inline EigenSet trigonometric_roots(double eta, double t) {
  const double e2 = eta * eta;
  const double shift = -eta * (3.0 + (t - 2.0) * eta) / 3.0;
  const double radius = std::sqrt(3.0 - 6.0 * eta + (4.0 + 2.0 * t - 2.0 * t * t) * e2);
  const double numerator =
      eta * (9.0 - 18.0 * eta + 8.0 * e2 - 10.0 * t * t * t * e2 + 3.0 * t * (3.0 - 6.0 * eta + 2.0 * e2) -
             3.0 * t * t * (9.0 - 18.0 * eta + 4.0 * e2));
  const double base = 3.0 - 2.0 * eta * (3.0 + (t - 2.0) * (1.0 + t) * eta);
  const double denominator = std::sqrt(base * base * base);
  double argument = numerator / denominator;
  if (!std::isfinite(argument) || std::abs(argument) > 1.0 + kArccosWindow) {
    throw Error(ErrorCode::ComplexRootRegime, "arccos argument " + std::to_string(argument) + " outside [-1, 1]");
  }
  argument = std::clamp(argument, -1.0, 1.0);
  const double angle = std::acos(argument) / 3.0;
  const double amplitude = 2.0 / 3.0 * eta * radius;
  std::array<double, 3> roots{};
  for (int k = 0; k < 3; ++k) roots[k] = shift + amplitude * std::cos(angle + 2.0 * std::numbers::pi * k / 3.0);
  std::sort(roots.begin(), roots.end(), std::greater<>());
  return {roots[0], roots[1], roots[2], e2 * t - eta};
}

}  // namespace detail

inline Eigen::Matrix4d build_B(const AnalyticPoint& point) {
  point.validate();
  Eigen::Matrix2d p1;
  p1 << 1.0, 0.0, 0.0, 0.0;
  const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
  const Eigen::Matrix2d ua = detail::rotation(point.s);
  const Eigen::Matrix2d ub = detail::rotation(point.t);
  // Both rotations are orthogonal, so U^{-1} = U^T.
  const Eigen::Matrix2d pa0 = ua.transpose() * p1 * ua;
  const Eigen::Matrix2d pb0 = ub.transpose() * p1 * ub;
  using detail::kron;
  const double eta = point.eta;
  return eta * eta * (kron(p1, p1) + kron(p1, pb0) + kron(pa0, p1) - kron(pa0, pb0)) - eta * (kron(p1, id) + kron(id, p1));
}

/// Ascending dense eigenvalues of B; the numeric oracle for everything below.
inline Eigen::Vector4d numeric_eigenvalues(const AnalyticPoint& point) {
  return Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d>(build_B(point), Eigen::EigenvaluesOnly).eigenvalues();
}

/// Characteristic polynomial of B in lambda, general (s, t).
inline Polynomial char_quartic(const AnalyticPoint& point) {
  point.validate();
  const double eta = point.eta, st = point.s * point.t, sum = point.s + point.t;
  const double e2 = eta * eta, e3 = e2 * eta, e5 = e3 * e2;
  return Polynomial({st * e5 * (-st * e3 + sum * eta * (2.0 * eta - 1.0) - 3.0 * eta + 2.0),
                     2.0 * (eta - 1.0) * e3 * (st * (e2 - eta) - 1.0), -e2 * (4.0 * eta - 5.0),
                     -2.0 * eta * (eta - 2.0), 1.0});
}

/// The same polynomial written for s = t.
inline Polynomial symmetric_quartic(double eta, double t) {
  AnalyticPoint{eta, t, t}.validate();
  const double e2 = eta * eta, e3 = e2 * eta, e5 = e3 * e2, t2 = t * t;
  return Polynomial({t2 * e5 * (-t2 * e3 + 2.0 * t * eta * (2.0 * eta - 1.0) - 3.0 * eta + 2.0),
                     2.0 * (eta - 1.0) * e3 * (t2 * (e2 - eta) - 1.0), -e2 * (4.0 * eta - 5.0),
                     -2.0 * eta * (eta - 2.0), 1.0});
}

/// The cubic left after removing the singlet root, scaled by eta^3 to be monic.
inline Polynomial reduced_cubic(double eta, double t) {
  AnalyticPoint{eta, t, t}.validate();
  const double e2 = eta * eta, e3 = e2 * eta, t2 = t * t;
  return Polynomial({e3 * (e3 * t2 * t - 3.0 * e2 * t2 + 2.0 * eta * t2),
                     e2 * (e2 * (t2 - 2.0 * t) + 2.0 * eta * (t - 1.0) + 2.0), eta * (eta * (t - 2.0) + 3.0), 1.0});
}

/// Roots of the reduced cubic by the trigonometric method, plus the singlet eigenvalue.
inline EigenSet reduced_cubic_roots(double eta, double t) {
  AnalyticPoint{eta, t, t}.validate();
  return detail::trigonometric_roots(eta, t);
}

/// lambda at a stationary point of lambda1(t), from implicit differentiation
/// of the cubic. Singular at eta = 1.
inline double stationary_lambda(double eta, double t) {
  if (eta == 1.0) throw Error(ErrorCode::SingularEfficiency, "stationary lambda is singular at eta = 1");
  if (!(eta > 0.0 && eta < 1.0)) throw Error(ErrorCode::InvalidEfficiency, "eta must lie in (0, 1)");
  const double e2 = eta * eta, e3 = e2 * eta;
  return eta / (2.0 * (eta - 1.0) * (eta - 1.0)) * (2.0 * t * t * e3 - 3.0 * t * eta * (2.0 * eta - 1.0) + 3.0 * eta - 2.0);
}

/// Quartic in t whose roots are the stationary rotations.
inline Polynomial optimal_t_quartic(double eta) {
  detail::require_efficiency(eta);
  const double e2 = eta * eta, e4 = e2 * e2, e6 = e4 * e2;
  const double w = (2.0 * eta - 1.0) * (2.0 * eta - 1.0);
  return Polynomial({-(eta - 2.0) * w * (3.0 * eta - 2.0), 2.0 * w * (5.0 * e2 - 16.0 * eta + 8.0),
                     e2 * (4.0 * e4 - 48.0 * e2 * eta + 156.0 * e2 - 132.0 * eta + 33.0),
                     4.0 * e4 * (2.0 * e2 - 10.0 * eta + 5.0), 4.0 * e6});
}

/// Among the real roots of optimal_t_quartic in [0, 1], the one maximizing lambda1.
inline double optimal_t(double eta) {
  detail::require_frontier_efficiency(eta);
  constexpr double edge = 1e-12;
  double best_t = -1.0;
  double best_lambda = -std::numeric_limits<double>::infinity();
  for (double root : real_roots(optimal_t_quartic(eta))) {
    if (root < -edge || root > 1.0 + edge) continue;
    const double t = std::clamp(root, 0.0, 1.0);
    const double lambda = reduced_cubic_roots(eta, t).lambda1;
    if (lambda > best_lambda) {
      best_lambda = lambda;
      best_t = t;
    }
  }
  if (best_t < 0.0) throw Error(ErrorCode::NoPhysicalRoot, "no root of the t-quartic lies in [0, 1]");
  return best_t;
}

struct FrontierPoint {
  double eta = 1.0;
  double t = 0.0;
  double lambda = 0.0;
  SchmidtState state = SchmidtState::from_ratio(1.0);
};

/// Schmidt ratio (smaller over larger singular value) of a two-qubit vector
/// given in the product basis.
inline double schmidt_ratio(const Eigen::Vector4d& v) {
  Eigen::Matrix2d coefficients;
  coefficients << v(0), v(1), v(2), v(3);
  const Eigen::Vector2d sv = Eigen::JacobiSVD<Eigen::Matrix2d>(coefficients).singularValues();
  return sv(1) / sv(0);
}

/// Largest efficiency-corrected violation at eta, the optimal rotation, and
/// the state read off the top eigenvector of B at s = t = t*.
inline FrontierPoint max_violation_for_eta(double eta) {
  const double t = optimal_t(eta);
  FrontierPoint out;
  out.eta = eta;
  out.t = t;
  out.lambda = reduced_cubic_roots(eta, t).lambda1;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(build_B({eta, t, t}));
  out.state = make_state(schmidt_ratio(solver.eigenvectors().col(3)));
  return out;
}

}  // namespace chopt
