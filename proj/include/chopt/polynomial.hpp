#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "chopt/error.hpp"

namespace chopt {

/// Real polynomial with coefficients stored lowest power first.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coefficients) : c_(std::move(coefficients)) {
    while (c_.size() > 1 && c_.back() == 0.0) c_.pop_back();
  }

  std::size_t degree() const noexcept { return c_.empty() ? 0 : c_.size() - 1; }
  const std::vector<double>& coefficients() const noexcept { return c_; }
  double operator[](std::size_t i) const { return i < c_.size() ? c_[i] : 0.0; }

  double operator()(double x) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return Polynomial({0.0});
    std::vector<double> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = static_cast<double>(i) * c_[i];
    return Polynomial(std::move(d));
  }

  /// Roundoff scale of an evaluation at x: eps * sum |c_i| |x|^i.
  double evaluation_noise(double x) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * std::abs(x) + std::abs(*it);
    return std::numeric_limits<double>::epsilon() * acc;
  }

  /// Residual relative to the coefficient magnitudes, |p(x)| / sum |c_i| |x|^i.
  double scaled_residual(double x) const {
    const double scale = evaluation_noise(x) / std::numeric_limits<double>::epsilon();
    return scale > 0.0 ? std::abs((*this)(x)) / scale : std::abs((*this)(x));
  }

 private:
  std::vector<double> c_;
};

namespace detail {

inline Eigen::VectorXcd companion_eigenvalues(const Polynomial& p) {
  const std::size_t n = p.degree();
  const double lead = p[n];
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 1; i < n; ++i) companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  for (std::size_t i = 0; i < n; ++i) companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n - 1)) = -p[i] / lead;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  return solver.eigenvalues();
}

inline double newton_polish(const Polynomial& p, const Polynomial& dp, double x) {
  for (int i = 0; i < 50; ++i) {
    const double fx = p(x);
    const double dfx = dp(x);
    if (fx == 0.0 || dfx == 0.0) break;
    const double step = fx / dfx;
    const double next = x - step;
    if (std::abs(p(next)) >= std::abs(fx)) break;
    x = next;
  }
  return x;
}

}  // namespace detail

/// Real roots (ascending) from the companion-matrix eigenvalues, each polished
/// by Newton's method. A double root is recovered through the matching root
/// of the derivative, which is simple and therefore well conditioned.
inline std::vector<double> real_roots(const Polynomial& p, double imag_tolerance = 1e-6) {
  if (p.degree() == 0) throw Error(ErrorCode::InvalidArgument, "constant polynomial has no isolated roots");
  const Polynomial dp = p.derivative();
  std::vector<double> candidates;
  for (const auto& z : detail::companion_eigenvalues(p)) {
    if (std::abs(z.imag()) <= imag_tolerance * std::max(1.0, std::abs(z))) {
      candidates.push_back(detail::newton_polish(p, dp, z.real()));
    }
  }
  if (dp.degree() >= 1) {
    const Polynomial ddp = dp.derivative();
    for (const auto& z : detail::companion_eigenvalues(dp)) {
      if (std::abs(z.imag()) > imag_tolerance * std::max(1.0, std::abs(z))) continue;
      const double x = detail::newton_polish(dp, ddp, z.real());
      if (std::abs(p(x)) <= 4.0 * p.evaluation_noise(x)) candidates.push_back(x);
    }
  }
  std::sort(candidates.begin(), candidates.end());

  // Collapse clusters, keeping the member with the smallest residual.
  std::vector<double> roots;
  for (std::size_t i = 0; i < candidates.size();) {
    std::size_t j = i;
    double best = candidates[i];
    while (j < candidates.size() && candidates[j] - candidates[i] <= 1e-6 * std::max(1.0, std::abs(candidates[i]))) {
      if (std::abs(p(candidates[j])) < std::abs(p(best))) best = candidates[j];
      ++j;
    }
    roots.push_back(best);
    i = j;
  }
  return roots;
}

}  // namespace chopt
