#pragma once

// Schmidt-form two-qubit states and the measurement-basis families built on
// them. Amplitude vectors are expressed in the ordered Schmidt basis (|+>, |->).

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <utility>

#include "chopt/error.hpp"

namespace chopt {

using Amplitudes = std::array<std::complex<double>, 2>;

/// alpha|++> + beta|-->, with alpha, beta >= 0 and alpha^2 + beta^2 = 1.
class SchmidtState {
 public:
  static SchmidtState from_ratio(double ratio) {
    if (!(ratio > 0.0) || !std::isfinite(ratio)) {
      throw Error(ErrorCode::NonPositiveRatio, "ratio must be positive and finite, got " + std::to_string(ratio));
    }
    const double norm = std::hypot(ratio, 1.0);
    return SchmidtState(ratio / norm, 1.0 / norm);
  }

  /// Accepts product states (a zero amplitude); the basis constructors reject them.
  static SchmidtState from_amplitudes(double alpha, double beta) {
    if (!(alpha >= 0.0) || !(beta >= 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
      throw Error(ErrorCode::InvalidArgument, "amplitudes must be finite and nonnegative");
    }
    if (std::abs(alpha * alpha + beta * beta - 1.0) > 1e-12) {
      throw Error(ErrorCode::InvalidArgument, "amplitudes must satisfy alpha^2 + beta^2 = 1");
    }
    return SchmidtState(alpha, beta);
  }

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  bool degenerate() const noexcept { return alpha_ == 0.0 || beta_ == 0.0; }

  double ratio() const {
    if (beta_ == 0.0) throw Error(ErrorCode::DegenerateState, "ratio undefined for beta = 0");
    return alpha_ / beta_;
  }

 private:
  SchmidtState(double alpha, double beta) : alpha_(alpha), beta_(beta) {}

  double alpha_;
  double beta_;
};

inline SchmidtState make_state(double ratio) { return SchmidtState::from_ratio(ratio); }

/// One apparatus orientation. v = sin(phi)|+> + e^{i nu} cos(phi)|->.
struct MeasurementSetting {
  double phi = 0.0;
  double nu = 0.0;

  friend bool operator==(const MeasurementSetting&, const MeasurementSetting&) = default;
};

struct BasisPair {
  Amplitudes v;  // the "click" outcome
  Amplitudes u;  // orthogonal (tilde) outcome
};

inline BasisPair basis_vectors(const MeasurementSetting& setting) {
  const double s = std::sin(setting.phi);
  const double c = std::cos(setting.phi);
  const std::complex<double> phase = std::polar(1.0, setting.nu);
  return {{s, phase * c}, {c, -phase * s}};
}

/// Maps an arbitrary (phi, nu) onto phi in [0, pi), nu in [0, 2 pi). Shifting
/// phi by pi only flips the global sign of both basis vectors.
inline MeasurementSetting canonical_setting(double phi, double nu) {
  constexpr double pi = std::numbers::pi;
  double p = std::fmod(phi, pi);
  if (p < 0.0) p += pi;
  if (p >= pi) p = 0.0;
  double n = std::fmod(nu, 2.0 * pi);
  if (n < 0.0) n += 2.0 * pi;
  if (n >= 2.0 * pi) n = 0.0;
  return {p, n};
}

/// Builds the canonical setting whose v-vector is proportional to
/// (sin_phi, e^{i nu} cos_phi). The pair need not be normalized.
inline MeasurementSetting setting_from_components(double sin_phi, double cos_phi, double nu = 0.0) {
  if (sin_phi < 0.0 || (sin_phi == 0.0 && cos_phi < 0.0)) {
    sin_phi = -sin_phi;
    cos_phi = -cos_phi;
  }
  return canonical_setting(std::atan2(sin_phi, cos_phi), nu);
}

/// Settings 0 and 1 act on particle 1, settings 2 and 3 on particle 2; the
/// CH combination is P(2,3) - P(~1,3) - P(1,4) - P(2,~4) in 1-based labels.
struct MeasurementConfig {
  std::array<MeasurementSetting, 4> settings{};

  const MeasurementSetting& operator[](std::size_t i) const { return settings[i]; }
  MeasurementSetting& operator[](std::size_t i) { return settings[i]; }

  friend bool operator==(const MeasurementConfig&, const MeasurementConfig&) = default;
};

inline constexpr int kDefaultExponentCeiling = 1024;

/// Exponents of the generalized Hardy bases.
class ExponentQuad {
 public:
  ExponentQuad(int k1, int k2, int k3, int k4, int k_max = kDefaultExponentCeiling) : k_{k1, k2, k3, k4} {
    for (int k : k_) {
      if (k < 1 || k > k_max) {
        throw Error(ErrorCode::InvalidExponents,
                    "exponent " + std::to_string(k) + " outside [1, " + std::to_string(k_max) + "]");
      }
    }
  }

  int operator[](std::size_t i) const { return k_[i]; }
  const std::array<int, 4>& values() const noexcept { return k_; }

  friend bool operator==(const ExponentQuad&, const ExponentQuad&) = default;
  friend auto operator<=>(const ExponentQuad&, const ExponentQuad&) = default;

 private:
  std::array<int, 4> k_;
};

namespace detail {

inline void require_nondegenerate(const SchmidtState& state) {
  if (state.degenerate()) throw Error(ErrorCode::DegenerateState, "basis needs alpha > 0 and beta > 0");
}

}  // namespace detail

/// (sin phi, |cos phi|) = (beta^{k/2}, alpha^{k/2}) / sqrt(alpha^k + beta^k),
/// evaluated through ratio^k so that k = 1024 neither underflows nor overflows.
inline std::pair<double, double> hardy_weights(double ratio, int k) {
  if (ratio <= 1.0) {
    const double s = 1.0 / std::sqrt(1.0 + std::pow(ratio, k));
    return {s, std::pow(ratio, 0.5 * k) * s};
  }
  const double inv = 1.0 / ratio;
  const double c = 1.0 / std::sqrt(1.0 + std::pow(inv, k));
  return {std::pow(inv, 0.5 * k) * c, c};
}

/// Generalized Hardy bases: cos(phi) is negative for settings 1 and 3,
/// positive for 2 and 4; all phases zero.
inline MeasurementConfig k_config(const SchmidtState& state, const ExponentQuad& k) {
  detail::require_nondegenerate(state);
  const double ratio = state.ratio();
  MeasurementConfig config;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto [s, c] = hardy_weights(ratio, k[i]);
    const double sign = (i == 0 || i == 2) ? -1.0 : 1.0;
    config[i] = setting_from_components(s, sign * c);
  }
  return config;
}

/// Hardy's original bases, written out directly from alpha^{1/2} and alpha^{3/2}
/// rather than through k_config.
inline MeasurementConfig hardy_config(const SchmidtState& state) {
  detail::require_nondegenerate(state);
  const double a = state.alpha();
  const double b = state.beta();
  const double n1 = std::sqrt(a + b);
  const double n3 = std::sqrt(a * a * a + b * b * b);
  MeasurementConfig config;
  config[0] = setting_from_components(std::sqrt(b) / n1, -std::sqrt(a) / n1);
  config[1] = setting_from_components(b * std::sqrt(b) / n3, a * std::sqrt(a) / n3);
  config[2] = setting_from_components(b * std::sqrt(b) / n3, -a * std::sqrt(a) / n3);
  config[3] = setting_from_components(std::sqrt(b) / n1, std::sqrt(a) / n1);
  return config;
}

/// The symmetric (n, m, m, n) family.
inline MeasurementConfig nm_config(const SchmidtState& state, int n, int m) {
  detail::require_nondegenerate(state);
  if (n == m) throw Error(ErrorCode::InvalidExponents, "n and m must differ");
  return k_config(state, ExponentQuad(n, m, m, n));
}

}  // namespace chopt
