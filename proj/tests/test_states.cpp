#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "chopt/reference_table.hpp"
#include "chopt/states.hpp"

using namespace chopt;

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

/// Solves alpha / sqrt(1 - alpha^2) = ratio by bisection, independent of make_state.
double alpha_by_bisection(double ratio) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid / std::sqrt(1.0 - mid * mid) < ratio ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double sin_of(const MeasurementSetting& s) { return std::sin(s.phi); }
double cos_of(const MeasurementSetting& s) { return std::cos(s.phi); }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected chopt::Error";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(MakeState, MaximallyEntangled) {
  const auto s = make_state(1.0);
  EXPECT_NEAR(s.alpha(), kInvSqrt2, 1e-15);
  EXPECT_NEAR(s.beta(), kInvSqrt2, 1e-15);
}

TEST(MakeState, MatchesBisectionOracle) {
  const auto s = make_state(0.46);
  EXPECT_NEAR(s.alpha(), 0.41791, 1e-4);
  EXPECT_NEAR(s.beta(), 0.90849, 1e-4);
  for (double r : {1e-6, 0.01, 0.2, 0.46, 0.74, 0.99, 1.0, 3.5}) {
    const auto st = make_state(r);
    EXPECT_NEAR(st.alpha(), alpha_by_bisection(r), 1e-12) << r;
    EXPECT_NEAR(st.alpha() * st.alpha() + st.beta() * st.beta(), 1.0, 1e-12);
    EXPECT_NEAR(st.ratio(), r, 1e-14 * r);
  }
}

TEST(MakeState, ProductLimit) {
  const auto s = make_state(1e-12);
  EXPECT_LT(s.alpha(), 1e-11);
  EXPECT_NEAR(s.beta(), 1.0, 1e-15);
}

TEST(MakeState, RejectsBadRatios) {
  for (double r : {0.0, -1.0, std::nan(""), std::numeric_limits<double>::infinity()}) {
    EXPECT_EQ(code_of([&] { make_state(r); }), ErrorCode::NonPositiveRatio) << r;
  }
}

TEST(SchmidtState, DegenerateRatioThrows) {
  const auto s = SchmidtState::from_amplitudes(1.0, 0.0);
  EXPECT_TRUE(s.degenerate());
  EXPECT_EQ(code_of([&] { (void)s.ratio(); }), ErrorCode::DegenerateState);
  EXPECT_EQ(code_of([] { SchmidtState::from_amplitudes(0.5, 0.5); }), ErrorCode::InvalidArgument);
}

TEST(BasisVectors, Examples) {
  auto b = basis_vectors({std::numbers::pi / 2, 0.0});
  EXPECT_NEAR(std::abs(b.v[0] - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(b.v[1]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(b.u[0]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(b.u[1] + 1.0), 0.0, 1e-15);

  b = basis_vectors({0.0, 0.0});
  EXPECT_NEAR(std::abs(b.v[1] - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(b.u[0] - 1.0), 0.0, 1e-15);

  b = basis_vectors({std::numbers::pi / 4, std::numbers::pi});
  EXPECT_NEAR(std::abs(b.v[0] - kInvSqrt2), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(b.v[1] + kInvSqrt2), 0.0, 1e-15);
}

TEST(BasisVectors, OrthonormalAndComplete) {
  for (int i = 0; i < 50; ++i) {
    const MeasurementSetting s{0.0628 * i, 0.1256 * i};
    const auto [v, u] = basis_vectors(s);
    const auto inner = std::conj(u[0]) * v[0] + std::conj(u[1]) * v[1];
    EXPECT_LT(std::abs(inner), 1e-14);
    EXPECT_NEAR(std::norm(v[0]) + std::norm(v[1]), 1.0, 1e-14);
    EXPECT_NEAR(std::norm(u[0]) + std::norm(u[1]), 1.0, 1e-14);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        const auto entry = v[r] * std::conj(v[c]) + u[r] * std::conj(u[c]);
        EXPECT_LT(std::abs(entry - (r == c ? 1.0 : 0.0)), 1e-13);
      }
  }
}

TEST(CanonicalSetting, PreservesSignedComponents) {
  const auto s = setting_from_components(0.6, -0.8);
  EXPECT_GE(s.phi, 0.0);
  EXPECT_LT(s.phi, std::numbers::pi);
  EXPECT_NEAR(std::sin(s.phi), 0.6, 1e-15);
  EXPECT_NEAR(std::cos(s.phi), -0.8, 1e-15);
  const auto c = canonical_setting(-1.0, -1.0);
  EXPECT_GE(c.phi, 0.0);
  EXPECT_LT(c.phi, std::numbers::pi);
  EXPECT_GE(c.nu, 0.0);
  EXPECT_LT(c.nu, 2 * std::numbers::pi);
}

TEST(ExponentQuad, Bounds) {
  EXPECT_EQ(code_of([] { ExponentQuad(0, 1, 1, 1); }), ErrorCode::InvalidExponents);
  EXPECT_EQ(code_of([] { ExponentQuad(1, 1, 1, 1025); }), ErrorCode::InvalidExponents);
  EXPECT_EQ(code_of([] { ExponentQuad(1, 9, 1, 1, 8); }), ErrorCode::InvalidExponents);
  EXPECT_NO_THROW(ExponentQuad(1, 1024, 1, 1));
}

TEST(HardyConfig, MaximallyEntangledHasEqualWeights) {
  const auto c = hardy_config(make_state(1.0));
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(sin_of(c[i]), kInvSqrt2, 1e-15);
    EXPECT_NEAR(std::abs(cos_of(c[i])), kInvSqrt2, 1e-15);
    EXPECT_EQ(c[i].nu, 0.0);
  }
}

TEST(HardyConfig, SignPattern) {
  const auto c = hardy_config(make_state(0.46));
  EXPECT_LT(cos_of(c[0]), 0.0);
  EXPECT_GT(cos_of(c[1]), 0.0);
  EXPECT_LT(cos_of(c[2]), 0.0);
  EXPECT_GT(cos_of(c[3]), 0.0);
}

TEST(HardyConfig, EqualsK1331OnGrid) {
  for (int i = 1; i <= 100; ++i) {
    const auto st = make_state(0.01 * i);
    const auto h = hardy_config(st);
    const auto k = k_config(st, ExponentQuad(1, 3, 3, 1));
    for (std::size_t j = 0; j < 4; ++j) {
      const auto a = basis_vectors(h[j]).v, b = basis_vectors(k[j]).v;
      EXPECT_LT(std::abs(a[0] - b[0]) + std::abs(a[1] - b[1]), 1e-12) << i << ' ' << j;
    }
  }
}

TEST(HardyConfig, DegenerateRejected) {
  const auto st = SchmidtState::from_amplitudes(0.0, 1.0);
  EXPECT_EQ(code_of([&] { hardy_config(st); }), ErrorCode::DegenerateState);
  EXPECT_EQ(code_of([&] { k_config(st, ExponentQuad(1, 1, 1, 1)); }), ErrorCode::DegenerateState);
}

TEST(NmConfig, EqualsKConfigAndHardy) {
  const auto st = make_state(0.37);
  EXPECT_EQ(nm_config(st, 3, 10), k_config(st, ExponentQuad(3, 10, 10, 3)));
  EXPECT_EQ(nm_config(st, 1, 3), hardy_config(st));
  const auto c = nm_config(st, 3, 10);
  EXPECT_NEAR(cos_of(c[0]), -cos_of(c[3]), 1e-15);
  EXPECT_NEAR(cos_of(c[1]), -cos_of(c[2]), 1e-15);
  EXPECT_GT(cos_of(c[1]), 0.0);
}

TEST(NmConfig, Errors) {
  EXPECT_EQ(code_of([] { nm_config(make_state(0.5), 4, 4); }), ErrorCode::InvalidExponents);
  for (const auto& s : nm_config(make_state(1.0), 2, 7).settings) EXPECT_NEAR(std::sin(s.phi), kInvSqrt2, 1e-15);
}

TEST(KConfig, TableRowsToTwoDecimals) {
  auto sines = [](double ratio, ExponentQuad k) {
    std::array<double, 4> out{};
    const auto c = k_config(make_state(ratio), k);
    for (std::size_t i = 0; i < 4; ++i) out[i] = truncate_two_decimals(std::sin(c[i].phi));
    return out;
  };
  EXPECT_EQ(sines(0.20, {1, 4, 4, 1}), (std::array<double, 4>{0.91, 0.99, 0.99, 0.91}));
  EXPECT_EQ(sines(0.99, {11, 1024, 200, 167}), (std::array<double, 4>{0.72, 0.99, 0.93, 0.91}));
  for (const auto& row : reference_exponent_table()) EXPECT_EQ(sines(row.ratio, row.k), row.sin_phi) << row.ratio;
}

TEST(KConfig, StableAtLargeExponents) {
  // Direct beta^{k/2} / sqrt(alpha^k + beta^k) in long double as the oracle.
  const auto st = make_state(0.3);
  const auto c = k_config(st, ExponentQuad(1024, 700, 513, 2));
  const std::array<int, 4> ks{1024, 700, 513, 2};
  for (std::size_t i = 0; i < 4; ++i) {
    const long double a = st.alpha(), b = st.beta();
    const long double oracle = std::pow(b, ks[i] / 2.0L) / std::sqrt(std::pow(a, (long double)ks[i]) + std::pow(b, (long double)ks[i]));
    EXPECT_NEAR(std::sin(c[i].phi), static_cast<double>(oracle), 1e-14);
    EXPECT_TRUE(std::isfinite(c[i].phi));
  }
  const auto big = k_config(make_state(1e-3), ExponentQuad(1024, 1024, 1024, 1024));
  for (const auto& s : big.settings) EXPECT_NEAR(std::sin(s.phi), 1.0, 1e-15);
}

TEST(KConfig, WeightsMonotoneWithLimitOne) {
  for (double r : {0.05, 0.5, 0.9}) {
    double previous = 0.0;
    for (int k = 1; k <= 1024; ++k) {
      const double s = hardy_weights(r, k).first;
      EXPECT_GE(s, previous);
      previous = s;
    }
    EXPECT_NEAR(previous, 1.0, 1e-12);
  }
}

TEST(KConfig, RatioAboveOneUsesInverseForm) {
  const auto [s, c] = hardy_weights(4.0, 3);
  EXPECT_NEAR(s, 1.0 / std::sqrt(1.0 + 64.0), 1e-15);
  EXPECT_NEAR(c, 8.0 / std::sqrt(1.0 + 64.0), 1e-15);
}
