#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "chopt/states.hpp"

namespace chopt {

/// Published optimal exponent quads with their sin(phi) values. The sines are
/// listed to two decimals, truncated rather than rounded.
struct ReferenceRow {
  double ratio;
  ExponentQuad k;
  std::array<double, 4> sin_phi;
};

inline const std::vector<ReferenceRow>& reference_exponent_table() {
  static const std::vector<ReferenceRow> rows{
      {0.20, ExponentQuad(1, 4, 4, 1), {0.91, 0.99, 0.99, 0.91}},
      {0.39, ExponentQuad(1, 6, 4, 2), {0.84, 0.99, 0.98, 0.93}},
      {0.61, ExponentQuad(2, 8, 8, 2), {0.85, 0.99, 0.99, 0.85}},
      {0.80, ExponentQuad(4, 15, 16, 4), {0.84, 0.98, 0.98, 0.84}},
      {0.90, ExponentQuad(4, 46, 23, 12), {0.77, 0.99, 0.95, 0.88}},
      {0.95, ExponentQuad(3, 133, 39, 31), {0.73, 0.99, 0.93, 0.91}},
      {0.99, ExponentQuad(11, 1024, 200, 167), {0.72, 0.99, 0.93, 0.91}},
  };
  return rows;
}

/// Two-decimal truncation as used in the table, guarded against values like
/// 0.8499999999 that are 0.85 up to roundoff.
inline double truncate_two_decimals(double x) { return std::floor(x * 100.0 + 1e-9) / 100.0; }

}  // namespace chopt
