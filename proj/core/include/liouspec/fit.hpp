// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace liouspec {

/// y ≈ prefactor * x^exponent, least squares in log-log.
struct PowerFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double r2 = 0.0;
  int points = 0;
};

/// Needs at least two points with x, y > 0.
PowerFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace liouspec
