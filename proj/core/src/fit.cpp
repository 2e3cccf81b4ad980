// SPDX-License-Identifier: Apache-2.0
#include "liouspec/fit.hpp"

#include <cmath>

#include "liouspec/errors.hpp"

namespace liouspec {

PowerFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw PreconditionError("fit_power_law: need >= 2 paired points");
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw PreconditionError("fit_power_law: values must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw PreconditionError("fit_power_law: abscissae coincide");
  PowerFit f;
  f.exponent = (n * sxy - sx * sy) / den;
  const double c = (sy - f.exponent * sx) / n;
  f.prefactor = std::exp(c);
  double ss_res = 0, ss_tot = 0, my = sy / n;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (c + f.exponent * lx[i]);
    ss_res += r * r;
    ss_tot += (ly[i] - my) * (ly[i] - my);
  }
  f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  f.points = static_cast<int>(n);
  return f;
}

}  // namespace liouspec
