// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

namespace liouspec {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
  double integrate(const std::function<double(double)>& f) const;
  /// Concatenate two rules (disjoint supports assumed).
  QuadratureRule& append(const QuadratureRule& other);
};

/// n-point Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(int n);
QuadratureRule gauss_legendre(int n, double a, double b);

/// Gauss-Legendre panels between consecutive breakpoints.
QuadratureRule composite_gauss_legendre(const std::vector<double>& breaks, int per_panel);
/// `panels` equal panels on [a, b].
QuadratureRule composite_gauss_legendre(double a, double b, int panels, int per_panel);

/// Rule on (0, inf): u = scale * atanh(t), t Gauss-Legendre on (0, 1).
QuadratureRule tanh_half_line(int n, double scale = 1.0);

/// Rule on (0, umax]: u = umax * s^power, s Gauss-Legendre on (0, 1).
/// power = 1 is plain Gauss-Legendre; power > 1 clusters nodes at 0.
QuadratureRule graded_half_line(int n, double umax, double power = 1.0);

struct SpherePoint {
  double cos_theta = 1.0;
  double phi = 0.0;
  double weight = 0.0;
};

/// Product rule on S^2: Gauss-Legendre in cos(theta) times uniform phi. Weights sum to 4 pi.
std::vector<SpherePoint> product_sphere_rule(int n_cos, int n_phi);

/// The single-node rule carrying the full solid angle.
std::vector<SpherePoint> isotropic_sphere_rule();

}  // namespace liouspec
