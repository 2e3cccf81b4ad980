// SPDX-License-Identifier: Apache-2.0
#include "liouspec/quadrature.hpp"

#include <cmath>

#include "liouspec/errors.hpp"
#include "liouspec/types.hpp"

namespace liouspec {

double QuadratureRule::integrate(const std::function<double(double)>& f) const {
  double s = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
  return s;
}

QuadratureRule& QuadratureRule::append(const QuadratureRule& other) {
  nodes.insert(nodes.end(), other.nodes.begin(), other.nodes.end());
  weights.insert(weights.end(), other.weights.begin(), other.weights.end());
  return *this;
}

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw PreconditionError("gauss_legendre: n must be positive");
  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

QuadratureRule gauss_legendre(int n, double a, double b) {
  QuadratureRule r = gauss_legendre(n);
  const double h = 0.5 * (b - a), c = 0.5 * (b + a);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = c + h * r.nodes[i];
    r.weights[i] *= h;
  }
  return r;
}

QuadratureRule composite_gauss_legendre(const std::vector<double>& breaks, int per_panel) {
  QuadratureRule out;
  const QuadratureRule ref = gauss_legendre(per_panel);
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double a = breaks[k], b = breaks[k + 1];
    if (!(b > a)) continue;
    const double h = 0.5 * (b - a), c = 0.5 * (b + a);
    for (int i = 0; i < per_panel; ++i) {
      out.nodes.push_back(c + h * ref.nodes[i]);
      out.weights.push_back(h * ref.weights[i]);
    }
  }
  return out;
}

QuadratureRule composite_gauss_legendre(double a, double b, int panels, int per_panel) {
  std::vector<double> br(panels + 1);
  for (int k = 0; k <= panels; ++k) br[k] = a + (b - a) * k / panels;
  return composite_gauss_legendre(br, per_panel);
}

QuadratureRule tanh_half_line(int n, double scale) {
  QuadratureRule t = gauss_legendre(n, 0.0, 1.0);
  QuadratureRule r;
  for (int i = 0; i < n; ++i) {
    const double s = t.nodes[i];
    r.nodes.push_back(scale * std::atanh(s));
    r.weights.push_back(scale * t.weights[i] / (1.0 - s * s));
  }
  return r;
}

QuadratureRule graded_half_line(int n, double umax, double power) {
  if (!(umax > 0.0) || !(power >= 1.0)) throw PreconditionError("graded_half_line: bad parameters");
  QuadratureRule t = gauss_legendre(n, 0.0, 1.0);
  QuadratureRule r;
  for (int i = 0; i < n; ++i) {
    const double s = t.nodes[i];
    r.nodes.push_back(umax * std::pow(s, power));
    r.weights.push_back(umax * power * std::pow(s, power - 1.0) * t.weights[i]);
  }
  return r;
}

std::vector<SpherePoint> product_sphere_rule(int n_cos, int n_phi) {
  if (n_cos < 1 || n_phi < 1) throw PreconditionError("product_sphere_rule: need positive counts");
  const QuadratureRule c = gauss_legendre(n_cos);
  std::vector<SpherePoint> pts;
  pts.reserve(static_cast<std::size_t>(n_cos) * n_phi);
  for (int i = 0; i < n_cos; ++i)
    for (int k = 0; k < n_phi; ++k)
      pts.push_back({c.nodes[i], 2.0 * kPi * (k + 0.5) / n_phi, c.weights[i] * 2.0 * kPi / n_phi});
  return pts;
}

std::vector<SpherePoint> isotropic_sphere_rule() { return {SpherePoint{1.0, 0.0, 4.0 * kPi}}; }

}  // namespace liouspec
