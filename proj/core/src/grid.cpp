// SPDX-License-Identifier: Apache-2.0
#include "liouspec/grid.hpp"

#include <cstdio>

#include "liouspec/errors.hpp"

namespace liouspec {

QuadratureRule GluedGrid::positive_rule() const {
  QuadratureRule r;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u[i] > 0.0) {
      r.nodes.push_back(u[i]);
      r.weights.push_back(u_weight[i]);
    }
  return r;
}

GluedGrid make_grid(const QuadratureRule& positive, int n_angular, const std::string& id) {
  if (positive.size() == 0) throw PreconditionError("make_grid: empty half-line rule");
  GluedGrid g;
  const int h = static_cast<int>(positive.size());
  for (int i = 0; i < h; ++i)
    if (!(positive.nodes[i] > 0.0) || !(positive.weights[i] > 0.0))
      throw PreconditionError("make_grid: half-line nodes and weights must be positive");
  for (int i = h - 1; i >= 0; --i) {
    g.u.push_back(-positive.nodes[i]);
    g.u_weight.push_back(positive.weights[i]);
  }
  for (int i = 0; i < h; ++i) {
    g.u.push_back(positive.nodes[i]);
    g.u_weight.push_back(positive.weights[i]);
  }
  g.isotropic = n_angular <= 1;
  g.angular = g.isotropic ? isotropic_sphere_rule() : product_sphere_rule(n_angular, 2 * n_angular);
  for (int a = 0; a < 2; ++a)
    for (std::size_t i = 0; i < g.u.size(); ++i)
      for (std::size_t s = 0; s < g.angular.size(); ++s)
        g.modes.push_back({a, static_cast<int>(i), static_cast<int>(s), g.u[i], g.u_weight[i] * g.angular[s].weight});
  g.id = id;
  g.spec.n_u = 2 * h;
  g.spec.n_angular = n_angular;
  g.spec.u_max = positive.nodes.back();
  return g;
}

GluedGrid make_grid(const GridSpec& spec) {
  if (spec.n_u < 2 || spec.n_u % 2 != 0) throw PreconditionError("make_grid: n_u must be a positive even number");
  const QuadratureRule half = graded_half_line(spec.n_u / 2, spec.u_max, spec.grading);
  char buf[96];
  std::snprintf(buf, sizeof buf, "gl%d-umax%g-grade%g-ang%d", spec.n_u, spec.u_max, spec.grading, spec.n_angular);
  GluedGrid g = make_grid(half, spec.n_angular, buf);
  g.spec = spec;
  return g;
}

}  // namespace liouspec
