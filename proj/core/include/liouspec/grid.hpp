// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "liouspec/quadrature.hpp"

namespace liouspec {

struct GridSpec {
  double u_max = 3.5;
  int n_u = 24;          // signed nodes, half of them positive
  double grading = 1.0;  // u = u_max s^grading on the positive half-line
  int n_angular = 0;     // 0 or 1: isotropic fast path; k > 1: k x 2k product rule
};

struct Mode {
  int reservoir = 0;
  int u_index = 0;
  int angular_index = 0;
  double u = 0.0;
  double weight = 0.0;  // u-weight times angular weight
};

/// Discretized glued one-particle space X × {1, 2}.
struct GluedGrid {
  GridSpec spec;
  std::vector<double> u;         // ascending, symmetric, zero excluded
  std::vector<double> u_weight;  // positive
  std::vector<SpherePoint> angular;
  bool isotropic = true;
  std::vector<Mode> modes;  // reservoir-major, then u, then angle
  std::string id;

  int mode_count() const { return static_cast<int>(modes.size()); }
  /// Positive nodes and their weights.
  QuadratureRule positive_rule() const;
};

GluedGrid make_grid(const GridSpec& spec);

/// Grid with the same layout over an arbitrary positive half-line rule.
GluedGrid make_grid(const QuadratureRule& positive, int n_angular = 0, const std::string& id = "custom");

}  // namespace liouspec
