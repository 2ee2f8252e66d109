#pragma once

namespace dea {

/// Shared numeric thresholds. One record so that every "equals 1" / "equals 0"
/// decision in the library is driven by the same numbers.
struct Tolerances {
  /// Maximum row violation accepted for an optimal LP point.
  double feasibility = 1e-8;
  /// Maximum |primal - dual| objective gap accepted for an optimal LP.
  double duality_gap = 1e-7;
  /// Threshold for efficiency == 1, eta* == 0, sign of xi/psi, etc.
  double classification = 1e-6;
};

}  // namespace dea
