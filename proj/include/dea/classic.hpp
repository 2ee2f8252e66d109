#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "dea/dataset.hpp"
#include "dea/tolerances.hpp"

/// Baseline congestion analysis on the convex production possibility set:
/// output-oriented BCC efficiency, the weak-disposability (FGL) and
/// slack-based (CTT) congestion measures, pure technical efficiency under
/// input equalities, and the strong/weak congestion classifier.
namespace dea {

struct BccResult {
  /// Radial output expansion factor, >= 1.
  double theta = 1.0;
  std::vector<double> input_slack;
  std::vector<double> output_slack;
  std::vector<double> lambda;
};

/// Output-oriented BCC envelopment model. Stage 1 maximizes theta; stage 2
/// maximizes the slack sum with theta held at its optimum.
BccResult bcc_output(const Dataset& d, std::size_t dmu, const Tolerances& tol = {});

struct FglResult {
  double beta = 1.0;
  /// beta / theta; 1 means no congestion under this measure.
  double ratio = 1.0;
};

/// Weak-disposability model: inputs scaled by tau in [0, 1].
FglResult fgl_congestion(const Dataset& d, std::size_t dmu, const Tolerances& tol = {});

/// Per-input congestion amounts s_c = s^-* - delta^-* measured at the BCC
/// projection of `bcc`. Each entry lies in [0, s^-*_i].
std::vector<double> ctt_congestion(const Dataset& d, std::size_t dmu, const BccResult& bcc,
                                   const Tolerances& tol = {});

/// Output expansion factor pi* with inputs held as equalities.
double wyts_pte(const Dataset& d, std::size_t dmu, const Tolerances& tol = {});

/// max mu_0 over supporting hyperplanes through DMU `dmu` with u^T y_0 = 1.
/// nullopt when unbounded (the scale-elasticity upper bound is +inf).
/// Throws NumericalError when no hyperplane exists (point below the frontier).
std::optional<double> max_supporting_intercept(const Dataset& d, std::size_t dmu,
                                               const Tolerances& tol = {});

enum class Congestion { None, Weak, Strong };

std::string_view to_string(Congestion c);

struct CongestionReport {
  double theta = 1.0;
  double pi = 1.0;
  /// pi / theta, in (0, 1].
  double phi = 1.0;
  bool congested = false;
  Congestion classification = Congestion::None;
  /// 1 + max intercept, computed only for congested DMUs; +inf when the
  /// intercept LP is unbounded.
  std::optional<double> rho_bar;
  /// True when rho_bar was evaluated at the strong-frontier projection.
  bool projected = false;
  std::optional<FglResult> fgl;
  std::optional<std::vector<double>> ctt;
};

struct ClassifyOptions {
  bool with_fgl = false;
  bool with_ctt = false;
  Tolerances tol{};
};

/// congested <=> phi < 1 - tol. Congested DMUs are then labelled Strong when
/// rho_bar < 0 (evaluated at the strong-frontier projection), else Weak.
CongestionReport classify_congestion(const Dataset& d, std::size_t dmu,
                                     const ClassifyOptions& options = {});

}  // namespace dea
