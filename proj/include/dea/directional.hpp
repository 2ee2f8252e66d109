#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dea/dataset.hpp"
#include "dea/error.hpp"
#include "dea/tolerances.hpp"

/// Directional congestion on the convex production possibility set.
///
/// For a strongly efficient DMU (X0, Y0) and a direction (omega, delta), the
/// right-hand measure xi* compares the activity ((1 + omega t) X0,
/// (1 + delta beta) Y0) reached by a small input expansion t, and the
/// left-hand measure psi* the activity ((1 - omega t) X0, (1 - delta beta) Y0)
/// reached by a contraction. xi* < 0 (psi* < 0) means congestion on that side.
///
/// Two estimators are provided: finite differences with explicit step
/// validation (right_fdm / left_fdm), and the multiplier bounds obtained from
/// the Charnes-Cooper linearization of the scale-elasticity ratio
/// (ulbm_bounds). On a strongly efficient DMU the lower bound equals xi* and
/// the upper bound equals psi*.
namespace dea::directional {

/// Input weights omega (sum m) and output weights delta (sum s).
class Direction {
 public:
  /// Rescales both vectors to the canonical sums. Throws InputError on a
  /// negative or non-finite component or an all-zero vector.
  static Direction normalized(std::vector<double> omega, std::vector<double> delta);
  /// omega = 1, delta = 1.
  static Direction diagonal(std::size_t m, std::size_t s);

  const std::vector<double>& omega() const { return omega_; }
  const std::vector<double>& delta() const { return delta_; }

  bool operator==(const Direction&) const = default;

 private:
  Direction(std::vector<double> omega, std::vector<double> delta)
      : omega_(std::move(omega)), delta_(std::move(delta)) {}

  std::vector<double> omega_;
  std::vector<double> delta_;
};

struct StepConfig {
  double t_initial = 1e-6;
  int halving_limit = 20;
  /// Largest accepted scaled gap (1 - phi*) / t between the DMU and the
  /// supporting hyperplane through the stepped activity.
  double validation_tol = 1e-7;

  void validate() const;
};

/// Components below this are treated as zero by the multiplier-bounds method,
/// which divides by omega and delta.
inline constexpr double kMinUlbmWeight = 1e-9;

enum class Method { Fdm, Ulbm, Both };

/// Procedure steps, for error attribution.
enum class Step { Projection, A0, A1, A2, B0, B1, B2, Ulbm };

std::string_view to_string(Step s);
std::string_view to_string(Method m);

/// A failure inside one step of the directional procedure.
class StepError : public NumericalError {
 public:
  StepError(Step step, const std::string& what);
  Step step() const { return step_; }

 private:
  Step step_;
};

/// Largest total output gain sum(b) over activities with the same inputs:
/// sum lambda X = X0, sum lambda Y >= Y0 + b, sum lambda = 1.
double output_dominance(const Dataset& d, std::size_t dmu, const Tolerances& tol = {});

/// Largest total output gain when inputs may also shrink:
/// sum lambda X = X0 - a, sum lambda Y >= Y0 + b, a, b >= 0. For a strongly
/// efficient DMU a positive value exhibits an activity that uses less of some
/// inputs to make more of some outputs.
double congestion_witness(const Dataset& d, std::size_t dmu, const Tolerances& tol = {});

/// Strong efficiency with respect to the convex PPS: no activity with the
/// same inputs produces more of some output.
bool is_strongly_efficient(const Dataset& d, std::size_t dmu, const Tolerances& tol = {});

struct Projection {
  /// Dataset with the DMU's outputs replaced by the projection.
  Dataset dataset;
  Point point;
  double theta = 1.0;
  std::vector<double> output_slack;
  /// False when the DMU was already strongly efficient.
  bool moved = false;
};

/// Projects onto the strongly efficient frontier keeping inputs fixed:
/// y~ = theta* y + s+*, with theta maximized first and the slack sum second.
Projection project(const Dataset& d, std::size_t dmu, const Tolerances& tol = {});

/// eta* of the input-expansion feasibility model; +inf when the expansion is
/// unbounded (omega only weights zero inputs).
double max_expansion(const Dataset& d, std::size_t dmu, const Direction& dir,
                     const Tolerances& tol = {});
/// eta* of the input-contraction feasibility model.
double max_contraction(const Dataset& d, std::size_t dmu, const Direction& dir,
                       const Tolerances& tol = {});

/// Directional largest scale size: no feasible input expansion along omega.
bool is_dlss(const Dataset& d, std::size_t dmu, const Direction& dir, const Tolerances& tol = {});
/// Directional smallest scale size: no feasible input contraction along omega.
bool is_dsss(const Dataset& d, std::size_t dmu, const Direction& dir, const Tolerances& tol = {});

struct StepCheck {
  bool passed = false;
  /// False when the stepped activity is outside the PPS (step too large).
  bool feasible = false;
  /// Optimal output scaling beta at this step (valid when feasible).
  double beta = 0.0;
  /// Optimum of the shared-hyperplane LP; 1 when both points share a face.
  /// NaN when no hyperplane supports the data at the stepped activity.
  double phi = 0.0;
};

/// Solves the right step model at `t` and checks that the DMU and the stepped
/// activity lie on a common supporting hyperplane.
StepCheck validate_step_right(const Dataset& d, std::size_t dmu, const Direction& dir, double t,
                              const StepConfig& steps = {}, const Tolerances& tol = {});
StepCheck validate_step_left(const Dataset& d, std::size_t dmu, const Direction& dir, double t,
                             const StepConfig& steps = {}, const Tolerances& tol = {});

struct FdmEstimate {
  double value = 0.0;
  /// The validated step the value was computed at.
  double step = 0.0;
};

/// xi* = beta* / t at the first validated step t (t_initial halved on
/// failure). Requires a strongly efficient, non-DLSS DMU. Throws StepError
/// (A1) when no step validates within the halving limit.
FdmEstimate right_fdm(const Dataset& d, std::size_t dmu, const Direction& dir,
                      const StepConfig& steps = {}, const Tolerances& tol = {});
/// psi* = beta* / t, mirror of right_fdm for input contraction.
FdmEstimate left_fdm(const Dataset& d, std::size_t dmu, const Direction& dir,
                     const StepConfig& steps = {}, const Tolerances& tol = {});

struct UlbmBounds {
  /// -inf when the minimization is unbounded (DLSS).
  double lower = 0.0;
  /// +inf when the maximization is unbounded (DSSS).
  double upper = 0.0;
  bool dlss = false;
  bool dsss = false;
};

/// Lower and upper bounds of V^T W X0 / U^T Delta Y0 over supporting
/// hyperplanes through the DMU, solved as a linear program after the
/// Charnes-Cooper change of variables. Throws InputError when some omega or
/// delta component is below kMinUlbmWeight (use the FDM path instead) and
/// StepError (Ulbm) when the DMU has no supporting hyperplane.
UlbmBounds ulbm_bounds(const Dataset& d, std::size_t dmu, const Direction& dir,
                       const Tolerances& tol = {});

struct DirectionalResult {
  std::size_t dmu = 0;
  Direction direction = Direction::diagonal(1, 1);
  Method method = Method::Fdm;
  /// The values describe the strong-frontier projection of the DMU.
  bool projected = false;
  /// Right side has no data (DLSS); left side has no data (DSSS).
  bool dlss = false;
  bool dsss = false;
  /// Finite-difference values; absent on a no-data side or for Ulbm.
  std::optional<double> xi;
  std::optional<double> psi;
  std::optional<double> t_right;
  std::optional<double> t_left;
  /// Multiplier bounds (+/-inf when unbounded); absent for Fdm.
  std::optional<double> rho_lower;
  std::optional<double> rho_upper;
  bool right_congested = false;
  bool left_congested = false;
};

/// Full procedure for one DMU and direction: project if needed, then DLSS
/// check and right value, DSSS check and left value, per `method`.
/// Errors are rethrown as StepError tagged with the failing step.
DirectionalResult analyze(const Dataset& d, std::size_t dmu, const Direction& dir,
                          Method method = Method::Both, const StepConfig& steps = {},
                          const Tolerances& tol = {});

struct SweepRow {
  Direction direction;
  std::optional<DirectionalResult> result;
  /// Set instead of `result` when the direction failed.
  std::string error;
  std::optional<Step> failed_step;
  bool input_error = false;
};

/// analyze() over a grid, order preserving. Per-direction failures are
/// recorded in the row. Throws InputError on an empty grid.
std::vector<SweepRow> sweep(const Dataset& d, std::size_t dmu, const std::vector<Direction>& grid,
                            Method method = Method::Both, const StepConfig& steps = {},
                            const Tolerances& tol = {});

}  // namespace dea::directional
