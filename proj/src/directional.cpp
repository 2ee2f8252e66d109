#include "dea/directional.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "dea/lp.hpp"
#include "model_util.hpp"

namespace dea::directional {

using detail::convexity_row;
using detail::input_row;
using detail::output_row;
using detail::solve_optimal;
using detail::zeros;
using lp::LinearProgram;
using lp::Relation;
using lp::Sense;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> rescale(std::vector<double> v, const char* name) {
  if (v.empty()) throw InputError(std::string(name) + " direction is empty");
  double sum = 0.0;
  for (double c : v) {
    if (!std::isfinite(c) || c < 0) {
      throw InputError(std::string(name) + " direction has a negative or non-finite component");
    }
    sum += c;
  }
  if (sum <= 0) throw InputError(std::string(name) + " direction is all zeros");
  const double scale = static_cast<double>(v.size()) / sum;
  for (double& c : v) c *= scale;
  return v;
}

void check_direction(const Dataset& d, const Direction& dir) {
  if (dir.omega().size() != d.num_inputs() || dir.delta().size() != d.num_outputs()) {
    throw InputError("direction has " + std::to_string(dir.omega().size()) + " input and " +
                     std::to_string(dir.delta().size()) + " output weights, dataset has " +
                     std::to_string(d.num_inputs()) + " inputs and " +
                     std::to_string(d.num_outputs()) + " outputs");
  }
}

/// Largest output scaling at the stepped inputs (1 + sign * omega t) x0.
/// sign = +1 maximizes beta in outputs (1 + delta beta) y0; sign = -1
/// minimizes beta in outputs (1 - delta beta) y0. Both are "best output"
/// problems at the stepped inputs.
lp::LinearProgram step_model(const Dataset& d, std::size_t dmu, const Direction& dir, double t,
                             int sign) {
  const std::size_t n = d.size(), m = d.num_inputs(), s = d.num_outputs();
  const std::size_t beta = n, nv = n + 1;
  LinearProgram prog(sign > 0 ? Sense::Maximize : Sense::Minimize, nv);
  prog.cost[beta] = 1.0;
  prog.domains[beta] = lp::Domain::Free;
  for (std::size_t i = 0; i < m; ++i) {
    prog.add_row(input_row(d, i, nv), Relation::Equal,
                 (1.0 + sign * dir.omega()[i] * t) * d.x(i, dmu));
  }
  for (std::size_t r = 0; r < s; ++r) {
    auto row = output_row(d, r, nv);
    row[beta] = -sign * dir.delta()[r] * d.y(r, dmu);
    prog.add_row(std::move(row), Relation::GreaterEqual, d.y(r, dmu));
  }
  prog.add_row(convexity_row(d, nv), Relation::Equal, 1.0);
  return prog;
}

/// Smallest scaled gap c = (u.dy - v.dx) over hyperplanes that support the
/// data, pass through the stepped activity (x1, y1) = (x0 + t dx, y0 + t dy)
/// and are normalized by u.y0 = 1. The DMU lies on such a hyperplane exactly
/// when c = 0; the shared-hyperplane optimum is then phi = 1 - t c.
///
/// The DMU's own row u.y0 - v.x0 + mu0 <= 0 is replaced by its difference
/// with the contact row, which is the same constraint divided by -t. The two
/// rows differ only by O(t), so keeping both would leave a nearly singular
/// system. Returns NaN when no hyperplane supports the data at (x1, y1).
double scaled_gap(const Dataset& d, std::size_t dmu, const std::vector<double>& x1,
                  const std::vector<double>& y1, const std::vector<double>& dx,
                  const std::vector<double>& dy, const Tolerances& tol) {
  const std::size_t n = d.size(), m = d.num_inputs(), s = d.num_outputs();
  // Columns: u (s, >= 0), v (m, free), mu0 (free).
  const std::size_t mu = s + m, nv = s + m + 1;
  LinearProgram prog(Sense::Minimize, nv);
  for (std::size_t r = 0; r < s; ++r) prog.cost[r] = dy[r];
  for (std::size_t i = 0; i < m; ++i) prog.cost[s + i] = -dx[i];
  for (std::size_t k = s; k < nv; ++k) prog.domains[k] = lp::Domain::Free;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == dmu) continue;
    auto row = zeros(nv);
    for (std::size_t r = 0; r < s; ++r) row[r] = d.y(r, j);
    for (std::size_t i = 0; i < m; ++i) row[s + i] = -d.x(i, j);
    row[mu] = 1.0;
    prog.add_row(std::move(row), Relation::LessEqual, 0.0);
  }
  prog.add_row(prog.cost, Relation::GreaterEqual, 0.0);
  auto norm = zeros(nv);
  for (std::size_t r = 0; r < s; ++r) norm[r] = d.y(r, dmu);
  prog.add_row(std::move(norm), Relation::Equal, 1.0);
  auto contact = zeros(nv);
  for (std::size_t r = 0; r < s; ++r) contact[r] = y1[r];
  for (std::size_t i = 0; i < m; ++i) contact[s + i] = -x1[i];
  contact[mu] = 1.0;
  prog.add_row(std::move(contact), Relation::Equal, 0.0);

  auto sol = lp::solve(prog, lp::SolverOptions::from(tol));
  if (sol.status == lp::Status::Infeasible) return std::numeric_limits<double>::quiet_NaN();
  if (!sol.optimal()) throw NumericalError("step validation model is unbounded");
  return std::max(0.0, sol.objective);
}

StepCheck validate_step(const Dataset& d, std::size_t dmu, const Direction& dir, double t,
                        int sign, const StepConfig& steps, const Tolerances& tol) {
  d.check_index(dmu);
  check_direction(d, dir);
  if (!(t > 0) || !std::isfinite(t)) throw InputError("step must be positive and finite");
  StepCheck check;
  auto sol = lp::solve(step_model(d, dmu, dir, t, sign), lp::SolverOptions::from(tol));
  if (sol.status == lp::Status::Infeasible) return check;
  if (sol.status == lp::Status::Unbounded) {
    throw InputError("output direction puts no weight on the DMU's positive outputs");
  }
  check.feasible = true;
  check.beta = sol.objective;

  const std::size_t m = d.num_inputs(), s = d.num_outputs();
  std::vector<double> x1(m), y1(s), dx(m), dy(s);
  for (std::size_t i = 0; i < m; ++i) {
    dx[i] = sign * dir.omega()[i] * d.x(i, dmu);
    x1[i] = d.x(i, dmu) + t * dx[i];
  }
  for (std::size_t r = 0; r < s; ++r) {
    dy[r] = sign * dir.delta()[r] * (check.beta / t) * d.y(r, dmu);
    y1[r] = d.y(r, dmu) + t * dy[r];
  }
  const double gap = scaled_gap(d, dmu, x1, y1, dx, dy, tol);
  check.phi = 1.0 - t * gap;
  check.passed = std::isfinite(gap) && gap <= steps.validation_tol;
  return check;
}

FdmEstimate fdm(const Dataset& d, std::size_t dmu, const Direction& dir, int sign,
                const StepConfig& steps, const Tolerances& tol) {
  steps.validate();
  const Step step = sign > 0 ? Step::A1 : Step::B1;
  double t = steps.t_initial;
  StepCheck last;
  for (int k = 0; k <= steps.halving_limit; ++k, t /= 2) {
    last = validate_step(d, dmu, dir, t, sign, steps, tol);
    if (last.passed) return {last.beta / t, t};
  }
  throw StepError(step, "step selection failed: no step in [" + std::to_string(t * 2) + ", " +
                            std::to_string(steps.t_initial) + "] passed validation (last " +
                            (last.feasible ? "phi = " + std::to_string(last.phi)
                                           : std::string("step infeasible")) +
                            ")");
}

double max_scale_move(const Dataset& d, std::size_t dmu, const Direction& dir, int sign,
                      const Tolerances& tol) {
  d.check_index(dmu);
  check_direction(d, dir);
  const std::size_t n = d.size(), m = d.num_inputs(), s = d.num_outputs();
  // Columns: lambda (n), eta (>= 0), beta (free).
  const std::size_t eta = n, beta = n + 1, nv = n + 2;
  LinearProgram prog(Sense::Maximize, nv);
  prog.cost[eta] = 1.0;
  prog.domains[beta] = lp::Domain::Free;
  for (std::size_t i = 0; i < m; ++i) {
    auto row = input_row(d, i, nv);
    row[eta] = -sign * dir.omega()[i] * d.x(i, dmu);
    prog.add_row(std::move(row), Relation::Equal, d.x(i, dmu));
  }
  for (std::size_t r = 0; r < s; ++r) {
    auto row = output_row(d, r, nv);
    row[beta] = -sign * dir.delta()[r] * d.y(r, dmu);
    prog.add_row(std::move(row), Relation::GreaterEqual, d.y(r, dmu));
  }
  prog.add_row(convexity_row(d, nv), Relation::Equal, 1.0);
  auto sol = lp::solve(prog, lp::SolverOptions::from(tol));
  if (sol.status == lp::Status::Unbounded) return kInf;
  if (!sol.optimal()) throw NumericalError("scale-size model is infeasible");
  return sol.objective;
}

/// Output-gain LP shared by the dominance and witness tests.
double output_gain(const Dataset& d, std::size_t dmu, bool input_slack, const Tolerances& tol) {
  d.check_index(dmu);
  const std::size_t n = d.size(), m = d.num_inputs(), s = d.num_outputs();
  // Columns: lambda (n), a (m, only with input_slack), b (s).
  const std::size_t a = n, b = input_slack ? n + m : n, nv = b + s;
  LinearProgram prog(Sense::Maximize, nv);
  for (std::size_t i = 0; i < m; ++i) {
    auto row = input_row(d, i, nv);
    if (input_slack) row[a + i] = 1.0;
    prog.add_row(std::move(row), Relation::Equal, d.x(i, dmu));
  }
  for (std::size_t r = 0; r < s; ++r) {
    prog.cost[b + r] = 1.0;
    auto row = output_row(d, r, nv);
    row[b + r] = -1.0;
    prog.add_row(std::move(row), Relation::GreaterEqual, d.y(r, dmu));
  }
  prog.add_row(convexity_row(d, nv), Relation::Equal, 1.0);
  auto sol = solve_optimal(prog, tol, "dominance model");
  return std::max(0.0, sol.objective);
}

double output_scale(const Dataset& d, std::size_t dmu) {
  double scale = 1.0;
  for (double v : d.outputs(dmu)) scale = std::max(scale, v);
  return scale;
}

template <class F>
auto tagged(Step step, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StepError&) {
    throw;
  } catch (const NumericalError& e) {
    throw StepError(step, e.what());
  }
}

}  // namespace

Direction Direction::normalized(std::vector<double> omega, std::vector<double> delta) {
  return Direction(rescale(std::move(omega), "input"), rescale(std::move(delta), "output"));
}

Direction Direction::diagonal(std::size_t m, std::size_t s) {
  return Direction(std::vector<double>(m, 1.0), std::vector<double>(s, 1.0));
}

void StepConfig::validate() const {
  if (!(t_initial > 0) || !std::isfinite(t_initial)) {
    throw InputError("initial step must be positive and finite");
  }
  if (halving_limit < 1) throw InputError("halving limit must be at least 1");
  if (!(validation_tol > 0)) throw InputError("validation tolerance must be positive");
}

std::string_view to_string(Step s) {
  switch (s) {
    case Step::Projection:
      return "projection";
    case Step::A0:
      return "a-0";
    case Step::A1:
      return "a-1";
    case Step::A2:
      return "a-2";
    case Step::B0:
      return "b-0";
    case Step::B1:
      return "b-1";
    case Step::B2:
      return "b-2";
    case Step::Ulbm:
      return "ulbm";
  }
  return "?";
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Fdm:
      return "fdm";
    case Method::Ulbm:
      return "ulbm";
    case Method::Both:
      return "both";
  }
  return "?";
}

StepError::StepError(Step step, const std::string& what)
    : NumericalError("step " + std::string(to_string(step)) + ": " + what), step_(step) {}

double output_dominance(const Dataset& d, std::size_t dmu, const Tolerances& tol) {
  return output_gain(d, dmu, false, tol);
}

double congestion_witness(const Dataset& d, std::size_t dmu, const Tolerances& tol) {
  return output_gain(d, dmu, true, tol);
}

bool is_strongly_efficient(const Dataset& d, std::size_t dmu, const Tolerances& tol) {
  return output_dominance(d, dmu, tol) <= tol.classification * output_scale(d, dmu);
}

Projection project(const Dataset& d, std::size_t dmu, const Tolerances& tol) {
  d.check_index(dmu);
  const std::size_t s = d.num_outputs();
  if (is_strongly_efficient(d, dmu, tol)) {
    return {d, d.point(dmu), 1.0, std::vector<double>(s, 0.0), false};
  }
  const std::size_t n = d.size(), m = d.num_inputs();
  // Columns: lambda (n), theta (free), s+ (s).
  const std::size_t th = n, sp = n + 1, nv = n + 1 + s;
  LinearProgram prog(Sense::Maximize, nv);
  prog.cost[th] = 1.0;
  prog.domains[th] = lp::Domain::Free;
  for (std::size_t i = 0; i < m; ++i) {
    prog.add_row(input_row(d, i, nv), Relation::Equal, d.x(i, dmu));
  }
  for (std::size_t r = 0; r < s; ++r) {
    auto row = output_row(d, r, nv);
    row[th] = -d.y(r, dmu);
    row[sp + r] = -1.0;
    prog.add_row(std::move(row), Relation::Equal, 0.0);
  }
  prog.add_row(convexity_row(d, nv), Relation::Equal, 1.0);
  std::vector<double> secondary(nv, 0.0);
  for (std::size_t r = 0; r < s; ++r) secondary[sp + r] = 1.0;
  auto sol = lp::solve_lexicographic(prog, secondary, lp::SolverOptions::from(tol));
  if (!sol.optimal()) {
    throw NumericalError(std::string("projection model: LP is ") + lp::to_string(sol.status));
  }

  Projection proj{d, d.point(dmu), sol.primal[th], std::vector<double>(s), true};
  for (std::size_t r = 0; r < s; ++r) {
    proj.output_slack[r] = std::max(0.0, sol.primal[sp + r]);
    proj.point.y[r] = proj.theta * d.y(r, dmu) + proj.output_slack[r];
  }
  proj.dataset = d.with_point(dmu, proj.point);
  return proj;
}

double max_expansion(const Dataset& d, std::size_t dmu, const Direction& dir,
                     const Tolerances& tol) {
  return max_scale_move(d, dmu, dir, +1, tol);
}

double max_contraction(const Dataset& d, std::size_t dmu, const Direction& dir,
                       const Tolerances& tol) {
  return max_scale_move(d, dmu, dir, -1, tol);
}

bool is_dlss(const Dataset& d, std::size_t dmu, const Direction& dir, const Tolerances& tol) {
  return max_expansion(d, dmu, dir, tol) <= tol.feasibility;
}

bool is_dsss(const Dataset& d, std::size_t dmu, const Direction& dir, const Tolerances& tol) {
  return max_contraction(d, dmu, dir, tol) <= tol.feasibility;
}

StepCheck validate_step_right(const Dataset& d, std::size_t dmu, const Direction& dir, double t,
                              const StepConfig& steps, const Tolerances& tol) {
  return validate_step(d, dmu, dir, t, +1, steps, tol);
}

StepCheck validate_step_left(const Dataset& d, std::size_t dmu, const Direction& dir, double t,
                             const StepConfig& steps, const Tolerances& tol) {
  return validate_step(d, dmu, dir, t, -1, steps, tol);
}

FdmEstimate right_fdm(const Dataset& d, std::size_t dmu, const Direction& dir,
                      const StepConfig& steps, const Tolerances& tol) {
  return fdm(d, dmu, dir, +1, steps, tol);
}

FdmEstimate left_fdm(const Dataset& d, std::size_t dmu, const Direction& dir,
                     const StepConfig& steps, const Tolerances& tol) {
  return fdm(d, dmu, dir, -1, steps, tol);
}

UlbmBounds ulbm_bounds(const Dataset& d, std::size_t dmu, const Direction& dir,
                       const Tolerances& tol) {
  d.check_index(dmu);
  check_direction(d, dir);
  for (double w : dir.omega()) {
    if (w < kMinUlbmWeight) {
      throw InputError("bounds method needs every input weight >= 1e-9; use the fdm method");
    }
  }
  for (double w : dir.delta()) {
    if (w < kMinUlbmWeight) {
      throw InputError("bounds method needs every output weight >= 1e-9; use the fdm method");
    }
  }
  const std::size_t n = d.size(), m = d.num_inputs(), s = d.num_outputs();
  // Columns: Gamma (m, free), Lambda (s, >= 0), tau (>= 0), mu' (free).
  const std::size_t lam = m, tau = m + s, mu = m + s + 1, nv = m + s + 2;
  LinearProgram prog(Sense::Minimize, nv);
  for (std::size_t i = 0; i < m; ++i) {
    prog.cost[i] = d.x(i, dmu);
    prog.domains[i] = lp::Domain::Free;
  }
  prog.domains[mu] = lp::Domain::Free;
  auto hyperplane_row = [&](std::size_t j) {
    auto row = zeros(nv);
    for (std::size_t i = 0; i < m; ++i) row[i] = -d.x(i, j) / dir.omega()[i];
    for (std::size_t r = 0; r < s; ++r) row[lam + r] = d.y(r, j) / dir.delta()[r];
    row[mu] = 1.0;
    return row;
  };
  for (std::size_t j = 0; j < n; ++j) {
    if (j != dmu) prog.add_row(hyperplane_row(j), Relation::LessEqual, 0.0);
  }
  prog.add_row(hyperplane_row(dmu), Relation::Equal, 0.0);
  auto scale_row = zeros(nv);
  for (std::size_t i = 0; i < m; ++i) scale_row[i] = d.x(i, dmu) / dir.omega()[i];
  scale_row[mu] = -1.0;
  scale_row[tau] = -1.0;
  prog.add_row(std::move(scale_row), Relation::Equal, 0.0);
  auto norm = zeros(nv);
  for (std::size_t r = 0; r < s; ++r) norm[lam + r] = d.y(r, dmu);
  prog.add_row(std::move(norm), Relation::Equal, 1.0);

  UlbmBounds out;
  const auto opts = lp::SolverOptions::from(tol);
  for (Sense sense : {Sense::Minimize, Sense::Maximize}) {
    prog.sense = sense;
    auto sol = lp::solve(prog, opts);
    if (sol.status == lp::Status::Infeasible) {
      throw StepError(Step::Ulbm, "bounds model infeasible: DMU '" + d.label(dmu) +
                                      "' is not on the strongly efficient frontier");
    }
    const bool minimize = sense == Sense::Minimize;
    if (sol.status == lp::Status::Unbounded) {
      (minimize ? out.dlss : out.dsss) = true;
      (minimize ? out.lower : out.upper) = minimize ? -kInf : kInf;
    } else {
      (minimize ? out.lower : out.upper) = sol.objective;
    }
  }
  return out;
}

DirectionalResult analyze(const Dataset& d, std::size_t dmu, const Direction& dir, Method method,
                          const StepConfig& steps, const Tolerances& tol) {
  d.check_index(dmu);
  check_direction(d, dir);
  steps.validate();

  DirectionalResult res;
  res.dmu = dmu;
  res.direction = dir;
  res.method = method;

  const Dataset* data = &d;
  std::optional<Projection> proj;
  tagged(Step::Projection, [&] {
    if (!is_strongly_efficient(d, dmu, tol)) {
      proj = project(d, dmu, tol);
      data = &proj->dataset;
      res.projected = true;
    }
  });

  const bool want_fdm = method != Method::Ulbm;
  bool want_ulbm = method != Method::Fdm;
  if (method == Method::Both) {
    for (double w : dir.omega()) want_ulbm = want_ulbm && w >= kMinUlbmWeight;
    for (double w : dir.delta()) want_ulbm = want_ulbm && w >= kMinUlbmWeight;
  }

  if (want_fdm) {
    res.dlss = tagged(Step::A0, [&] { return is_dlss(*data, dmu, dir, tol); });
    if (!res.dlss) {
      const auto est = tagged(Step::A2, [&] { return right_fdm(*data, dmu, dir, steps, tol); });
      res.xi = est.value;
      res.t_right = est.step;
    }
    res.dsss = tagged(Step::B0, [&] { return is_dsss(*data, dmu, dir, tol); });
    if (!res.dsss) {
      const auto est = tagged(Step::B2, [&] { return left_fdm(*data, dmu, dir, steps, tol); });
      res.psi = est.value;
      res.t_left = est.step;
    }
  }
  if (want_ulbm) {
    const auto bounds = tagged(Step::Ulbm, [&] { return ulbm_bounds(*data, dmu, dir, tol); });
    res.rho_lower = bounds.lower;
    res.rho_upper = bounds.upper;
    if (!want_fdm) {
      res.dlss = bounds.dlss;
      res.dsss = bounds.dsss;
    }
  }

  const double cut = -tol.classification;
  if (res.xi) {
    res.right_congested = *res.xi < cut;
  } else if (!res.dlss && res.rho_lower) {
    res.right_congested = *res.rho_lower < cut;
  }
  if (res.psi) {
    res.left_congested = *res.psi < cut;
  } else if (!res.dsss && res.rho_upper) {
    res.left_congested = *res.rho_upper < cut;
  }
  return res;
}

std::vector<SweepRow> sweep(const Dataset& d, std::size_t dmu, const std::vector<Direction>& grid,
                            Method method, const StepConfig& steps, const Tolerances& tol) {
  if (grid.empty()) throw InputError("direction grid is empty");
  d.check_index(dmu);
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (const auto& dir : grid) {
    SweepRow row{dir, std::nullopt, {}, std::nullopt, false};
    try {
      row.result = analyze(d, dmu, dir, method, steps, tol);
    } catch (const StepError& e) {
      row.error = e.what();
      row.failed_step = e.step();
    } catch (const InputError& e) {
      row.error = e.what();
      row.input_error = true;
    } catch (const NumericalError& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace dea::directional
