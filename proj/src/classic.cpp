#include "dea/classic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dea/directional.hpp"
#include "dea/error.hpp"
#include "dea/lp.hpp"
#include "model_util.hpp"

namespace dea {

using detail::convexity_row;
using detail::input_row;
using detail::output_row;
using detail::solve_optimal;
using lp::LinearProgram;
using lp::Relation;
using lp::Sense;

BccResult bcc_output(const Dataset& d, std::size_t dmu, const Tolerances& tol) {
  d.check_index(dmu);
  const std::size_t n = d.size(), m = d.num_inputs(), s = d.num_outputs();
  // Columns: lambda (n), theta, s- (m), s+ (s).
  const std::size_t th = n, sm = n + 1, sp = n + 1 + m, nv = n + 1 + m + s;
  LinearProgram prog(Sense::Maximize, nv);
  prog.cost[th] = 1.0;
  prog.domains[th] = lp::Domain::Free;
  for (std::size_t i = 0; i < m; ++i) {
    auto row = input_row(d, i, nv);
    row[sm + i] = 1.0;
    prog.add_row(std::move(row), Relation::Equal, d.x(i, dmu));
  }
  for (std::size_t r = 0; r < s; ++r) {
    auto row = output_row(d, r, nv);
    row[th] = -d.y(r, dmu);
    row[sp + r] = -1.0;
    prog.add_row(std::move(row), Relation::Equal, 0.0);
  }
  prog.add_row(convexity_row(d, nv), Relation::Equal, 1.0);

  std::vector<double> secondary(nv, 0.0);
  std::fill(secondary.begin() + static_cast<std::ptrdiff_t>(sm), secondary.end(), 1.0);
  auto sol = lp::solve_lexicographic(prog, secondary, lp::SolverOptions::from(tol));
  if (!sol.optimal()) {
    throw NumericalError(std::string("BCC output model: LP is ") + lp::to_string(sol.status));
  }

  BccResult res;
  res.theta = sol.primal[th];
  res.lambda.assign(sol.primal.begin(), sol.primal.begin() + static_cast<std::ptrdiff_t>(n));
  res.input_slack.assign(sol.primal.begin() + static_cast<std::ptrdiff_t>(sm),
                         sol.primal.begin() + static_cast<std::ptrdiff_t>(sp));
  res.output_slack.assign(sol.primal.begin() + static_cast<std::ptrdiff_t>(sp), sol.primal.end());
  return res;
}

FglResult fgl_congestion(const Dataset& d, std::size_t dmu, const Tolerances& tol) {
  d.check_index(dmu);
  const std::size_t n = d.size(), m = d.num_inputs(), s = d.num_outputs();
  // Columns: lambda (n), tau, beta.
  const std::size_t tau = n, beta = n + 1, nv = n + 2;
  LinearProgram prog(Sense::Maximize, nv);
  prog.cost[beta] = 1.0;
  prog.domains[beta] = lp::Domain::Free;
  for (std::size_t i = 0; i < m; ++i) {
    auto row = input_row(d, i, nv);
    row[tau] = -d.x(i, dmu);
    prog.add_row(std::move(row), Relation::Equal, 0.0);
  }
  for (std::size_t r = 0; r < s; ++r) {
    auto row = output_row(d, r, nv);
    row[beta] = -d.y(r, dmu);
    prog.add_row(std::move(row), Relation::GreaterEqual, 0.0);
  }
  prog.add_row(convexity_row(d, nv), Relation::Equal, 1.0);
  auto cap = detail::zeros(nv);
  cap[tau] = 1.0;
  prog.add_row(std::move(cap), Relation::LessEqual, 1.0);

  auto sol = solve_optimal(prog, tol, "weak-disposability model");
  const double theta = bcc_output(d, dmu, tol).theta;
  return {sol.objective, sol.objective / theta};
}

std::vector<double> ctt_congestion(const Dataset& d, std::size_t dmu, const BccResult& bcc,
                                   const Tolerances& tol) {
  d.check_index(dmu);
  const std::size_t n = d.size(), m = d.num_inputs(), s = d.num_outputs();
  if (bcc.input_slack.size() != m || bcc.output_slack.size() != s) {
    throw InputError("ctt_congestion: BCC result does not match the dataset");
  }
  // Columns: lambda (n), delta- (m).
  const std::size_t nv = n + m;
  LinearProgram prog(Sense::Maximize, nv);
  for (std::size_t i = 0; i < m; ++i) {
    prog.cost[n + i] = 1.0;
    auto row = input_row(d, i, nv);
    row[n + i] = -1.0;
    prog.add_row(std::move(row), Relation::Equal, d.x(i, dmu) - bcc.input_slack[i]);
  }
  for (std::size_t r = 0; r < s; ++r) {
    prog.add_row(output_row(d, r, nv), Relation::Equal,
                 bcc.theta * d.y(r, dmu) + bcc.output_slack[r]);
  }
  prog.add_row(convexity_row(d, nv), Relation::Equal, 1.0);
  for (std::size_t i = 0; i < m; ++i) {
    auto cap = detail::zeros(nv);
    cap[n + i] = 1.0;
    prog.add_row(std::move(cap), Relation::LessEqual, std::max(0.0, bcc.input_slack[i]));
  }

  auto sol = solve_optimal(prog, tol, "slack congestion model");
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double slack = std::max(0.0, bcc.input_slack[i]);
    out[i] = std::clamp(slack - sol.primal[n + i], 0.0, slack);
  }
  return out;
}

double wyts_pte(const Dataset& d, std::size_t dmu, const Tolerances& tol) {
  d.check_index(dmu);
  const std::size_t n = d.size(), m = d.num_inputs(), s = d.num_outputs();
  const std::size_t pi = n, nv = n + 1;
  LinearProgram prog(Sense::Maximize, nv);
  prog.cost[pi] = 1.0;
  prog.domains[pi] = lp::Domain::Free;
  for (std::size_t i = 0; i < m; ++i) {
    prog.add_row(input_row(d, i, nv), Relation::Equal, d.x(i, dmu));
  }
  for (std::size_t r = 0; r < s; ++r) {
    auto row = output_row(d, r, nv);
    row[pi] = -d.y(r, dmu);
    prog.add_row(std::move(row), Relation::GreaterEqual, 0.0);
  }
  prog.add_row(convexity_row(d, nv), Relation::Equal, 1.0);
  return solve_optimal(prog, tol, "equal-input efficiency model").objective;
}

std::optional<double> max_supporting_intercept(const Dataset& d, std::size_t dmu,
                                               const Tolerances& tol) {
  d.check_index(dmu);
  const std::size_t n = d.size(), m = d.num_inputs(), s = d.num_outputs();
  // Columns: u (s, >= 0), v (m, free), mu0 (free).
  const std::size_t nv = s + m + 1, mu = s + m;
  LinearProgram prog(Sense::Maximize, nv);
  prog.cost[mu] = 1.0;
  for (std::size_t k = s; k < nv; ++k) prog.domains[k] = lp::Domain::Free;
  auto hyperplane_row = [&](std::size_t j) {
    auto row = detail::zeros(nv);
    for (std::size_t r = 0; r < s; ++r) row[r] = d.y(r, j);
    for (std::size_t i = 0; i < m; ++i) row[s + i] = -d.x(i, j);
    row[mu] = 1.0;
    return row;
  };
  for (std::size_t j = 0; j < n; ++j) {
    if (j != dmu) prog.add_row(hyperplane_row(j), Relation::LessEqual, 0.0);
  }
  prog.add_row(hyperplane_row(dmu), Relation::Equal, 0.0);
  auto norm = detail::zeros(nv);
  for (std::size_t r = 0; r < s; ++r) norm[r] = d.y(r, dmu);
  prog.add_row(std::move(norm), Relation::Equal, 1.0);

  auto sol = lp::solve(prog, lp::SolverOptions::from(tol));
  switch (sol.status) {
    case lp::Status::Optimal:
      return sol.objective;
    case lp::Status::Unbounded:
      return std::nullopt;
    case lp::Status::Infeasible:
      break;
  }
  throw NumericalError("supporting hyperplane model: no hyperplane through DMU '" + d.label(dmu) +
                       "' (not on the frontier)");
}

std::string_view to_string(Congestion c) {
  switch (c) {
    case Congestion::None:
      return "No";
    case Congestion::Weak:
      return "Weak";
    case Congestion::Strong:
      return "Strong";
  }
  return "?";
}

CongestionReport classify_congestion(const Dataset& d, std::size_t dmu,
                                     const ClassifyOptions& options) {
  d.check_index(dmu);
  const Tolerances& tol = options.tol;
  CongestionReport rep;
  const BccResult bcc = bcc_output(d, dmu, tol);
  rep.theta = bcc.theta;
  rep.pi = wyts_pte(d, dmu, tol);
  rep.phi = rep.pi / rep.theta;
  rep.congested = rep.phi < 1.0 - tol.classification;

  if (rep.congested) {
    std::optional<double> intercept;
    if (directional::is_strongly_efficient(d, dmu, tol)) {
      intercept = max_supporting_intercept(d, dmu, tol);
    } else {
      const auto proj = directional::project(d, dmu, tol);
      rep.projected = true;
      intercept = max_supporting_intercept(proj.dataset, dmu, tol);
    }
    rep.rho_bar = intercept ? 1.0 + *intercept : std::numeric_limits<double>::infinity();
    rep.classification = *rep.rho_bar < -tol.classification ? Congestion::Strong : Congestion::Weak;
  }
  if (options.with_fgl) rep.fgl = fgl_congestion(d, dmu, tol);
  if (options.with_ctt) rep.ctt = ctt_congestion(d, dmu, bcc, tol);
  return rep;
}

}  // namespace dea
