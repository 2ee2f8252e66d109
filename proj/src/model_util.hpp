#pragma once

// Small helpers shared by the model builders. Not installed.

#include <cstddef>
#include <string>
#include <vector>

#include "dea/dataset.hpp"
#include "dea/error.hpp"
#include "dea/lp.hpp"
#include "dea/tolerances.hpp"

namespace dea::detail {

inline std::vector<double> zeros(std::size_t n) { return std::vector<double>(n, 0.0); }

/// Row with lambda_j = coefficient of DMU j on input i (first n slots).
inline std::vector<double> input_row(const Dataset& d, std::size_t i, std::size_t nvars) {
  auto r = zeros(nvars);
  for (std::size_t j = 0; j < d.size(); ++j) r[j] = d.x(i, j);
  return r;
}

inline std::vector<double> output_row(const Dataset& d, std::size_t r, std::size_t nvars) {
  auto row = zeros(nvars);
  for (std::size_t j = 0; j < d.size(); ++j) row[j] = d.y(r, j);
  return row;
}

inline std::vector<double> convexity_row(const Dataset& d, std::size_t nvars) {
  auto r = zeros(nvars);
  for (std::size_t j = 0; j < d.size(); ++j) r[j] = 1.0;
  return r;
}

inline lp::LpSolution solve_optimal(const lp::LinearProgram& prog, const Tolerances& tol,
                                    const char* model) {
  auto sol = lp::solve(prog, lp::SolverOptions::from(tol));
  if (!sol.optimal()) {
    throw NumericalError(std::string(model) + ": LP is " + lp::to_string(sol.status) +
                         " where an optimum must exist");
  }
  return sol;
}

}  // namespace dea::detail
