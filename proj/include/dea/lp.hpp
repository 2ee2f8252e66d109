#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "dea/tolerances.hpp"

/// Dense two-phase simplex for the small linear programs used by the DEA
/// models (tens of variables and rows). The tableau is kept in extended
/// precision and the final basis is refactored from the original data, so the
/// reported primal/dual vectors are accurate to roughly 1e-15 relative.
namespace dea::lp {

enum class Sense { Maximize, Minimize };
enum class Relation { LessEqual, Equal, GreaterEqual };
enum class Domain { NonNegative, Free };
enum class Status { Optimal, Infeasible, Unbounded };

struct Row {
  std::vector<double> coeffs;
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
};

struct LinearProgram {
  Sense sense = Sense::Maximize;
  std::vector<double> cost;
  std::vector<Row> rows;
  std::vector<Domain> domains;

  LinearProgram() = default;
  /// `num_vars` nonnegative variables with zero cost.
  LinearProgram(Sense s, std::size_t num_vars);

  std::size_t num_vars() const { return cost.size(); }
  std::size_t num_rows() const { return rows.size(); }

  std::size_t add_row(std::vector<double> coeffs, Relation rel, double rhs);

  /// Throws InputError on dimension mismatch, empty program, or non-finite data.
  void validate() const;
};

struct SolverOptions {
  double feasibility = 1e-8;
  /// Reduced-cost threshold for entering columns.
  double optimality = 1e-9;
  /// Smallest tableau entry accepted as a pivot.
  double pivot = 1e-11;
  std::size_t iteration_limit = 200000;

  static SolverOptions from(const Tolerances& tol) {
    SolverOptions o;
    o.feasibility = tol.feasibility;
    return o;
  }
};

struct LpSolution {
  Status status = Status::Infeasible;
  /// Primary objective. +/-inf when Unbounded, NaN when Infeasible.
  double objective = 0.0;
  std::vector<double> primal;
  /// One multiplier per row with sum(rhs_i * dual_i) == objective. Only
  /// populated when Optimal.
  std::vector<double> dual;
  /// Set by solve_lexicographic when the primary stage is optimal; +/-inf
  /// when the secondary objective is unbounded over the optimal face.
  std::optional<double> secondary_objective;
  std::size_t iterations = 0;

  bool optimal() const { return status == Status::Optimal; }
};

LpSolution solve(const LinearProgram& lp, const SolverOptions& options = {});

/// Optimizes `lp.cost`, then optimizes `secondary_cost` (same sense) over the
/// face of primary optima. The primary objective and duals are those of the
/// first stage.
LpSolution solve_lexicographic(const LinearProgram& lp,
                               std::span<const double> secondary_cost,
                               const SolverOptions& options = {});

/// Largest violation of any row or nonnegativity bound at `x`.
double max_violation(const LinearProgram& lp, std::span<const double> x);

/// sum(rhs_i * y_i).
double dual_objective(const LinearProgram& lp, std::span<const double> y);

/// Plain-text dump used for bug reports and DEA_LOG tracing.
///
///   sense max|min
///   vars <n>
///   cost c_1 ... c_n
///   free j ...          (omitted when every variable is nonnegative)
///   row <= rhs : a_1 ... a_n
void write_lp(std::ostream& out, const LinearProgram& lp);

const char* to_string(Status s);

}  // namespace dea::lp
