#include "dea/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <string>

#include "dea/error.hpp"

namespace dea::lp {
namespace {

using Real = long double;

int log_level() {
  static const int level = [] {
    const char* v = std::getenv("DEA_LOG");
    return v ? std::atoi(v) : 0;
  }();
  return level;
}

// min c^T z  s.t.  A z = b,  z >= 0,  b >= 0.
// Columns: structural (free variables split in two), then one slack/surplus
// per inequality row, then one artificial per >= or = row.
struct StandardForm {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Real> a;
  std::vector<Real> b;
  std::vector<Real> cost;        // phase-2 cost, minimization form
  std::vector<int> origin;       // original variable, -1 for slacks/artificials
  std::vector<int> part_sign;    // +1, or -1 for the negative half of a free var
  std::vector<long> mirror;      // other half of a split free var, or -1
  std::vector<char> artificial;
  std::vector<Real> row_sign;    // -1 where the row was negated to make b >= 0
  std::vector<std::size_t> unit_col;  // column holding e_i in the original A
  Real cost_scale = 1;

  Real& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  Real at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

Relation flip(Relation r) {
  switch (r) {
    case Relation::LessEqual: return Relation::GreaterEqual;
    case Relation::GreaterEqual: return Relation::LessEqual;
    case Relation::Equal: return Relation::Equal;
  }
  return r;
}

std::vector<Real> min_form_cost(const LinearProgram& lp, std::span<const double> c,
                                const StandardForm& sf) {
  std::vector<Real> out(sf.cols, 0);
  const Real dir = lp.sense == Sense::Maximize ? -1 : 1;
  for (std::size_t j = 0; j < sf.cols; ++j) {
    if (sf.origin[j] >= 0) {
      out[j] = dir * sf.part_sign[j] * static_cast<Real>(c[sf.origin[j]]);
    }
  }
  return out;
}

StandardForm standardize(const LinearProgram& lp) {
  StandardForm sf;
  sf.rows = lp.num_rows();
  const std::size_t n = lp.num_vars();

  std::vector<Relation> rel(sf.rows);
  sf.row_sign.assign(sf.rows, 1);
  for (std::size_t i = 0; i < sf.rows; ++i) {
    rel[i] = lp.rows[i].relation;
    if (lp.rows[i].rhs < 0) {
      sf.row_sign[i] = -1;
      rel[i] = flip(rel[i]);
    }
  }

  for (std::size_t j = 0; j < n; ++j) {
    sf.origin.push_back(static_cast<int>(j));
    sf.part_sign.push_back(1);
    if (lp.domains[j] == Domain::Free) {
      sf.origin.push_back(static_cast<int>(j));
      sf.part_sign.push_back(-1);
    }
  }
  sf.mirror.assign(sf.origin.size(), -1);
  for (std::size_t j = 0; j + 1 < sf.origin.size(); ++j) {
    if (sf.origin[j] == sf.origin[j + 1]) {
      sf.mirror[j] = static_cast<long>(j + 1);
      sf.mirror[j + 1] = static_cast<long>(j);
    }
  }
  const std::size_t structural = sf.origin.size();
  std::size_t slacks = 0;
  std::size_t artificials = 0;
  for (auto r : rel) {
    if (r != Relation::Equal) ++slacks;
    if (r != Relation::LessEqual) ++artificials;
  }
  sf.cols = structural + slacks + artificials;
  sf.origin.resize(sf.cols, -1);
  sf.part_sign.resize(sf.cols, 1);
  sf.mirror.resize(sf.cols, -1);
  sf.artificial.assign(sf.cols, 0);
  sf.a.assign(sf.rows * sf.cols, 0);
  sf.b.assign(sf.rows, 0);
  sf.unit_col.assign(sf.rows, 0);

  std::size_t next_slack = structural;
  std::size_t next_art = structural + slacks;
  for (std::size_t i = 0; i < sf.rows; ++i) {
    const Row& row = lp.rows[i];
    const Real s = sf.row_sign[i];
    for (std::size_t j = 0; j < structural; ++j) {
      sf.at(i, j) = s * sf.part_sign[j] * static_cast<Real>(row.coeffs[sf.origin[j]]);
    }
    sf.b[i] = s * static_cast<Real>(row.rhs);
    switch (rel[i]) {
      case Relation::LessEqual:
        sf.at(i, next_slack) = 1;
        sf.unit_col[i] = next_slack++;
        break;
      case Relation::GreaterEqual:
        sf.at(i, next_slack++) = -1;
        sf.at(i, next_art) = 1;
        sf.artificial[next_art] = 1;
        sf.unit_col[i] = next_art++;
        break;
      case Relation::Equal:
        sf.at(i, next_art) = 1;
        sf.artificial[next_art] = 1;
        sf.unit_col[i] = next_art++;
        break;
    }
  }

  sf.cost = min_form_cost(lp, lp.cost, sf);
  for (Real c : sf.cost) sf.cost_scale = std::max(sf.cost_scale, std::fabs(c));
  return sf;
}

// Pivot entries below this fraction of their column's largest entry are
// skipped when another row qualifies.
constexpr Real kRelativePivot = 1e-9L;

// Dense tableau T = B^-1 [A | b] with Bland's pivoting rule.
class Tableau {
 public:
  enum class Outcome { Optimal, Unbounded };

  Tableau(const StandardForm& sf, const SolverOptions& opt)
      : sf_(sf), opt_(opt), width_(sf.cols + 1), t_(sf.rows * width_, 0),
        basis_(sf.unit_col), in_basis_(sf.cols, 0) {
    for (std::size_t i = 0; i < sf.rows; ++i) {
      for (std::size_t j = 0; j < sf.cols; ++j) t(i, j) = sf.at(i, j);
      t(i, sf.cols) = sf.b[i];
    }
    for (auto c : basis_) in_basis_[c] = 1;
  }

  std::size_t iterations() const { return iterations_; }
  std::size_t basic(std::size_t row) const { return basis_[row]; }
  bool in_basis(std::size_t col) const { return in_basis_[col] != 0; }
  Real value(std::size_t row) const { return t(row, sf_.cols); }

  /// Runs simplex iterations until optimal or unbounded, then refactors the
  /// basis from the original data and resumes if refactoring exposed a
  /// remaining improving column.
  Outcome run(const std::vector<Real>& cost, const std::vector<char>& eligible) {
    for (int round = 0; round < 8; ++round) {
      Outcome o = iterate(cost, eligible);
      if (o == Outcome::Unbounded) return o;
      reinvert();
      if (!entering(reduced_costs(cost), eligible)) return Outcome::Optimal;
    }
    throw NumericalError("simplex: basis refactoring did not converge");
  }

  std::vector<Real> reduced_costs(const std::vector<Real>& cost) const {
    std::vector<Real> d(cost.begin(), cost.end());
    for (std::size_t i = 0; i < sf_.rows; ++i) {
      const Real cb = cost[basis_[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j < sf_.cols; ++j) d[j] -= cb * t(i, j);
    }
    return d;
  }

  /// Pivots basic artificial columns out wherever the row has a usable
  /// non-artificial entry. Rows without one are redundant; their artificial
  /// stays basic at zero and can never change.
  void drive_out_artificials() {
    for (std::size_t i = 0; i < sf_.rows; ++i) {
      if (!sf_.artificial[basis_[i]]) continue;
      std::size_t best = sf_.cols;
      Real best_mag = opt_.pivot;
      for (std::size_t j = 0; j < sf_.cols; ++j) {
        if (sf_.artificial[j] || in_basis_[j]) continue;
        if (sf_.mirror[j] >= 0 && in_basis_[static_cast<std::size_t>(sf_.mirror[j])]) continue;
        if (std::fabs(t(i, j)) > best_mag) {
          best_mag = std::fabs(t(i, j));
          best = j;
        }
      }
      if (best < sf_.cols) pivot(i, best);
    }
    reinvert();
  }

  /// y^T = c_B^T B^-1, read from the columns that were unit vectors in A.
  std::vector<Real> duals(const std::vector<Real>& cost) const {
    std::vector<Real> y(sf_.rows, 0);
    for (std::size_t r = 0; r < sf_.rows; ++r) {
      const std::size_t col = sf_.unit_col[r];
      Real acc = 0;
      for (std::size_t i = 0; i < sf_.rows; ++i) acc += cost[basis_[i]] * t(i, col);
      y[r] = acc;
    }
    return y;
  }

  /// Recomputes T = B^-1 [A | b] from the original data (Gauss-Jordan with
  /// partial pivoting), discarding accumulated pivoting error.
  void reinvert() {
    const std::size_t m = sf_.rows;
    const std::size_t w = m + width_;
    std::vector<Real> aug(m * w, 0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t k = 0; k < m; ++k) aug[i * w + k] = sf_.at(i, basis_[k]);
      for (std::size_t j = 0; j < sf_.cols; ++j) aug[i * w + m + j] = sf_.at(i, j);
      aug[i * w + m + sf_.cols] = sf_.b[i];
    }
    for (std::size_t k = 0; k < m; ++k) {
      std::size_t p = k;
      for (std::size_t i = k + 1; i < m; ++i) {
        if (std::fabs(aug[i * w + k]) > std::fabs(aug[p * w + k])) p = i;
      }
      if (std::fabs(aug[p * w + k]) < 1e-14L) {
        throw NumericalError("simplex: singular basis during refactoring");
      }
      if (p != k) {
        for (std::size_t j = 0; j < w; ++j) std::swap(aug[p * w + j], aug[k * w + j]);
      }
      const Real inv = 1 / aug[k * w + k];
      for (std::size_t j = 0; j < w; ++j) aug[k * w + j] *= inv;
      for (std::size_t i = 0; i < m; ++i) {
        if (i == k) continue;
        const Real f = aug[i * w + k];
        if (f == 0) continue;
        for (std::size_t j = 0; j < w; ++j) aug[i * w + j] -= f * aug[k * w + j];
      }
    }
    // Row k of the reduced system now belongs to basis_[k].
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < width_; ++j) t(i, j) = aug[i * w + m + j];
      t(i, basis_[i]) = 1;
    }
    // The accepted phase-1 residual is a perturbation of b of at most
    // feasibility * scale, which moves basic values by up to ||B^-1|| times
    // that. Negative values inside this band are rounding and are clipped.
    const Real band = opt_.feasibility * feasibility_scale() * std::max<Real>(1, inverse_norm());
    for (std::size_t i = 0; i < m; ++i) {
      if (t(i, sf_.cols) < 0) {
        if (t(i, sf_.cols) < -band) {
          throw NumericalError("simplex: basis lost primal feasibility");
        }
        t(i, sf_.cols) = 0;
      }
    }
  }

  /// Infinity norm of B^-1, read from the columns that were unit vectors in A.
  Real inverse_norm() const {
    Real norm = 0;
    for (std::size_t i = 0; i < sf_.rows; ++i) {
      Real row = 0;
      for (std::size_t r = 0; r < sf_.rows; ++r) row += std::fabs(t(i, sf_.unit_col[r]));
      norm = std::max(norm, row);
    }
    return norm;
  }

  Real feasibility_scale() const {
    Real s = 1;
    for (Real v : sf_.b) s = std::max(s, std::fabs(v));
    return s;
  }

 private:
  Real& t(std::size_t i, std::size_t j) { return t_[i * width_ + j]; }
  Real t(std::size_t i, std::size_t j) const { return t_[i * width_ + j]; }

  // Bland: lowest-index eligible column with negative reduced cost. The two
  // halves of a free variable are never basic together: with one half basic
  // the other has reduced cost exactly zero, so only rounding could pick it,
  // and the resulting basis would be singular.
  std::optional<std::size_t> entering(const std::vector<Real>& d,
                                      const std::vector<char>& eligible) const {
    const Real thresh = opt_.optimality * sf_.cost_scale;
    for (std::size_t j = 0; j < sf_.cols; ++j) {
      if (!eligible[j] || in_basis_[j] || d[j] >= -thresh) continue;
      if (sf_.mirror[j] >= 0 && in_basis_[static_cast<std::size_t>(sf_.mirror[j])]) continue;
      return j;
    }
    return std::nullopt;
  }

  Outcome iterate(const std::vector<Real>& cost, const std::vector<char>& eligible) {
    for (;;) {
      auto enter = entering(reduced_costs(cost), eligible);
      if (!enter) return Outcome::Optimal;
      if (++iterations_ > opt_.iteration_limit) {
        throw NumericalError("simplex: iteration limit exceeded");
      }
      const std::size_t col = *enter;
      // Entries far below the column's largest one are treated as zero: a
      // pivot on them lands on a nearly singular basis. Skipping such a row
      // leaves it infeasible by at most (entry * step), well inside the
      // feasibility tolerance. The absolute threshold is the fallback when
      // nothing else qualifies.
      Real col_max = 0;
      for (std::size_t i = 0; i < sf_.rows; ++i) col_max = std::max(col_max, std::fabs(t(i, col)));
      auto leave = leaving(col, std::max<Real>(opt_.pivot, kRelativePivot * col_max));
      if (!leave) leave = leaving(col, opt_.pivot);
      if (!leave) return Outcome::Unbounded;
      pivot(*leave, col);
    }
  }

  // Minimum ratio over rows whose pivot exceeds `min_pivot`; ties go to the
  // lowest basic column index.
  std::optional<std::size_t> leaving(std::size_t col, Real min_pivot) const {
    std::optional<std::size_t> leave;
    Real best = 0;
    for (std::size_t i = 0; i < sf_.rows; ++i) {
      const Real piv = t(i, col);
      if (piv <= min_pivot) continue;
      const Real ratio = std::max<Real>(t(i, sf_.cols), 0) / piv;
      if (!leave) {
        leave = i;
        best = ratio;
        continue;
      }
      const Real tie = 1e-13L * (1 + std::fabs(best));
      if (ratio < best - tie) {
        leave = i;
        best = ratio;
      } else if (ratio <= best + tie && basis_[i] < basis_[*leave]) {
        leave = i;
        best = std::min(best, ratio);
      }
    }
    return leave;
  }

  void pivot(std::size_t row, std::size_t col) {
    const Real inv = 1 / t(row, col);
    for (std::size_t j = 0; j < width_; ++j) t(row, j) *= inv;
    t(row, col) = 1;
    for (std::size_t i = 0; i < sf_.rows; ++i) {
      if (i == row) continue;
      const Real f = t(i, col);
      if (f == 0) continue;
      for (std::size_t j = 0; j < width_; ++j) t(i, j) -= f * t(row, j);
      t(i, col) = 0;
    }
    in_basis_[basis_[row]] = 0;
    basis_[row] = col;
    in_basis_[col] = 1;
  }

  const StandardForm& sf_;
  SolverOptions opt_;
  std::size_t width_;
  std::vector<Real> t_;
  std::vector<std::size_t> basis_;
  std::vector<char> in_basis_;
  std::size_t iterations_ = 0;
};

std::vector<double> recover_primal(const StandardForm& sf, const Tableau& tab,
                                   std::size_t num_vars) {
  std::vector<Real> z(sf.cols, 0);
  for (std::size_t i = 0; i < sf.rows; ++i) z[tab.basic(i)] = tab.value(i);
  std::vector<Real> x(num_vars, 0);
  for (std::size_t j = 0; j < sf.cols; ++j) {
    if (sf.origin[j] >= 0) x[sf.origin[j]] += sf.part_sign[j] * z[j];
  }
  return {x.begin(), x.end()};
}

double dot(std::span<const double> a, std::span<const double> b) {
  Real acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += static_cast<Real>(a[i]) * b[i];
  return static_cast<double>(acc);
}

void check_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw InputError(std::string("lp: non-finite ") + what);
  }
}

LpSolution solve_impl(const LinearProgram& lp, std::span<const double> secondary,
                      bool lexicographic, const SolverOptions& opt) {
  lp.validate();
  if (lexicographic) {
    if (secondary.size() != lp.num_vars()) {
      throw InputError("lp: secondary cost length does not match variable count");
    }
    check_finite(secondary, "secondary cost");
  }
  if (log_level() >= 2) write_lp(std::clog, lp);

  const StandardForm sf = standardize(lp);
  Tableau tab(sf, opt);
  LpSolution sol;

  bool has_artificial = std::any_of(sf.artificial.begin(), sf.artificial.end(),
                                    [](char c) { return c != 0; });
  if (has_artificial) {
    std::vector<Real> phase1(sf.cols, 0);
    for (std::size_t j = 0; j < sf.cols; ++j) phase1[j] = sf.artificial[j] ? 1 : 0;
    tab.run(phase1, std::vector<char>(sf.cols, 1));
    Real infeas = 0;
    for (std::size_t i = 0; i < sf.rows; ++i) {
      if (sf.artificial[tab.basic(i)]) infeas += tab.value(i);
    }
    if (log_level() >= 3) std::clog << "[lp] phase 1 residual " << static_cast<double>(infeas) << "\n";
    if (infeas > opt.feasibility * tab.feasibility_scale()) {
      sol.status = Status::Infeasible;
      sol.objective = std::numeric_limits<double>::quiet_NaN();
      sol.iterations = tab.iterations();
      if (log_level() >= 1) {
        std::clog << "[lp] infeasible after " << sol.iterations << " iterations\n";
      }
      return sol;
    }
    tab.drive_out_artificials();
  }

  std::vector<char> eligible(sf.cols);
  for (std::size_t j = 0; j < sf.cols; ++j) eligible[j] = sf.artificial[j] ? 0 : 1;

  const double inf = std::numeric_limits<double>::infinity();
  const double unbounded_value = lp.sense == Sense::Maximize ? inf : -inf;

  if (tab.run(sf.cost, eligible) == Tableau::Outcome::Unbounded) {
    sol.status = Status::Unbounded;
    sol.objective = unbounded_value;
    sol.primal = recover_primal(sf, tab, lp.num_vars());
    sol.iterations = tab.iterations();
    if (log_level() >= 1) {
      std::clog << "[lp] unbounded after " << sol.iterations << " iterations\n";
    }
    return sol;
  }

  if (lexicographic) {
    // Freeze every nonbasic column whose primary reduced cost is positive;
    // pivots on the remaining columns keep the primary objective fixed.
    const auto d = tab.reduced_costs(sf.cost);
    const Real thresh = opt.optimality * sf.cost_scale;
    std::vector<char> face(eligible);
    for (std::size_t j = 0; j < sf.cols; ++j) {
      if (!tab.in_basis(j) && d[j] > thresh) face[j] = 0;
    }
    const auto cost2 = min_form_cost(lp, secondary, sf);
    // Face pivots enter columns with zero primary reduced cost, so the basis
    // stays optimal for the primary objective even when this stage is
    // unbounded.
    if (tab.run(cost2, face) == Tableau::Outcome::Unbounded) {
      sol.secondary_objective = unbounded_value;
    }
  }

  sol.status = Status::Optimal;
  sol.primal = recover_primal(sf, tab, lp.num_vars());
  sol.objective = dot(lp.cost, sol.primal);
  if (lexicographic && !sol.secondary_objective) {
    sol.secondary_objective = dot(secondary, sol.primal);
  }

  const auto y = tab.duals(sf.cost);
  const Real dir = lp.sense == Sense::Maximize ? -1 : 1;
  sol.dual.resize(sf.rows);
  for (std::size_t i = 0; i < sf.rows; ++i) {
    sol.dual[i] = static_cast<double>(dir * sf.row_sign[i] * y[i]);
  }
  sol.iterations = tab.iterations();
  if (log_level() >= 1) {
    std::clog << "[lp] optimal " << sol.objective << " after " << sol.iterations
              << " iterations\n";
  }
  return sol;
}

}  // namespace

LinearProgram::LinearProgram(Sense s, std::size_t num_vars)
    : sense(s), cost(num_vars, 0.0), domains(num_vars, Domain::NonNegative) {}

std::size_t LinearProgram::add_row(std::vector<double> coeffs, Relation rel, double rhs) {
  rows.push_back(Row{std::move(coeffs), rel, rhs});
  return rows.size() - 1;
}

void LinearProgram::validate() const {
  if (cost.empty()) throw InputError("lp: program has no variables");
  if (rows.empty()) throw InputError("lp: program has no rows");
  if (domains.size() != cost.size()) {
    throw InputError("lp: domain count does not match variable count");
  }
  check_finite(cost, "cost coefficient");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].coeffs.size() != cost.size()) {
      throw InputError("lp: row " + std::to_string(i) + " has " +
                       std::to_string(rows[i].coeffs.size()) + " coefficients, expected " +
                       std::to_string(cost.size()));
    }
    check_finite(rows[i].coeffs, "row coefficient");
    if (!std::isfinite(rows[i].rhs)) throw InputError("lp: non-finite right-hand side");
  }
}

LpSolution solve(const LinearProgram& lp, const SolverOptions& options) {
  return solve_impl(lp, {}, false, options);
}

LpSolution solve_lexicographic(const LinearProgram& lp, std::span<const double> secondary_cost,
                               const SolverOptions& options) {
  return solve_impl(lp, secondary_cost, true, options);
}

double max_violation(const LinearProgram& lp, std::span<const double> x) {
  double worst = 0;
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    if (lp.domains[j] == Domain::NonNegative) worst = std::max(worst, -x[j]);
  }
  for (const Row& row : lp.rows) {
    const double lhs = dot(row.coeffs, x);
    switch (row.relation) {
      case Relation::LessEqual: worst = std::max(worst, lhs - row.rhs); break;
      case Relation::GreaterEqual: worst = std::max(worst, row.rhs - lhs); break;
      case Relation::Equal: worst = std::max(worst, std::fabs(lhs - row.rhs)); break;
    }
  }
  return worst;
}

double dual_objective(const LinearProgram& lp, std::span<const double> y) {
  Real acc = 0;
  for (std::size_t i = 0; i < lp.num_rows(); ++i) acc += static_cast<Real>(lp.rows[i].rhs) * y[i];
  return static_cast<double>(acc);
}

void write_lp(std::ostream& out, const LinearProgram& lp) {
  const auto old = out.precision(17);
  out << "sense " << (lp.sense == Sense::Maximize ? "max" : "min") << '\n';
  out << "vars " << lp.num_vars() << '\n';
  out << "cost";
  for (double c : lp.cost) out << ' ' << c;
  out << '\n';
  bool any_free = false;
  for (std::size_t j = 0; j < lp.domains.size(); ++j) {
    if (lp.domains[j] != Domain::Free) continue;
    if (!any_free) out << "free";
    any_free = true;
    out << ' ' << j;
  }
  if (any_free) out << '\n';
  for (const Row& row : lp.rows) {
    const char* rel = row.relation == Relation::LessEqual  ? "<="
                      : row.relation == Relation::Equal    ? "="
                                                           : ">=";
    out << "row " << rel << ' ' << row.rhs << " :";
    for (double a : row.coeffs) out << ' ' << a;
    out << '\n';
  }
  out.precision(old);
}

const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
  }
  return "?";
}

}  // namespace dea::lp
