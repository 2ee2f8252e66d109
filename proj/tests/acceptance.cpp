// Acceptance checks. Each criterion prints exactly one PASS or FAIL line on
// stdout; mismatch details go to stderr.
//
//   acceptance --criterion N     run one criterion (exit 1 on FAIL)
//   acceptance                   run all of them

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dea/classic.hpp"
#include "dea/directional.hpp"
#include "support/fixtures.hpp"
#include "support/oracle.hpp"

using namespace dea;
using namespace dea::directional;

namespace {

struct Outcome {
  bool pass = true;
  std::string summary;
};

// Collects mismatches; the first few are printed in full.
class Audit {
 public:
  void fail(const std::string& what) {
    if (++failures_ <= 20) std::cerr << "  mismatch: " << what << '\n';
  }
  void expect(bool ok, const std::string& what) {
    if (!ok) fail(what);
  }
  void near(double got, double want, double tol, const std::string& what) {
    if (!(std::abs(got - want) <= tol)) {
      std::ostringstream s;
      s << what << ": got " << got << ", expected " << want << " +/- " << tol;
      fail(s.str());
    }
  }
  int failures() const { return failures_; }

 private:
  int failures_ = 0;
};

std::string str(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string yes_no(bool b) { return b ? "Yes" : "No"; }

// Published efficiency table: pi, theta, phi, label per DMU.
struct Published {
  double pi, theta, phi;
  const char* label;
};

const Published kPublishedClassic[] = {
    {1, 1, 1, "No"},
    {1, 1, 1, "No"},
    {1.1835, 1.4227, 0.8319, "Weak"},
    {1, 1, 1, "No"},
    {1.9684, 1.9684, 1, "No"},
    {1.6499, 1.6499, 1, "No"},
    {1.0437, 1.0437, 1, "No"},
    {1, 1.9021, 0.5257, "Weak"},
    {1, 1.2755, 0.7840, "Strong"},
    {1, 1.5997, 0.6251, "Strong"},
    {1, 2.1876, 0.4571, "Weak"},
    {1.4478, 2.1500, 0.6734, "Strong"},
    {1, 1, 1, "No"},
    {1, 1, 1, "No"},
    {1, 1.1274, 0.8870, "Weak"},
    {1.3371, 1.4111, 0.9476, "Strong"},
};

// Published directional table, one row per omega of table3_omegas().
struct Published3 {
  double xi, psi;
  const char* right;
  const char* left;
};

const Published3 kPublishedDmu1[] = {
    {0.07, 4.64, "No", "No"},   {0.12, 5.23, "No", "No"},   {0.17, 7.32, "No", "No"},
    {0.15, 9.41, "No", "No"},   {0.14, 10.46, "No", "No"},  {0.12, 11.51, "No", "No"},
    {0.10, 13.60, "No", "No"},  {0.07, 15.69, "No", "No"},  {0.04, 17.78, "No", "No"},
};

const Published3 kPublishedDmu15[] = {
    {2.05, 6.71, "No", "No"},   {1.72, 5.03, "No", "No"},   {1.09, 3.35, "No", "No"},
    {0.37, 1.67, "No", "No"},   {0.0, 1.13, "No", "No"},    {-0.55, 0.85, "Yes", "No"},
    {-1.74, 0.50, "Yes", "No"}, {-3.40, 0.16, "Yes", "No"}, {-5.06, -0.18, "Yes", "Yes"},
};

Outcome criterion1() {
  const auto start = std::chrono::steady_clock::now();
  const auto d = testing::cas2010();
  Audit a;
  int labels = 0;
  for (std::size_t j = 0; j < d.size(); ++j) {
    const auto r = classify_congestion(d, j);
    const auto& p = kPublishedClassic[j];
    const std::string who = d.label(j);
    a.near(r.theta, p.theta, 1e-3, who + " theta");
    a.near(r.pi, p.pi, 1e-3, who + " pi");
    a.near(r.phi, p.phi, 1e-3, who + " phi");
    const std::string label(to_string(r.classification));
    if (label == p.label) {
      ++labels;
    } else {
      a.fail(who + " label " + label + ", expected " + p.label);
    }
  }
  const double secs = seconds_since(start);
  a.expect(secs < 5, "runtime " + str(secs) + " s");
  return {a.failures() == 0, "published classic values and labels (" + std::to_string(labels) +
                                 "/16 labels match, " + str(secs) + " s)"};
}

Outcome criterion2() {
  const auto d = testing::cas2010();
  Audit a;
  const auto r = classify_congestion(d, 14);
  a.near(r.theta, 1.1274, 1e-3, "DMU15 theta");
  a.expect(r.rho_bar.has_value(), "DMU15 rho_bar missing");
  if (r.rho_bar) a.near(*r.rho_bar, 1.1266, 1e-3, "DMU15 rho_bar");
  return {a.failures() == 0, "DMU15 theta = " + str(r.theta) +
                                 ", rho_bar = " + (r.rho_bar ? str(*r.rho_bar) : "none")};
}

Outcome criterion3() {
  const auto start = std::chrono::steady_clock::now();
  const auto d = testing::cas2010();
  const auto grid = testing::table3_grid();
  Audit a;
  int verdicts = 0;
  for (auto [dmu, table] : {std::pair{std::size_t{0}, kPublishedDmu1},
                            std::pair{std::size_t{14}, kPublishedDmu15}}) {
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto [w1, w2] = testing::table3_omegas()[k];
      const std::string cell = d.label(dmu) + " omega (" + str(w1) + ", " + str(w2) + ")";
      const auto& p = table[k];
      const auto r = analyze(d, dmu, grid[k]);
      if (!r.xi || !r.psi || !r.rho_lower || !r.rho_upper) {
        a.fail(cell + " has a no-data side");
        continue;
      }
      a.near(*r.xi, p.xi, 0.01, cell + " xi");
      a.near(*r.psi, p.psi, 0.01, cell + " psi");
      a.near(*r.rho_lower, p.xi, 0.01, cell + " rho_lower");
      a.near(*r.rho_upper, p.psi, 0.01, cell + " rho_upper");
      const auto right = yes_no(r.right_congested), left = yes_no(r.left_congested);
      verdicts += (right == p.right) + (left == p.left);
      a.expect(right == p.right, cell + " right verdict " + right);
      a.expect(left == p.left, cell + " left verdict " + left);
    }
  }
  const double secs = seconds_since(start);
  a.expect(secs < 10, "runtime " + str(secs) + " s");
  return {a.failures() == 0, "published directional values and verdicts (" + std::to_string(verdicts) +
                                 "/36 verdicts match, " + str(secs) + " s)"};
}

// Every DMU of 200 seeded random datasets, each with one random direction.
struct RandomCase {
  Dataset data;
  std::size_t dmu;
  Direction dir;
};

std::vector<RandomCase> random_suite() {
  testing::Random rnd(2024);
  std::vector<RandomCase> out;
  for (int k = 0; k < 200; ++k) {
    const auto d = testing::random_small_dataset(rnd);
    for (std::size_t j = 0; j < d.size(); ++j) {
      out.push_back({d, j, testing::random_direction(rnd, d.num_inputs(), d.num_outputs())});
    }
  }
  return out;
}

Outcome criterion4() {
  Audit a;
  int compared = 0;
  auto check = [&](const Dataset& d, std::size_t j, const Direction& dir, const std::string& who) {
    try {
      const auto r = analyze(d, j, dir);
      if (r.xi && r.rho_lower && std::isfinite(*r.rho_lower)) {
        a.near(*r.xi, *r.rho_lower, 1e-6, who + " xi vs rho_lower");
        ++compared;
      }
      if (r.psi && r.rho_upper && std::isfinite(*r.rho_upper)) {
        a.near(*r.psi, *r.rho_upper, 1e-6, who + " psi vs rho_upper");
        ++compared;
      }
    } catch (const std::exception& e) {
      a.fail(who + ": " + e.what());
    }
  };
  const auto cas = testing::cas2010();
  const auto grid = testing::table3_grid();
  for (std::size_t dmu : {0u, 14u}) {
    for (std::size_t k = 0; k < grid.size(); ++k) {
      check(cas, dmu, grid[k], cas.label(dmu) + " direction " + std::to_string(k));
    }
  }
  int index = 0;
  for (const auto& c : random_suite()) {
    check(c.data, c.dmu, c.dir, "random case " + std::to_string(index++));
  }
  return {a.failures() == 0, "finite differences equal multiplier bounds (" +
                                 std::to_string(compared) + " comparisons, " +
                                 std::to_string(a.failures()) + " mismatches)"};
}

Outcome criterion5() {
  Audit a;
  int index = 0;
  int dlss = 0, dsss = 0;
  for (const auto& c : random_suite()) {
    const std::string who = "random case " + std::to_string(index++);
    try {
      const auto p = project(c.data, c.dmu);
      const auto b = ulbm_bounds(p.dataset, c.dmu, c.dir);
      const bool l = is_dlss(p.dataset, c.dmu, c.dir), s = is_dsss(p.dataset, c.dmu, c.dir);
      a.expect(b.dlss == l, who + " lower-bound unboundedness vs DLSS");
      a.expect(b.dsss == s, who + " upper-bound unboundedness vs DSSS");
      a.expect(b.dlss == std::isinf(b.lower), who + " lower flag vs value");
      a.expect(b.dsss == std::isinf(b.upper), who + " upper flag vs value");
      dlss += l;
      dsss += s;
    } catch (const std::exception& e) {
      a.fail(who + ": " + e.what());
    }
  }
  return {a.failures() == 0, "bound unboundedness matches scale-size checks (" +
                                 std::to_string(dlss) + " DLSS, " + std::to_string(dsss) +
                                 " DSSS cases)"};
}

Outcome criterion6() {
  testing::Random rnd(99);
  const auto fan = testing::two_input_fan();
  Audit a;
  int strong = 0, left_findings = 0, right_findings = 0;
  for (int k = 0; k < 200; ++k) {
    const auto d = testing::random_dataset(rnd, static_cast<std::size_t>(rnd.integer(3, 8)), 2, 1);
    for (std::size_t j = 0; j < d.size(); ++j) {
      const std::string who = "dataset " + std::to_string(k) + " " + d.label(j);
      try {
        const auto proj = project(d, j);
        const auto cls = classify_congestion(d, j);
        const bool efficient = !proj.moved;

        // Diagonal left congestion versus the Strong label.
        const auto diag = analyze(d, j, Direction::diagonal(2, 1));
        if (efficient) {
          a.expect(diag.left_congested == (cls.classification == Congestion::Strong),
                   who + " diagonal left " + yes_no(diag.left_congested) + ", label " +
                       std::string(to_string(cls.classification)));
          strong += cls.classification == Congestion::Strong;
        }

        bool any_left = false;
        for (const auto& row : sweep(d, j, fan, Method::Fdm)) {
          if (!row.result) {
            a.fail(who + ": " + row.error);
            continue;
          }
          const auto& r = *row.result;
          if (r.left_congested) {
            any_left = true;
            ++left_findings;
            // Contracting inputs raises output: the DMU itself is congested,
            // and an activity using less input makes more output.
            a.expect(classify_congestion(proj.dataset, j).congested,
                     who + " left congestion without classical congestion");
            a.expect(congestion_witness(proj.dataset, j) > 1e-6,
                     who + " left congestion without a dominating activity");
          }
          if (r.right_congested) {
            ++right_findings;
            // Expanding inputs lowers output, so the stepped activity is
            // congested. Its efficiency deficit is of order t, so the step is
            // first widened as far as it stays on the same face.
            double t = *r.t_right;
            auto check = validate_step_right(proj.dataset, j, r.direction, t);
            while (t < 0.5) {
              const auto wider = validate_step_right(proj.dataset, j, r.direction, 2 * t);
              if (!wider.passed) break;
              t *= 2;
              check = wider;
            }
            Point stepped = proj.point;
            for (std::size_t i = 0; i < 2; ++i) stepped.x[i] *= 1 + r.direction.omega()[i] * t;
            stepped.y[0] *= 1 + r.direction.delta()[0] * check.beta;
            const auto grown = proj.dataset.with_appended("stepped", stepped);
            a.expect(classify_congestion(grown, grown.size() - 1).congested,
                     who + " right congestion without classical congestion at the stepped point"
                           " (t = " + str(t) + ")");
          }
        }
        if (efficient && cls.classification == Congestion::None) {
          a.expect(!any_left, who + " uncongested but left-congested in some direction");
        }
      } catch (const std::exception& e) {
        a.fail(who + ": " + e.what());
      }
    }
  }
  return {a.failures() == 0, "scale-elasticity theorems on 200 two-input datasets (" +
                                 std::to_string(strong) + " strong, " +
                                 std::to_string(left_findings) + " left and " +
                                 std::to_string(right_findings) + " right findings, " +
                                 std::to_string(a.failures()) + " violations)"};
}

Outcome criterion7() {
  testing::Random rnd(7);
  Audit a;
  double worst = 0;
  for (int k = 0; k < 50; ++k) {
    const auto d = testing::random_dataset(rnd, static_cast<std::size_t>(rnd.integer(2, 8)), 1,
                                           static_cast<std::size_t>(rnd.integer(1, 3)));
    for (std::size_t j = 0; j < d.size(); ++j) {
      const auto f = fgl_congestion(d, j);
      worst = std::max(worst, std::abs(f.ratio - 1));
      a.near(f.ratio, 1.0, 1e-6, "dataset " + std::to_string(k) + " " + d.label(j));
    }
  }
  return {a.failures() == 0, "single-input weak-disposability ratio is 1 (max deviation " +
                                 str(worst) + ")"};
}

Outcome criterion8() {
  testing::Random rnd(8);
  Audit a;
  int optimal = 0;
  for (int k = 0; k < 500; ++k) {
    const auto p = testing::random_lp(rnd);
    const std::string who = "program " + std::to_string(k);
    try {
      const auto s = lp::solve(p);
      const auto o = testing::vertex_oracle(p);
      a.expect(s.status == o.status, who + " status " + lp::to_string(s.status) + " vs " +
                                         lp::to_string(o.status));
      if (s.optimal() && o.status == lp::Status::Optimal) {
        a.near(s.objective, o.objective, 1e-7, who + " objective");
        ++optimal;
      }
    } catch (const std::exception& e) {
      a.fail(who + ": " + e.what());
    }
  }
  return {a.failures() == 0,
          "500 random programs agree with vertex enumeration (" + std::to_string(optimal) +
              " optimal)"};
}

Outcome criterion9() {
  const auto toy = testing::toy();
  const auto dir = Direction::diagonal(1, 1);
  Audit a;
  const auto ra = analyze(toy, 0, dir), rb = analyze(toy, 1, dir), rc = analyze(toy, 2, dir);
  a.expect(rb.xi.has_value() && rb.psi.has_value(), "B has a no-data side");
  if (rb.xi) a.near(*rb.xi, -2.0 / 3.0, 1e-9, "B right");
  if (rb.psi) a.near(*rb.psi, 4.0 / 3.0, 1e-9, "B left");
  a.expect(rc.psi.has_value(), "C left missing");
  if (rc.psi) a.near(*rc.psi, -1.5, 1e-9, "C left");
  a.expect(rc.dlss && !rc.xi, "C right is not no-data (DLSS)");
  a.expect(ra.dsss && !ra.psi, "A left is not no-data (DSSS)");
  a.expect(ra.xi.has_value(), "A right missing");
  if (ra.xi) a.near(*ra.xi, 2.0, 1e-9, "A right");
  return {a.failures() == 0, "toy frontier goldens"};
}

Outcome criterion10() {
  const auto d = testing::cas2010();
  const auto grid = testing::table3_grid();
  Audit a;
  double worst = 0;
  for (std::size_t dmu : {0u, 14u}) {
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const std::string who = d.label(dmu) + " direction " + std::to_string(k);
      try {
        const auto r = analyze(d, dmu, grid[k], Method::Fdm);
        if (r.xi) {
          StepConfig fine;
          fine.t_initial = *r.t_right / 10;
          const double again = right_fdm(d, dmu, grid[k], fine).value;
          worst = std::max(worst, std::abs(again - *r.xi));
          a.near(again, *r.xi, 1e-6, who + " xi at t/10");
        }
        if (r.psi) {
          StepConfig fine;
          fine.t_initial = *r.t_left / 10;
          const double again = left_fdm(d, dmu, grid[k], fine).value;
          worst = std::max(worst, std::abs(again - *r.psi));
          a.near(again, *r.psi, 1e-6, who + " psi at t/10");
        }
      } catch (const std::exception& e) {
        a.fail(who + ": " + e.what());
      }
    }
  }
  return {a.failures() == 0, "values are stable under a tenfold smaller step (max change " +
                                 str(worst) + ")"};
}

const std::vector<std::function<Outcome()>> kCriteria = {
    criterion1, criterion2, criterion3, criterion4, criterion5,
    criterion6, criterion7, criterion8, criterion9, criterion10};

bool report(int n) {
  Outcome o;
  try {
    o = kCriteria[static_cast<std::size_t>(n - 1)]();
  } catch (const std::exception& e) {
    o = {false, std::string("aborted: ") + e.what()};
  }
  std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << n << ": " << o.summary << std::endl;
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int criterion = 0;
  app.add_option("--criterion", criterion, "criterion number, 1-10 (default: all)")
      ->check(CLI::Range(1, static_cast<int>(kCriteria.size())));
  CLI11_PARSE(app, argc, argv);

  if (criterion != 0) return report(criterion) ? 0 : 1;
  bool all = true;
  for (int n = 1; n <= static_cast<int>(kCriteria.size()); ++n) all = report(n) && all;
  return all ? 0 : 1;
}
