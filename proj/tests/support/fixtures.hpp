#pragma once

// Seeded generators and fixed datasets shared by the unit and acceptance tests.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dea/dataset.hpp"
#include "dea/directional.hpp"
#include "dea/io.hpp"
#include "dea/lp.hpp"

#ifndef DEA_SOURCE_DIR
#error "DEA_SOURCE_DIR must point at the source tree"
#endif

namespace dea::testing {

inline std::string data_path(const std::string& name) {
  return std::string(DEA_SOURCE_DIR) + "/data/" + name;
}

inline Dataset cas2010() { return io::load_dataset(data_path("cas2010.csv")); }

/// One input, one output: A = (1, 1), B = (2, 3), C = (3, 2).
inline Dataset toy() {
  return Dataset({"A", "B", "C"}, {{1}, {2}, {3}}, {{1}, {3}, {2}});
}

inline const std::vector<std::pair<double, double>>& table3_omegas() {
  static const std::vector<std::pair<double, double>> grid = {
      {0.3, 1.7}, {0.5, 1.5}, {0.7, 1.3}, {0.9, 1.1}, {1.0, 1.0},
      {1.1, 0.9}, {1.3, 0.7}, {1.5, 0.5}, {1.7, 0.3}};
  return grid;
}

inline std::vector<directional::Direction> table3_grid() {
  std::vector<directional::Direction> out;
  for (auto [a, b] : table3_omegas()) {
    out.push_back(directional::Direction::normalized({a, b}, {1, 1, 1, 1}));
  }
  return out;
}

class Random {
 public:
  explicit Random(std::uint64_t seed) : rng_(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  /// Uniform on [lo, hi] rounded to `decimals` places.
  double rounded(double lo, double hi, int decimals) {
    const double scale = std::pow(10.0, decimals);
    return std::round(real(lo, hi) * scale) / scale;
  }
  bool chance(double p) { return real(0, 1) < p; }

 private:
  std::mt19937_64 rng_;
};

/// Up to 5 variables and 5 rows with small integer data, so degenerate
/// vertices and ties are common.
inline lp::LinearProgram random_lp(Random& rnd) {
  const std::size_t n = static_cast<std::size_t>(rnd.integer(1, 5));
  const std::size_t rows = static_cast<std::size_t>(rnd.integer(1, 5));
  lp::LinearProgram prog(rnd.chance(0.5) ? lp::Sense::Maximize : lp::Sense::Minimize, n);
  for (std::size_t j = 0; j < n; ++j) {
    prog.cost[j] = rnd.integer(-5, 5);
    if (rnd.chance(0.25)) prog.domains[j] = lp::Domain::Free;
  }
  for (std::size_t i = 0; i < rows; ++i) {
    std::vector<double> a(n);
    for (auto& v : a) v = rnd.chance(0.2) ? 0 : rnd.integer(-5, 5);
    const int rel = rnd.integer(0, 5);
    const auto relation = rel < 3   ? lp::Relation::LessEqual
                          : rel < 5 ? lp::Relation::GreaterEqual
                                    : lp::Relation::Equal;
    prog.add_row(std::move(a), relation, rnd.integer(-10, 10));
  }
  return prog;
}

/// n DMUs with m inputs and s outputs, entries in [1, 10] with one decimal.
inline Dataset random_dataset(Random& rnd, std::size_t n, std::size_t m, std::size_t s) {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> in(n, std::vector<double>(m)), out(n, std::vector<double>(s));
  for (std::size_t j = 0; j < n; ++j) {
    labels.push_back("D" + std::to_string(j + 1));
    for (auto& v : in[j]) v = rnd.rounded(1, 10, 1);
    for (auto& v : out[j]) v = rnd.rounded(1, 10, 1);
  }
  return Dataset(labels, in, out);
}

inline Dataset random_small_dataset(Random& rnd) {
  return random_dataset(rnd, static_cast<std::size_t>(rnd.integer(2, 8)),
                        static_cast<std::size_t>(rnd.integer(1, 3)),
                        static_cast<std::size_t>(rnd.integer(1, 3)));
}

/// Direction with every component in [0.1, 2] before normalization.
inline directional::Direction random_direction(Random& rnd, std::size_t m, std::size_t s) {
  std::vector<double> w(m), d(s);
  for (auto& v : w) v = rnd.rounded(0.1, 2, 2);
  for (auto& v : d) v = rnd.rounded(0.1, 2, 2);
  return directional::Direction::normalized(w, d);
}

/// 21 input directions (k/10, 2 - k/10), k = 0..20, with unit output weight.
inline std::vector<directional::Direction> two_input_fan() {
  std::vector<directional::Direction> out;
  for (int k = 0; k <= 20; ++k) {
    out.push_back(directional::Direction::normalized({k / 10.0, 2 - k / 10.0}, {1.0}));
  }
  return out;
}

}  // namespace dea::testing
