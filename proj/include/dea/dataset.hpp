#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace dea {

/// An (input, output) activity. Used for projected DMUs and for points that
/// are not observations.
struct Point {
  std::vector<double> x;
  std::vector<double> y;
};

/// n DMUs with m nonnegative inputs and s nonnegative outputs. Immutable once
/// built; every DMU carries at least one positive input and one positive
/// output.
class Dataset {
 public:
  /// `inputs[j]` / `outputs[j]` are the vectors of DMU j. Throws InputError
  /// when an invariant fails.
  Dataset(std::vector<std::string> labels, std::vector<std::vector<double>> inputs,
          std::vector<std::vector<double>> outputs,
          std::vector<std::string> input_names = {},
          std::vector<std::string> output_names = {});

  std::size_t size() const { return labels_.size(); }
  std::size_t num_inputs() const { return input_names_.size(); }
  std::size_t num_outputs() const { return output_names_.size(); }

  double x(std::size_t i, std::size_t j) const { return inputs_[j][i]; }
  double y(std::size_t r, std::size_t j) const { return outputs_[j][r]; }
  std::span<const double> inputs(std::size_t j) const { return inputs_[j]; }
  std::span<const double> outputs(std::size_t j) const { return outputs_[j]; }
  Point point(std::size_t j) const { return {inputs_[j], outputs_[j]}; }

  const std::string& label(std::size_t j) const { return labels_[j]; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::string>& input_names() const { return input_names_; }
  const std::vector<std::string>& output_names() const { return output_names_; }

  /// Copy with DMU j's activity replaced by `p`.
  Dataset with_point(std::size_t j, const Point& p) const;
  /// Copy with one extra DMU appended at index size().
  Dataset with_appended(std::string label, const Point& p) const;

  /// Throws InputError unless dmu < size().
  void check_index(std::size_t dmu) const;

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<double>> inputs_;
  std::vector<std::vector<double>> outputs_;
  std::vector<std::string> input_names_;
  std::vector<std::string> output_names_;
};

}  // namespace dea
