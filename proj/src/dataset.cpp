#include "dea/dataset.hpp"

#include <cmath>
#include <set>

#include "dea/error.hpp"

namespace dea {
namespace {

std::vector<std::string> default_names(std::string_view prefix, std::size_t count) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(std::string(prefix) + std::to_string(k + 1));
  return out;
}

void check_vector(const std::vector<double>& v, std::size_t expected, const std::string& label,
                  const char* kind) {
  if (v.size() != expected) {
    throw InputError("DMU '" + label + "' has " + std::to_string(v.size()) + " " + kind +
                     ", expected " + std::to_string(expected));
  }
  bool positive = false;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!std::isfinite(v[k]) || v[k] < 0) {
      throw InputError("DMU '" + label + "' " + kind + " " + std::to_string(k + 1) +
                       " is negative or not finite");
    }
    positive = positive || v[k] > 0;
  }
  if (!positive) {
    throw InputError("DMU '" + label + "' needs at least one positive entry among its " + kind);
  }
}

}  // namespace

Dataset::Dataset(std::vector<std::string> labels, std::vector<std::vector<double>> inputs,
                 std::vector<std::vector<double>> outputs, std::vector<std::string> input_names,
                 std::vector<std::string> output_names)
    : labels_(std::move(labels)), inputs_(std::move(inputs)), outputs_(std::move(outputs)),
      input_names_(std::move(input_names)), output_names_(std::move(output_names)) {
  if (labels_.empty()) throw InputError("dataset has no DMUs");
  if (inputs_.size() != labels_.size() || outputs_.size() != labels_.size()) {
    throw InputError("dataset: label, input and output counts differ");
  }
  if (input_names_.empty()) input_names_ = default_names("x", inputs_[0].size());
  if (output_names_.empty()) output_names_ = default_names("y", outputs_[0].size());
  if (input_names_.empty()) throw InputError("dataset has no inputs");
  if (output_names_.empty()) throw InputError("dataset has no outputs");

  std::set<std::string> seen;
  for (std::size_t j = 0; j < labels_.size(); ++j) {
    if (!seen.insert(labels_[j]).second) throw InputError("duplicate DMU label '" + labels_[j] + "'");
    check_vector(inputs_[j], input_names_.size(), labels_[j], "inputs");
    check_vector(outputs_[j], output_names_.size(), labels_[j], "outputs");
  }
}

Dataset Dataset::with_point(std::size_t j, const Point& p) const {
  check_index(j);
  auto in = inputs_;
  auto out = outputs_;
  in[j] = p.x;
  out[j] = p.y;
  return Dataset(labels_, std::move(in), std::move(out), input_names_, output_names_);
}

Dataset Dataset::with_appended(std::string label, const Point& p) const {
  auto labels = labels_;
  auto in = inputs_;
  auto out = outputs_;
  labels.push_back(std::move(label));
  in.push_back(p.x);
  out.push_back(p.y);
  return Dataset(std::move(labels), std::move(in), std::move(out), input_names_, output_names_);
}

void Dataset::check_index(std::size_t dmu) const {
  if (dmu >= size()) {
    throw InputError("DMU index " + std::to_string(dmu) + " out of range (n = " +
                     std::to_string(size()) + ")");
  }
}

}  // namespace dea
