#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "dea/dataset.hpp"
#include "dea/directional.hpp"
#include "dea/tolerances.hpp"

/// Dataset files, direction grids, report tables and the command layer used
/// by the `dea` executable.
namespace dea::io {

/// Parses a CSV dataset: the first column holds DMU labels, the other header
/// cells are "in:<name>" or "out:<name>". Throws InputError with the file
/// name and row/column for malformed content.
Dataset parse_dataset(std::istream& in, const std::string& source = "<input>");
Dataset load_dataset(const std::string& path);

/// "diag" or "omega=a,b|delta=c,d" entries separated by ';'. A spec starting
/// with '@' names a file holding one entry per line ('#' starts a comment).
/// When `delta=` is omitted the output weights default to all ones. Throws
/// InputError on arity mismatch, negative components or all-zero vectors.
std::vector<directional::Direction> parse_direction_grid(std::string_view spec, std::size_t m,
                                                          std::size_t s);

/// "all", an exact label, or a 1-based index. Labels win over indices.
std::vector<std::size_t> select_dmus(const Dataset& d, std::string_view selector);

enum class Format { Csv, Tsv, Markdown };

Format parse_format(std::string_view name);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// CSV cells are quoted when needed; TSV replaces tabs and newlines in cells
/// with spaces; Markdown emits a pipe table.
void write_table(std::ostream& out, const Table& table, Format format);

struct RunConfig {
  Tolerances tol{};
  directional::StepConfig steps{};
  directional::Method method = directional::Method::Both;
  Format format = Format::Csv;
  bool full_precision = false;
  bool with_fgl = false;
  bool with_ctt = false;
};

/// Formats with `decimals` places, or the shortest round-trip form when
/// full_precision is set. Infinities render as "+inf" / "-inf".
std::string format_number(double v, int decimals, bool full_precision);

/// label, theta, pi, phi.
Table cmd_efficiency(const Dataset& d, const std::vector<std::size_t>& dmus,
                     const RunConfig& config);

/// cmd_efficiency columns plus congested, classification, rho_bar, projected,
/// and optional FGL / CTT columns.
Table cmd_congestion(const Dataset& d, const std::vector<std::size_t>& dmus,
                     const RunConfig& config);

struct DirectionalReport {
  Table table;
  /// Number of rows that carry an error.
  std::size_t errors = 0;
  /// True when every error is an input error.
  bool only_input_errors = true;
};

/// One row per (DMU, direction): dmu, omega components, xi, psi, rho_lower,
/// rho_upper, right, left, note.
DirectionalReport cmd_directional(const Dataset& d, const std::vector<std::size_t>& dmus,
                                  const std::vector<directional::Direction>& grid,
                                  const RunConfig& config);

/// Per-DMU verdict tally over the grid: directions analysed, right and left
/// congestion counts, no-data counts and errors.
DirectionalReport cmd_sweep(const Dataset& d, const std::vector<std::size_t>& dmus,
                            const std::vector<directional::Direction>& grid,
                            const RunConfig& config);

}  // namespace dea::io
