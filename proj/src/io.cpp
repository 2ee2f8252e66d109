#include "dea/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "dea/classic.hpp"
#include "dea/error.hpp"

namespace dea::io {

using directional::Direction;

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

/// Splits one CSV record. Quoted cells may contain commas and doubled quotes
/// but not newlines.
std::vector<std::string> csv_cells(const std::string& line, const std::string& where) {
  std::vector<std::string> cells(1);
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        cells.back() += '"';
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        cells.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.emplace_back();
    } else {
      cells.back() += c;
    }
  }
  if (quoted) throw InputError(where + ": unterminated quoted cell");
  for (auto& cell : cells) cell = std::string(trim(cell));
  return cells;
}

bool parse_double(std::string_view text, double& out) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(out);
}

std::vector<double> parse_vector(std::string_view text, std::string_view what) {
  std::vector<double> out;
  for (auto part : split(text, ',')) {
    double v = 0;
    if (!parse_double(part, v)) {
      throw InputError("direction " + std::string(what) + ": '" + std::string(trim(part)) +
                       "' is not a number");
    }
    out.push_back(v);
  }
  return out;
}

Direction parse_direction(std::string_view entry, std::size_t m, std::size_t s) {
  entry = trim(entry);
  if (entry == "diag") return Direction::diagonal(m, s);
  std::vector<double> omega, delta(s, 1.0);
  bool have_omega = false;
  for (auto part : split(entry, '|')) {
    part = trim(part);
    const auto eq = part.find('=');
    if (eq == std::string_view::npos) {
      throw InputError("direction entry '" + std::string(entry) + "': expected key=values");
    }
    const auto key = trim(part.substr(0, eq));
    const auto values = part.substr(eq + 1);
    if (key == "omega") {
      omega = parse_vector(values, "omega");
      have_omega = true;
    } else if (key == "delta") {
      delta = parse_vector(values, "delta");
    } else {
      throw InputError("direction entry '" + std::string(entry) + "': unknown key '" +
                       std::string(key) + "'");
    }
  }
  if (!have_omega) throw InputError("direction entry '" + std::string(entry) + "' has no omega");
  if (omega.size() != m) {
    throw InputError("direction entry '" + std::string(entry) + "': omega has " +
                     std::to_string(omega.size()) + " components, dataset has " +
                     std::to_string(m) + " inputs");
  }
  if (delta.size() != s) {
    throw InputError("direction entry '" + std::string(entry) + "': delta has " +
                     std::to_string(delta.size()) + " components, dataset has " +
                     std::to_string(s) + " outputs");
  }
  return Direction::normalized(std::move(omega), std::move(delta));
}

std::string fmt(double v, int decimals, const RunConfig& c) {
  return format_number(v, decimals, c.full_precision);
}

std::string yes_no(bool b) { return b ? "Yes" : "No"; }

void append_md_row(std::ostream& out, const std::vector<std::string>& cells) {
  out << '|';
  for (const auto& c : cells) {
    std::string esc;
    for (char ch : c) {
      if (ch == '|') esc += '\\';
      esc += ch == '\n' ? ' ' : ch;
    }
    out << ' ' << esc << " |";
  }
  out << '\n';
}

template <class F>
auto with_label(const Dataset& d, std::size_t dmu, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const InputError& e) {
    throw InputError("DMU '" + d.label(dmu) + "': " + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError("DMU '" + d.label(dmu) + "': " + e.what());
  }
}

bool unit_deltas(const std::vector<Direction>& grid) {
  for (const auto& dir : grid) {
    for (double v : dir.delta()) {
      if (std::abs(v - 1.0) > 1e-12) return false;
    }
  }
  return true;
}

}  // namespace

Dataset parse_dataset(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
      header = csv_cells(line, source + ":" + std::to_string(line_no));
      break;
    }
  }
  if (header.empty()) throw InputError(source + ": file is empty");

  std::vector<std::size_t> in_cols, out_cols;
  std::vector<std::string> in_names, out_names;
  for (std::size_t c = 1; c < header.size(); ++c) {
    const std::string& h = header[c];
    if (h.rfind("in:", 0) == 0) {
      in_cols.push_back(c);
      in_names.push_back(std::string(trim(h.substr(3))));
    } else if (h.rfind("out:", 0) == 0) {
      out_cols.push_back(c);
      out_names.push_back(std::string(trim(h.substr(4))));
    } else {
      throw InputError(source + ": header column " + std::to_string(c + 1) + " '" + h +
                       "' needs an 'in:' or 'out:' prefix");
    }
  }
  if (in_cols.empty()) throw InputError(source + ": no inputs (no 'in:' columns)");
  if (out_cols.empty()) throw InputError(source + ": no outputs (no 'out:' columns)");

  std::vector<std::string> labels;
  std::vector<std::vector<double>> inputs, outputs;
  std::map<std::string, std::size_t> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    const auto cells = csv_cells(line, where);
    if (cells.size() != header.size()) {
      throw InputError(where + ": expected " + std::to_string(header.size()) + " cells, found " +
                       std::to_string(cells.size()));
    }
    if (cells[0].empty()) throw InputError(where + ": empty DMU label");
    if (auto [it, fresh] = seen.emplace(cells[0], line_no); !fresh) {
      throw InputError(where + ": duplicate DMU label '" + cells[0] + "' (first on line " +
                       std::to_string(it->second) + ")");
    }
    auto read = [&](const std::vector<std::size_t>& cols) {
      std::vector<double> v;
      for (std::size_t c : cols) {
        double value = 0;
        if (!parse_double(cells[c], value)) {
          throw InputError(where + ", column '" + header[c] + "': '" + cells[c] +
                           "' is not a number");
        }
        if (value < 0) {
          throw InputError(where + ", column '" + header[c] + "': negative value " + cells[c]);
        }
        v.push_back(value);
      }
      return v;
    };
    labels.push_back(cells[0]);
    inputs.push_back(read(in_cols));
    outputs.push_back(read(out_cols));
  }
  if (labels.empty()) throw InputError(source + ": no DMU rows");
  try {
    return Dataset(std::move(labels), std::move(inputs), std::move(outputs), std::move(in_names),
                   std::move(out_names));
  } catch (const InputError& e) {
    throw InputError(source + ": " + e.what());
  }
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open dataset '" + path + "'");
  return parse_dataset(in, path);
}

std::vector<Direction> parse_direction_grid(std::string_view spec, std::size_t m, std::size_t s) {
  std::vector<Direction> grid;
  spec = trim(spec);
  if (!spec.empty() && spec.front() == '@') {
    const std::string path(trim(spec.substr(1)));
    std::ifstream in(path);
    if (!in) throw InputError("cannot open direction grid '" + path + "'");
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      std::string_view body = line;
      body = trim(body.substr(0, body.find('#')));
      if (body.empty()) continue;
      try {
        for (auto entry : split(body, ';')) {
          if (!trim(entry).empty()) grid.push_back(parse_direction(entry, m, s));
        }
      } catch (const InputError& e) {
        throw InputError(path + ":" + std::to_string(line_no) + ": " + e.what());
      }
    }
  } else {
    for (auto entry : split(spec, ';')) {
      if (!trim(entry).empty()) grid.push_back(parse_direction(entry, m, s));
    }
  }
  if (grid.empty()) throw InputError("direction grid is empty");
  return grid;
}

std::vector<std::size_t> select_dmus(const Dataset& d, std::string_view selector) {
  selector = trim(selector);
  std::vector<std::size_t> out;
  if (selector == "all") {
    for (std::size_t j = 0; j < d.size(); ++j) out.push_back(j);
    return out;
  }
  for (std::size_t j = 0; j < d.size(); ++j) {
    if (d.label(j) == selector) return {j};
  }
  std::size_t index = 0;
  const auto [ptr, ec] = std::from_chars(selector.data(), selector.data() + selector.size(), index);
  if (ec == std::errc() && ptr == selector.data() + selector.size() && index >= 1 &&
      index <= d.size()) {
    return {index - 1};
  }
  throw InputError("no DMU matches '" + std::string(selector) + "' (use a label, 1.." +
                   std::to_string(d.size()) + ", or all)");
}

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::Csv;
  if (name == "tsv") return Format::Tsv;
  if (name == "md" || name == "markdown") return Format::Markdown;
  throw InputError("unknown format '" + std::string(name) + "' (csv, tsv, md)");
}

void write_table(std::ostream& out, const Table& table, Format format) {
  auto emit = [&](const std::vector<std::string>& cells) {
    switch (format) {
      case Format::Csv:
        for (std::size_t k = 0; k < cells.size(); ++k) {
          if (k) out << ',';
          const auto& c = cells[k];
          if (c.find_first_of(",\"\n") != std::string::npos) {
            out << '"';
            for (char ch : c) out << (ch == '"' ? "\"\"" : std::string(1, ch));
            out << '"';
          } else {
            out << c;
          }
        }
        out << '\n';
        break;
      case Format::Tsv:
        for (std::size_t k = 0; k < cells.size(); ++k) {
          if (k) out << '\t';
          for (char ch : cells[k]) out << (ch == '\t' || ch == '\n' ? ' ' : ch);
        }
        out << '\n';
        break;
      case Format::Markdown:
        append_md_row(out, cells);
        break;
    }
  };
  emit(table.header);
  if (format == Format::Markdown) {
    out << '|';
    for (std::size_t k = 0; k < table.header.size(); ++k) out << " --- |";
    out << '\n';
  }
  for (const auto& row : table.rows) emit(row);
}

std::string format_number(double v, int decimals, bool full_precision) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  char buf[64];
  const auto res = full_precision
                       ? std::to_chars(buf, buf + sizeof buf, v)
                       : std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
  std::string s(buf, res.ptr);
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

Table cmd_efficiency(const Dataset& d, const std::vector<std::size_t>& dmus,
                     const RunConfig& config) {
  Table t{{"dmu", "theta", "pi", "phi"}, {}};
  for (std::size_t j : dmus) {
    with_label(d, j, [&] {
      const double theta = bcc_output(d, j, config.tol).theta;
      const double pi = wyts_pte(d, j, config.tol);
      t.rows.push_back({d.label(j), fmt(theta, 4, config), fmt(pi, 4, config),
                        fmt(pi / theta, 4, config)});
    });
  }
  return t;
}

Table cmd_congestion(const Dataset& d, const std::vector<std::size_t>& dmus,
                     const RunConfig& config) {
  Table t{{"dmu", "theta", "pi", "phi", "congested", "classification", "rho_bar", "projected"},
          {}};
  if (config.with_fgl) {
    t.header.push_back("fgl_beta");
    t.header.push_back("fgl_ratio");
  }
  if (config.with_ctt) {
    for (const auto& name : d.input_names()) t.header.push_back("ctt:" + name);
  }
  ClassifyOptions opts{config.with_fgl, config.with_ctt, config.tol};
  for (std::size_t j : dmus) {
    with_label(d, j, [&] {
      const auto rep = classify_congestion(d, j, opts);
      std::vector<std::string> row{d.label(j),
                                   fmt(rep.theta, 4, config),
                                   fmt(rep.pi, 4, config),
                                   fmt(rep.phi, 4, config),
                                   yes_no(rep.congested),
                                   std::string(to_string(rep.classification)),
                                   rep.rho_bar ? fmt(*rep.rho_bar, 4, config) : "",
                                   yes_no(rep.projected)};
      if (rep.fgl) {
        row.push_back(fmt(rep.fgl->beta, 4, config));
        row.push_back(fmt(rep.fgl->ratio, 4, config));
      }
      if (rep.ctt) {
        for (double v : *rep.ctt) row.push_back(fmt(v, 4, config));
      }
      t.rows.push_back(std::move(row));
    });
  }
  return t;
}

DirectionalReport cmd_directional(const Dataset& d, const std::vector<std::size_t>& dmus,
                                  const std::vector<Direction>& grid, const RunConfig& config) {
  DirectionalReport rep;
  Table& t = rep.table;
  const bool show_delta = !unit_deltas(grid);
  t.header.push_back("dmu");
  for (std::size_t i = 0; i < d.num_inputs(); ++i) t.header.push_back("omega" + std::to_string(i + 1));
  if (show_delta) {
    for (std::size_t r = 0; r < d.num_outputs(); ++r) {
      t.header.push_back("delta" + std::to_string(r + 1));
    }
  }
  for (const char* h : {"xi", "psi", "rho_lower", "rho_upper", "right", "left", "note"}) {
    t.header.push_back(h);
  }

  for (std::size_t j : dmus) {
    for (const auto& row : directional::sweep(d, j, grid, config.method, config.steps, config.tol)) {
      std::vector<std::string> cells{d.label(j)};
      for (double w : row.direction.omega()) cells.push_back(fmt(w, 2, config));
      if (show_delta) {
        for (double w : row.direction.delta()) cells.push_back(fmt(w, 2, config));
      }
      if (!row.result) {
        ++rep.errors;
        rep.only_input_errors = rep.only_input_errors && row.input_error;
        for (int k = 0; k < 6; ++k) cells.emplace_back();
        cells.push_back("error: " + row.error);
        t.rows.push_back(std::move(cells));
        continue;
      }
      const auto& r = *row.result;
      const bool fdm = r.method != directional::Method::Ulbm;
      const std::string right_na = "n/a (DLSS)", left_na = "n/a (DSSS)";
      cells.push_back(!fdm ? "" : r.xi ? fmt(*r.xi, 2, config) : right_na);
      cells.push_back(!fdm ? "" : r.psi ? fmt(*r.psi, 2, config) : left_na);
      cells.push_back(r.rho_lower ? fmt(*r.rho_lower, 2, config) : "");
      cells.push_back(r.rho_upper ? fmt(*r.rho_upper, 2, config) : "");
      cells.push_back(r.dlss ? right_na : yes_no(r.right_congested));
      cells.push_back(r.dsss ? left_na : yes_no(r.left_congested));
      std::string note;
      if (r.projected) note = "projected";
      if (r.method == directional::Method::Both && !r.rho_lower) {
        note += note.empty() ? "" : "; ";
        note += "bounds skipped (zero direction weight)";
      }
      cells.push_back(note);
      t.rows.push_back(std::move(cells));
    }
  }
  return rep;
}

DirectionalReport cmd_sweep(const Dataset& d, const std::vector<std::size_t>& dmus,
                            const std::vector<Direction>& grid, const RunConfig& config) {
  DirectionalReport rep;
  rep.table.header = {"dmu",       "directions",   "right_congested", "left_congested",
                      "right_n/a", "left_n/a",     "errors",          "projected"};
  for (std::size_t j : dmus) {
    std::size_t right = 0, left = 0, dlss = 0, dsss = 0, errors = 0;
    bool projected = false;
    for (const auto& row : directional::sweep(d, j, grid, config.method, config.steps, config.tol)) {
      if (!row.result) {
        ++errors;
        rep.only_input_errors = rep.only_input_errors && row.input_error;
        continue;
      }
      const auto& r = *row.result;
      right += r.right_congested;
      left += r.left_congested;
      dlss += r.dlss;
      dsss += r.dsss;
      projected = projected || r.projected;
    }
    rep.errors += errors;
    rep.table.rows.push_back({d.label(j), std::to_string(grid.size()), std::to_string(right),
                              std::to_string(left), std::to_string(dlss), std::to_string(dsss),
                              std::to_string(errors), yes_no(projected)});
  }
  return rep;
}

}  // namespace dea::io
