#pragma once

// Reader for the subset of fixed-format MPS that maps onto MblpInstance:
// ROWS / COLUMNS / RHS / BOUNDS, integer columns between INTORG/INTEND markers
// with bounds [0,1], continuous columns with bounds [0, ybar], ybar finite.
// Names must not contain blanks. Equality rows become two "<=" rows.

#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dccut/instance.hpp"
#include "dccut/instance_io.hpp"

namespace dccut {

class UnsupportedFeature : public ParseError {
 public:
  UnsupportedFeature(int line, std::string section, const std::string& detail = {})
      : ParseError(line, "unsupported feature in section " + section +
                             (detail.empty() ? std::string() : ": " + detail)),
        section_(std::move(section)) {}
  const std::string& section() const { return section_; }

 private:
  std::string section_;
};

inline MblpInstance read_mps(std::string_view text) {
  enum class Section { none, name, rows, columns, rhs, bounds, done };
  struct Column {
    std::string name;
    bool integer = false;
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    bool upper_set = false;
    std::map<int, double> entries;  // row index -> coefficient
    double cost = 0.0;
    int line = 0;
  };

  std::string problem_name;
  std::string objective_row;
  std::vector<std::string> row_names;
  std::vector<char> row_type;
  std::unordered_map<std::string, int> row_index;
  std::vector<Column> columns;
  std::unordered_map<std::string, int> column_index;
  std::vector<double> rhs;
  bool in_integer_block = false;
  Section section = Section::none;

  auto find_row = [&](std::string_view name, int line) -> int {
    if (name == objective_row) return -1;
    auto it = row_index.find(std::string(name));
    if (it == row_index.end()) throw ParseError(line, "unknown row '" + std::string(name) + "'");
    return it->second;
  };
  auto find_column = [&](std::string_view name, int line) -> Column& {
    auto it = column_index.find(std::string(name));
    if (it == column_index.end())
      throw ParseError(line, "unknown column '" + std::string(name) + "'");
    return columns[it->second];
  };

  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.empty() || line[0] == '*') continue;
    const auto toks = detail::split_tokens(line);
    if (toks.empty()) continue;

    const bool header = line[0] != ' ' && line[0] != '\t';
    if (header) {
      const std::string_view key = toks[0];
      if (key == "NAME") {
        section = Section::name;
        if (toks.size() > 1) problem_name = std::string(toks[1]);
      } else if (key == "ROWS") {
        section = Section::rows;
      } else if (key == "COLUMNS") {
        section = Section::columns;
      } else if (key == "RHS") {
        section = Section::rhs;
        rhs.assign(row_names.size(), 0.0);
      } else if (key == "BOUNDS") {
        section = Section::bounds;
      } else if (key == "ENDATA") {
        section = Section::done;
        break;
      } else {
        throw UnsupportedFeature(line_no, std::string(key));
      }
      continue;
    }

    switch (section) {
      case Section::rows: {
        if (toks.size() != 2) throw ParseError(line_no, "ROWS entry needs type and name");
        const std::string_view type = toks[0];
        const std::string name(toks[1]);
        if (type == "N") {
          if (objective_row.empty()) objective_row = name;
          // Additional free rows carry no constraint.
          continue;
        }
        if (type != "L" && type != "G" && type != "E")
          throw ParseError(line_no, "invalid row type '" + std::string(type) + "'");
        row_index[name] = static_cast<int>(row_names.size());
        row_names.push_back(name);
        row_type.push_back(type[0]);
        break;
      }
      case Section::columns: {
        if (toks.size() >= 3 && (toks[1] == "'MARKER'" || toks[1] == "MARKER")) {
          const std::string_view marker = toks.back();
          if (marker == "'INTORG'") in_integer_block = true;
          else if (marker == "'INTEND'") in_integer_block = false;
          else throw ParseError(line_no, "unknown marker '" + std::string(marker) + "'");
          continue;
        }
        if (toks.size() != 3 && toks.size() != 5)
          throw ParseError(line_no, "COLUMNS entry needs name and one or two row/value pairs");
        const std::string name(toks[0]);
        auto it = column_index.find(name);
        if (it == column_index.end()) {
          it = column_index.emplace(name, static_cast<int>(columns.size())).first;
          Column col;
          col.name = name;
          col.integer = in_integer_block;
          col.line = line_no;
          if (col.integer) {
            col.upper = 1.0;
          }
          columns.push_back(std::move(col));
        }
        Column& col = columns[it->second];
        for (std::size_t k = 1; k + 1 < toks.size(); k += 2) {
          const double value = detail::parse_number(toks[k + 1], line_no);
          const int r = find_row(toks[k], line_no);
          if (r < 0) col.cost += value;
          else col.entries[r] += value;
        }
        break;
      }
      case Section::rhs: {
        // Optional leading RHS-set name.
        const std::size_t first = toks.size() % 2 == 1 ? 1 : 0;
        for (std::size_t k = first; k + 1 < toks.size(); k += 2) {
          const double value = detail::parse_number(toks[k + 1], line_no);
          const int r = find_row(toks[k], line_no);
          if (r < 0) {
            if (value != 0.0) throw UnsupportedFeature(line_no, "RHS", "objective constant");
            continue;
          }
          rhs[r] = value;
        }
        break;
      }
      case Section::bounds: {
        if (toks.size() < 3) throw ParseError(line_no, "BOUNDS entry too short");
        const std::string_view type = toks[0];
        Column& col = find_column(toks[2], line_no);
        const bool has_value = toks.size() >= 4;
        const double value = has_value ? detail::parse_number(toks[3], line_no) : 0.0;
        if (type == "UP") {
          col.upper = value;
          col.upper_set = true;
        } else if (type == "LO") {
          col.lower = value;
        } else if (type == "FX") {
          col.lower = value;
          col.upper = value;
          col.upper_set = true;
        } else if (type == "BV") {
          col.integer = true;
          col.lower = 0.0;
          col.upper = 1.0;
          col.upper_set = true;
        } else if (type == "PL") {
          col.upper = std::numeric_limits<double>::infinity();
        } else {
          throw UnsupportedFeature(line_no, "BOUNDS", "bound type " + std::string(type));
        }
        if (!has_value && type != "BV" && type != "PL")
          throw ParseError(line_no, "bound without value");
        break;
      }
      case Section::name:
      case Section::none:
      case Section::done:
        throw ParseError(line_no, "data line outside of a section");
    }
  }
  if (section != Section::done) throw ParseError(line_no, "missing ENDATA");
  if (rhs.empty()) rhs.assign(row_names.size(), 0.0);

  std::vector<int> binaries, continuous;
  for (int j = 0; j < static_cast<int>(columns.size()); ++j) {
    const Column& col = columns[j];
    if (col.integer) {
      if (col.lower != 0.0 || col.upper != 1.0)
        throw UnsupportedFeature(col.line, "COLUMNS",
                                 "general integer column '" + col.name + "' (bounds must be [0,1])");
      binaries.push_back(j);
    } else {
      if (col.lower != 0.0)
        throw UnsupportedFeature(col.line, "BOUNDS",
                                 "nonzero lower bound on continuous column '" + col.name + "'");
      if (!std::isfinite(col.upper) || col.upper < 0.0)
        throw UnsupportedFeature(col.line, "BOUNDS",
                                 "continuous column '" + col.name + "' needs a finite upper bound");
      continuous.push_back(j);
    }
  }
  if (binaries.empty()) throw ParseError(line_no, "model has no binary column");

  int m = 0;
  for (char t : row_type) m += t == 'E' ? 2 : 1;
  const int n = static_cast<int>(binaries.size());
  const int q = static_cast<int>(continuous.size());
  Vector c(n), d(q), b(m), ybar(q);
  Matrix A = Matrix::Zero(m, n), B = Matrix::Zero(m, q);

  std::vector<int> first_out(row_type.size());
  for (int r = 0, out = 0; r < static_cast<int>(row_type.size()); ++r) {
    first_out[r] = out;
    const double sign = row_type[r] == 'G' ? -1.0 : 1.0;
    b[out] = sign * rhs[r];
    if (row_type[r] == 'E') b[out + 1] = -rhs[r];
    out += row_type[r] == 'E' ? 2 : 1;
  }
  auto place = [&](const Column& col, Matrix& target, int jj) {
    for (const auto& [r, value] : col.entries) {
      const int out = first_out[r];
      const double sign = row_type[r] == 'G' ? -1.0 : 1.0;
      target(out, jj) = sign * value;
      if (row_type[r] == 'E') target(out + 1, jj) = -value;
    }
  };
  for (int jj = 0; jj < n; ++jj) {
    c[jj] = columns[binaries[jj]].cost;
    place(columns[binaries[jj]], A, jj);
  }
  for (int jj = 0; jj < q; ++jj) {
    d[jj] = columns[continuous[jj]].cost;
    ybar[jj] = columns[continuous[jj]].upper;
    place(columns[continuous[jj]], B, jj);
  }
  return MblpInstance(std::move(c), std::move(d), std::move(A), std::move(B), std::move(b),
                      std::move(ybar), problem_name);
}

}  // namespace dccut
