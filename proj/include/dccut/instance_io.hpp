#pragma once

// Canonical text format:
//
//   mblp <n> <q> <m>
//   c    <n values>
//   d    <q values>
//   b    <m values>
//   ybar <q values>
//   sense <m tokens of "<=" or ">=">      (optional, default all "<=")
//   <m row lines: n A-entries followed by q B-entries>
//
// '#' starts a comment. Rows declared ">=" are negated into "<=" form on parse.

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "dccut/instance.hpp"

namespace dccut {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

namespace detail {

inline std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline double parse_number(std::string_view tok, int line) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(line, "non-numeric token '" + std::string(tok) + "'");
  return value;
}

inline int parse_count(std::string_view tok, int line, const char* what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || value < 0)
    throw ParseError(line, std::string("invalid ") + what + " '" + std::string(tok) + "'");
  return value;
}

inline void append_number(std::string& out, double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

}  // namespace detail

inline MblpInstance parse_instance(std::string_view text) {
  using detail::parse_number;
  int n = -1, q = -1, m = -1;
  Vector c, d, b, ybar;
  Matrix A, B;
  std::vector<bool> seen(5, false);  // c, d, b, ybar, sense
  std::vector<bool> geq;
  int rows_read = 0;
  int header_line = 0;

  auto read_vector = [&](const std::vector<std::string_view>& toks, int expected, int line,
                         const char* name) {
    if (static_cast<int>(toks.size()) - 1 != expected)
      throw ParseError(line, std::string("'") + name + "' expects " + std::to_string(expected) +
                                 " values, got " + std::to_string(toks.size() - 1));
    Vector v(expected);
    for (int i = 0; i < expected; ++i) v[i] = parse_number(toks[i + 1], line);
    return v;
  };

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto toks = detail::split_tokens(line);
    if (toks.empty()) {
      if (end == text.size()) break;
      continue;
    }

    if (n < 0) {
      if (toks[0] != "mblp" || toks.size() != 4)
        throw ParseError(line_no, "expected header 'mblp <n> <q> <m>'");
      n = detail::parse_count(toks[1], line_no, "n");
      q = detail::parse_count(toks[2], line_no, "q");
      m = detail::parse_count(toks[3], line_no, "m");
      if (n < 1) throw ParseError(line_no, "n must be at least 1");
      A = Matrix::Zero(m, n);
      B = Matrix::Zero(m, q);
      geq.assign(m, false);
      header_line = line_no;
    } else if (toks[0] == "c" || toks[0] == "d" || toks[0] == "b" || toks[0] == "ybar" ||
               toks[0] == "sense") {
      const std::string_view key = toks[0];
      const int slot = key == "c" ? 0 : key == "d" ? 1 : key == "b" ? 2 : key == "ybar" ? 3 : 4;
      if (seen[slot]) throw ParseError(line_no, "duplicate '" + std::string(key) + "' line");
      seen[slot] = true;
      if (slot == 0) c = read_vector(toks, n, line_no, "c");
      if (slot == 1) d = read_vector(toks, q, line_no, "d");
      if (slot == 2) b = read_vector(toks, m, line_no, "b");
      if (slot == 3) {
        ybar = read_vector(toks, q, line_no, "ybar");
        for (int j = 0; j < q; ++j)
          if (!(ybar[j] >= 0.0)) throw ParseError(line_no, "negative ybar entry at index " + std::to_string(j));
      }
      if (slot == 4) {
        if (static_cast<int>(toks.size()) - 1 != m)
          throw ParseError(line_no, "'sense' expects " + std::to_string(m) + " tokens");
        for (int i = 0; i < m; ++i) {
          if (toks[i + 1] == "<=" || toks[i + 1] == "L") geq[i] = false;
          else if (toks[i + 1] == ">=" || toks[i + 1] == "G") geq[i] = true;
          else throw ParseError(line_no, "invalid sense token '" + std::string(toks[i + 1]) + "'");
        }
      }
    } else {
      if (rows_read >= m)
        throw ParseError(line_no, "more than m=" + std::to_string(m) + " constraint rows");
      if (static_cast<int>(toks.size()) != n + q)
        throw ParseError(line_no, "row " + std::to_string(rows_read) + " has " +
                                      std::to_string(toks.size()) + " entries, expected n+q=" +
                                      std::to_string(n + q));
      for (int j = 0; j < n; ++j) A(rows_read, j) = parse_number(toks[j], line_no);
      for (int j = 0; j < q; ++j) B(rows_read, j) = parse_number(toks[n + j], line_no);
      ++rows_read;
    }
    if (end == text.size()) break;
  }

  if (n < 0) throw ParseError(line_no, "missing 'mblp' header");
  const char* names[] = {"c", "d", "b", "ybar"};
  for (int s = 0; s < 4; ++s) {
    if (seen[s]) continue;
    // Empty vectors may be omitted.
    const int len = s == 0 ? n : s == 1 ? q : s == 2 ? m : q;
    if (len != 0) throw ParseError(line_no, std::string("missing '") + names[s] + "' line");
    if (s == 1) d = Vector(0);
    if (s == 2) b = Vector(0);
    if (s == 3) ybar = Vector(0);
  }
  if (rows_read != m)
    throw ParseError(line_no, "expected " + std::to_string(m) + " constraint rows, found " +
                                  std::to_string(rows_read));
  for (int i = 0; i < m; ++i) {
    if (!geq[i]) continue;
    A.row(i) *= -1.0;
    B.row(i) *= -1.0;
    b[i] = -b[i];
  }
  try {
    return MblpInstance(std::move(c), std::move(d), std::move(A), std::move(B), std::move(b),
                        std::move(ybar));
  } catch (const std::invalid_argument& e) {
    throw ParseError(header_line, e.what());
  }
}

/// Writes the normalized ("<=") form; shortest round-trip decimal for every value.
inline std::string serialize_instance(const MblpInstance& inst) {
  std::string out;
  if (!inst.name().empty()) out += "# " + inst.name() + "\n";
  out += "mblp " + std::to_string(inst.n()) + " " + std::to_string(inst.q()) + " " +
         std::to_string(inst.m()) + "\n";
  auto line = [&](const char* key, const Vector& v) {
    out += key;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      out += ' ';
      detail::append_number(out, v[i]);
    }
    out += '\n';
  };
  line("c", inst.c());
  line("d", inst.d());
  line("b", inst.b());
  line("ybar", inst.ybar());
  for (int i = 0; i < inst.m(); ++i) {
    for (int j = 0; j < inst.n(); ++j) {
      if (j) out += ' ';
      detail::append_number(out, inst.A()(i, j));
    }
    for (int j = 0; j < inst.q(); ++j) {
      out += ' ';
      detail::append_number(out, inst.B()(i, j));
    }
    out += '\n';
  }
  return out;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace dccut
