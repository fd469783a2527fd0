#pragma once

// Text serialization of covers, the cardinality comparison table, leading
// coefficient fits and SVG rendering.
//
// Cover file format:
//
//   # method=reoriented
//   # delta=0.050000000000000003
//   # dim=2
//   # p=1
//   # count=490
//   lo_1 ... lo_d hi_1 ... hi_d                 (anchored, one bracket per line)
//   ilo_x ilo_y ihi_x ihi_y olo_x olo_y ohi_x ohi_y   (unanchored; inner may be "- - - -")
//
// Numbers are written with 17 significant digits and reparse to the same double.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bracketing/constructions.hpp"
#include "bracketing/geometry.hpp"
#include "bracketing/sequences.hpp"

namespace bracketing {

class parse_error : public std::runtime_error {
 public:
  parse_error(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline void append_number(std::string& out, double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  out.append(buf, static_cast<std::size_t>(n));
}

inline void append_numbers(std::string& out, std::span<const double> vs, bool& first) {
  for (double v : vs) {
    if (!first) out.push_back(' ');
    first = false;
    append_number(out, v);
  }
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
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

inline double parse_double(std::string_view tok, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw parse_error(line, "bad number '" + std::string(tok) + "'");
  return v;
}

inline long long parse_integer(std::string_view tok, std::size_t line) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw parse_error(line, "bad integer '" + std::string(tok) + "'");
  return v;
}

inline double parse_coordinate(std::string_view tok, std::size_t line) {
  const double v = parse_double(tok, line);
  if (!(v >= 0.0 && v <= 1.0)) throw parse_error(line, "coordinate outside [0,1]");
  return v;
}

}  // namespace detail

inline std::string serialize(const Cover& c) {
  std::string out;
  out += "# method=";
  out += to_string(c.method());
  out += "\n# delta=";
  detail::append_number(out, c.delta());
  out += "\n# dim=" + std::to_string(c.dim());
  out += "\n# p=" + (c.p() ? std::to_string(*c.p()) : std::string("-"));
  out += "\n# count=" + std::to_string(c.size()) + "\n";
  if (c.is_anchored()) {
    out.reserve(out.size() + c.size() * 4 * static_cast<std::size_t>(c.dim()) * 24);
    for (std::size_t i = 0; i < c.size(); ++i) {
      bool first = true;
      detail::append_numbers(out, c.lo(i), first);
      detail::append_numbers(out, c.hi(i), first);
      out.push_back('\n');
    }
    return out;
  }
  detail::require(c.dim() == 2, "unanchored serialization is two-dimensional");
  for (const auto& b : c.unanchored_brackets()) {
    bool first = true;
    if (b.inner()) {
      detail::append_numbers(out, b.inner()->lower().coords(), first);
      detail::append_numbers(out, b.inner()->upper().coords(), first);
    } else {
      out += "- - - -";
      first = false;
    }
    detail::append_numbers(out, b.outer().lower().coords(), first);
    detail::append_numbers(out, b.outer().upper().coords(), first);
    out.push_back('\n');
  }
  return out;
}

inline Cover parse(std::string_view doc) {
  std::map<std::string, std::string, std::less<>> header;
  std::vector<std::pair<std::size_t, std::string_view>> body;
  std::size_t line_no = 0;
  while (!doc.empty()) {
    const auto nl = doc.find('\n');
    std::string_view line = doc.substr(0, nl);
    doc = nl == std::string_view::npos ? std::string_view{} : doc.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() != '#') {
      body.emplace_back(line_no, line);
      continue;
    }
    if (!body.empty()) throw parse_error(line_no, "header line after body");
    auto kv = line.substr(1);
    while (!kv.empty() && kv.front() == ' ') kv.remove_prefix(1);
    const auto eq = kv.find('=');
    if (eq == std::string_view::npos) throw parse_error(line_no, "malformed header");
    std::string key(kv.substr(0, eq));
    if (key != "method" && key != "delta" && key != "dim" && key != "p" && key != "count")
      throw parse_error(line_no, "unknown header key '" + key + "'");
    if (!header.emplace(key, std::string(kv.substr(eq + 1))).second)
      throw parse_error(line_no, "duplicate header key '" + key + "'");
  }
  for (const char* key : {"method", "delta", "dim", "p", "count"})
    if (!header.count(key)) throw parse_error(line_no, std::string("missing header '") + key + "'");

  CoverInfo info;
  const auto method = method_from_string(header["method"]);
  if (!method) throw parse_error(1, "unknown method '" + header["method"] + "'");
  info.method = *method;
  info.delta = detail::parse_double(header["delta"], 0);
  const auto dim = detail::parse_integer(header["dim"], 0);
  if (dim < 1 || dim > 64) throw parse_error(0, "dimension out of range");
  info.dim = static_cast<int>(dim);
  if (header["p"] != "-") info.p = static_cast<int>(detail::parse_integer(header["p"], 0));
  const auto count = detail::parse_integer(header["count"], 0);
  if (count < 0 || static_cast<std::size_t>(count) != body.size())
    throw parse_error(line_no, "count=" + header["count"] + " but body has " +
                                   std::to_string(body.size()) + " lines");

  try {
    if (info.method != Method::unanchored) {
      const auto fields = 2 * static_cast<std::size_t>(info.dim);
      std::vector<double> coords;
      coords.reserve(body.size() * fields);
      for (const auto& [ln, line] : body) {
        const auto toks = detail::split_ws(line);
        if (toks.size() != fields)
          throw parse_error(ln, "expected " + std::to_string(fields) + " fields, got " +
                                    std::to_string(toks.size()));
        for (std::size_t k = 0; k < fields; ++k) coords.push_back(detail::parse_coordinate(toks[k], ln));
        const auto* row = coords.data() + coords.size() - fields;
        for (std::size_t k = 0; k < fields / 2; ++k)
          if (row[k] > row[fields / 2 + k]) throw parse_error(ln, "bracket lo exceeds hi");
      }
      return Cover::anchored(info, std::move(coords));
    }

    if (info.dim != 2) throw parse_error(0, "unanchored covers must be two-dimensional");
    std::vector<UnanchoredBracket> brackets;
    brackets.reserve(body.size());
    for (const auto& [ln, line] : body) {
      const auto toks = detail::split_ws(line);
      if (toks.size() != 8)
        throw parse_error(ln, "expected 8 fields, got " + std::to_string(toks.size()));
      const auto point = [&, ln = ln](std::size_t k) {
        return Point{detail::parse_coordinate(toks[k], ln), detail::parse_coordinate(toks[k + 1], ln)};
      };
      std::optional<Box> inner;
      const bool absent = toks[0] == "-";
      for (std::size_t k = 1; k < 4; ++k)
        if ((toks[k] == "-") != absent) throw parse_error(ln, "inner box partly absent");
      if (!absent) inner.emplace(point(0), point(2));
      brackets.emplace_back(std::move(inner), Box(point(4), point(6)));
    }
    return Cover::unanchored(info, std::move(brackets));
  } catch (const std::invalid_argument& e) {
    throw parse_error(0, e.what());
  }
}

// ---------------------------------------------------------------------------
// Comparison table

inline constexpr std::array<Method, 4> kAnchoredMethods{Method::grid, Method::thiemard,
                                                        Method::layered, Method::reoriented};

struct TableRow {
  double delta = 0.0;
  int p = 0;
  std::uint64_t n_grid = 0, n_thiemard = 0, n_layered = 0, n_reoriented = 0;
  /// Per method (grid, thiemard, layered, reoriented): materialized or counted.
  std::array<bool, 4> materialized{};
  double inv_delta_sq = 0.0;
  std::optional<std::string> error;

  std::uint64_t count(Method m) const {
    switch (m) {
      case Method::grid: return n_grid;
      case Method::thiemard: return n_thiemard;
      case Method::layered: return n_layered;
      case Method::reoriented: return n_reoriented;
      case Method::unanchored: break;
    }
    return 0;
  }
};

/// The deltas of the reference comparison table.
inline const std::vector<double>& reference_deltas() {
  static const std::vector<double> d{0.25, 0.1, 0.05, 0.01, 0.005, 0.001, 0.0005, 0.0001};
  return d;
}

inline TableRow table_row(double delta, double k = 0.0, double c = 1.7,
                          std::size_t budget = kDefaultBudget) {
  TableRow row;
  row.delta = delta;
  row.inv_delta_sq = 1.0 / (delta * delta);
  try {
    row.p = p_auto(delta, k, c);
    std::array<std::uint64_t, 4> n{};
    for (std::size_t m = 0; m < kAnchoredMethods.size(); ++m) {
      const Method method = kAnchoredMethods[m];
      std::optional<int> p;
      if (method == Method::reoriented) p.emplace(row.p);
      n[m] = cover_count(method, delta, p);
      if (n[m] <= budget) {
        n[m] = make_cover(method, delta, p, 2, budget).size();
        row.materialized[m] = true;
      }
    }
    row.n_grid = n[0];
    row.n_thiemard = n[1];
    row.n_layered = n[2];
    row.n_reoriented = n[3];
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

/// One row per delta, in input order; a failing row carries its error.
inline std::vector<TableRow> table_rows(const std::vector<double>& deltas, double k = 0.0,
                                        double c = 1.7, std::size_t budget = kDefaultBudget) {
  std::vector<TableRow> rows;
  rows.reserve(deltas.size());
  for (double d : deltas) rows.push_back(table_row(d, k, c, budget));
  return rows;
}

/// Table with one column per delta, like the reference comparison; counted
/// (not materialized) cells are marked with '*'.
inline std::string format_table(const std::vector<TableRow>& rows, bool csv = false) {
  std::ostringstream os;
  const char* labels[] = {"grid", "thiemard", "layered", "reoriented"};
  if (csv) {
    os << "delta,p,grid,thiemard,layered,reoriented,inv_delta_sq,counted\n";
    for (const auto& r : rows) {
      char d[32];
      std::snprintf(d, sizeof d, "%g", r.delta);
      if (r.error) {
        os << d << ",,,,,,,error: " << *r.error << "\n";
        continue;
      }
      std::string counted;
      for (std::size_t m = 0; m < 4; ++m)
        if (!r.materialized[m]) counted += (counted.empty() ? "" : ";") + std::string(labels[m]);
      os << d << ',' << r.p << ',' << r.n_grid << ',' << r.n_thiemard << ',' << r.n_layered << ','
         << r.n_reoriented << ',' << std::llround(r.inv_delta_sq) << ',' << counted << "\n";
    }
    return os.str();
  }

  std::vector<std::vector<std::string>> cols;
  for (const auto& r : rows) {
    std::vector<std::string> col;
    char d[32];
    std::snprintf(d, sizeof d, "%g", r.delta);
    col.emplace_back(d);
    for (std::size_t m = 0; m < 4; ++m) {
      if (r.error) {
        col.emplace_back("error");
        continue;
      }
      col.push_back(std::to_string(r.count(kAnchoredMethods[m])) + (r.materialized[m] ? "" : "*"));
    }
    col.push_back(std::to_string(std::llround(r.inv_delta_sq)));
    cols.push_back(std::move(col));
  }
  const char* heads[] = {"delta", "|G|", "|T|", "|Z|", "|R|", "1/delta^2"};
  for (std::size_t line = 0; line < 6; ++line) {
    char head[16];
    std::snprintf(head, sizeof head, "%-10s", heads[line]);
    os << head;
    for (const auto& col : cols) {
      char cell[32];
      std::snprintf(cell, sizeof cell, " %11s", col[line].c_str());
      os << cell;
    }
    os << "\n";
  }
  bool any_counted = false;
  for (const auto& r : rows)
    for (bool m : r.materialized) any_counted |= !m && !r.error;
  if (any_counted) os << "(* counted from cardinality identities, not materialized)\n";
  for (const auto& r : rows)
    if (r.error) os << "delta=" << r.delta << ": " << *r.error << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Leading coefficients

struct FitRow {
  double delta = 0.0;
  Method method = Method::grid;
  std::uint64_t count = 0;
  /// count · delta^2
  double coefficient = 0.0;
};

/// count · delta^2 for each delta, sorted by decreasing delta.
inline std::vector<FitRow> fit_coefficients(Method method, std::vector<double> deltas,
                                            double k = 0.0, double c = 1.7) {
  detail::require(method != Method::unanchored, "no coefficient fit for unanchored covers");
  std::sort(deltas.begin(), deltas.end(), std::greater<>());
  std::vector<FitRow> rows;
  for (double d : deltas) {
    std::optional<int> p;
    if (method == Method::reoriented) p.emplace(p_auto(d, k, c));
    const auto n = cover_count(method, d, p);
    rows.push_back({d, method, n, static_cast<double>(n) * d * d});
  }
  return rows;
}

// ---------------------------------------------------------------------------
// SVG

/// One unfilled rectangle per bracket, origin at the bottom left.
inline std::string render_svg(const Cover& c, int size_px = 800) {
  detail::require(c.is_anchored() && c.dim() == 2, "rendering needs an anchored 2-D cover");
  detail::require(size_px >= 100, "size must be at least 100 px");
  const double s = size_px;
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
                "viewBox=\"0 0 %d %d\">\n",
                size_px, size_px, size_px, size_px);
  out += buf;
  std::snprintf(buf, sizeof buf, "<g fill=\"none\" stroke=\"black\" stroke-width=\"%g\">\n", s / 1000.0);
  out += buf;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto lo = c.lo(i);
    const auto hi = c.hi(i);
    std::snprintf(buf, sizeof buf, "<rect x=\"%.6f\" y=\"%.6f\" width=\"%.6f\" height=\"%.6f\"/>\n",
                  s * lo[0], s * (1.0 - hi[1]), s * (hi[0] - lo[0]), s * (hi[1] - lo[1]));
    out += buf;
  }
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace bracketing
