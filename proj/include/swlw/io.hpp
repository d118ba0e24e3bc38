#pragma once

// CSV tables (header row, %.17g numbers) and minimal SVG line plots.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "swlw/errors.hpp"

namespace swlw {

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> r) {
    if (r.size() != columns.size()) throw ModelError("Table: row width does not match the header");
    rows.push_back(std::move(r));
  }

  std::vector<double> column(std::size_t c) const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[c]);
    return out;
  }

  std::size_t index_of(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    return it == columns.end() ? columns.size() : static_cast<std::size_t>(it - columns.begin());
  }
};

inline void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
  os << "\n";
  for (const auto& r : t.rows) {
    for (std::size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << format_number(r[c]);
    os << "\n";
  }
}

inline void write_csv(const std::string& path, const Table& t) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write '" + path + "'");
  write_csv(os, t);
}

inline Table read_csv(std::istream& in, const std::string& what = "<csv>") {
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(what + ": empty file");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.columns.push_back(cell);
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> r;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        r.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw ConfigError(what + ":" + std::to_string(lineno) + ": not a number: '" + cell + "'");
      }
    }
    if (r.size() != t.columns.size())
      throw ConfigError(what + ":" + std::to_string(lineno) + ": expected " + std::to_string(t.columns.size()) +
                        " values");
    t.rows.push_back(std::move(r));
  }
  return t;
}

inline Table read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  return read_csv(in, path);
}

struct Series {
  std::string label;
  std::vector<double> x, y;
};

/// Polylines on shared linear axes with tick labels at the range ends.
inline std::string render_svg(const std::vector<Series>& series, const std::string& title, const std::string& xlabel,
                              bool log_scale = false) {
  const double W = 640, H = 420, L = 70, R = 20, T = 40, B = 50;
  auto tf = [log_scale](double v) { return log_scale ? std::log10(v) : v; };
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double xv = tf(s.x[i]), yv = tf(s.y[i]);
      if (!std::isfinite(xv) || !std::isfinite(yv)) continue;
      x0 = std::min(x0, xv);
      x1 = std::max(x1, xv);
      y0 = std::min(y0, yv);
      y1 = std::max(y1, yv);
    }
  if (!(x1 >= x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  auto px = [&](double v) { return L + (tf(v) - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double v) { return H - B - (tf(v) - y0) / (y1 - y0) * (H - T - B); };
  static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  auto tick = [&](double v) { return format_number(log_scale ? std::pow(10.0, v) : v).substr(0, 10); };
  os << "<text x=\"" << L << "\" y=\"" << H - B + 18 << "\" font-size=\"11\">" << tick(x0) << "</text>\n";
  os << "<text x=\"" << W - R << "\" y=\"" << H - B + 18 << "\" font-size=\"11\" text-anchor=\"end\">" << tick(x1)
     << "</text>\n";
  os << "<text x=\"" << L - 6 << "\" y=\"" << H - B << "\" font-size=\"11\" text-anchor=\"end\">" << tick(y0)
     << "</text>\n";
  os << "<text x=\"" << L - 6 << "\" y=\"" << T + 10 << "\" font-size=\"11\" text-anchor=\"end\">" << tick(y1)
     << "</text>\n";
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"12\">"
     << xlabel << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* col = colours[k % 6];
    os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(tf(s.x[i])) || !std::isfinite(tf(s.y[i]))) continue;
      os << format_number(px(s.x[i])).substr(0, 8) << "," << format_number(py(s.y[i])).substr(0, 8) << " ";
    }
    os << "\"/>\n";
    os << "<text x=\"" << W - R - 4 << "\" y=\"" << T + 14 * (k + 1) << "\" font-size=\"11\" text-anchor=\"end\" fill=\""
       << col << "\">" << s.label << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

/// Plots every column against `x` (or the first column). Long-format tables
/// with a `t` column are restricted to their last time level.
inline std::string plot_table(const Table& t, const std::string& title) {
  if (t.columns.size() < 2 || t.rows.empty()) throw ConfigError("plot: need at least two columns and one row");
  const std::size_t ti = t.index_of("t");
  std::size_t xi = t.index_of("x");
  if (xi == t.columns.size()) xi = ti == 0 ? 1 : 0;
  double t_last = ti < t.columns.size() ? t.rows.back()[ti] : 0.0;
  std::vector<Series> series;
  bool positive = true;
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (c == xi || c == ti) continue;
    Series s{t.columns[c], {}, {}};
    for (const auto& r : t.rows) {
      if (ti < t.columns.size() && r[ti] != t_last) continue;
      s.x.push_back(r[xi]);
      s.y.push_back(r[c]);
      if (std::isfinite(r[c]) && (!(r[c] > 0.0) || !(r[xi] > 0.0))) positive = false;
    }
    series.push_back(std::move(s));
  }
  // sweep tables (no x column) read best on log-log axes
  const bool log_scale = positive && t.index_of("x") == t.columns.size() && ti == t.columns.size();
  return render_svg(series, title, t.columns[xi], log_scale);
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write '" + path + "'");
  os << text;
}

}  // namespace swlw
