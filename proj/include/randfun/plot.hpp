#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "randfun/error.hpp"

namespace randfun::plot {

// A CSV file as written by ExperimentReport: '#' comment lines, a header,
// then comma-separated cells.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t index(const std::string& col) const {
    const auto it = std::find(columns.begin(), columns.end(), col);
    require(it != columns.end(), ErrorCode::InvalidArgument, "CSV has no column " + col);
    return static_cast<std::size_t>(it - columns.begin());
  }

  std::vector<double> numbers(const std::string& col) const {
    const auto i = index(col);
    std::vector<double> out;
    for (const auto& r : rows) out.push_back(r[i].empty() ? std::numeric_limits<double>::quiet_NaN() : std::stod(r[i]));
    return out;
  }
};

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

inline CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  require(f.good(), ErrorCode::InvalidArgument, "cannot read " + path.string());
  CsvTable t;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (t.columns.empty()) {
      t.columns = split(line, ',');
    } else {
      t.rows.push_back(split(line, ','));
    }
  }
  return t;
}

// Minimal SVG canvas with a data-to-pixel mapping.
class Canvas {
 public:
  Canvas(double x0, double x1, double y0, double y1, int width = 520, int height = 420)
      : x0_(x0), x1_(x1), y0_(y0), y1_(y1), w_(width), h_(height) {
    if (x1_ <= x0_) x1_ = x0_ + 1;
    if (y1_ <= y0_) y1_ = y0_ + 1;
  }

  double px(double x) const { return kMargin + (x - x0_) / (x1_ - x0_) * (w_ - 2 * kMargin); }
  double py(double y) const { return h_ - kMargin - (y - y0_) / (y1_ - y0_) * (h_ - 2 * kMargin); }

  void circle(double x, double y, double r, const std::string& style) {
    body_ << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"" << r << "\" " << style << "/>\n";
  }
  void line(double xa, double ya, double xb, double yb, const std::string& style) {
    body_ << "<line x1=\"" << px(xa) << "\" y1=\"" << py(ya) << "\" x2=\"" << px(xb) << "\" y2=\"" << py(yb)
          << "\" " << style << "/>\n";
  }
  void polyline(const std::vector<double>& x, const std::vector<double>& y, const std::string& style) {
    body_ << "<polyline fill=\"none\" " << style << " points=\"";
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (std::isfinite(x[i]) && std::isfinite(y[i])) body_ << px(x[i]) << ',' << py(y[i]) << ' ';
    }
    body_ << "\"/>\n";
  }
  void rect(double xa, double ya, double xb, double yb, const std::string& style) {
    body_ << "<rect x=\"" << px(xa) << "\" y=\"" << py(yb) << "\" width=\"" << px(xb) - px(xa) << "\" height=\""
          << py(ya) - py(yb) << "\" " << style << "/>\n";
  }
  void raw(const std::string& s) { body_ << s << '\n'; }

  std::string render(const std::string& title, const std::string& xlabel, const std::string& ylabel) const {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w_ << "\" height=\"" << h_ << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << w_ / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n"
       << "<text x=\"" << w_ / 2 << "\" y=\"" << h_ - 8 << "\" text-anchor=\"middle\" font-size=\"12\">" << xlabel
       << "</text>\n"
       << "<text x=\"14\" y=\"" << h_ / 2 << "\" font-size=\"12\" transform=\"rotate(-90 14 " << h_ / 2 << ")\">"
       << ylabel << "</text>\n"
       << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << w_ - 2 * kMargin << "\" height=\""
       << h_ - 2 * kMargin << "\" fill=\"none\" stroke=\"#888\"/>\n"
       << tick_labels() << body_.str() << "</svg>\n";
    return os.str();
  }

 private:
  static constexpr double kMargin = 50;

  std::string tick_labels() const {
    char buf[256];
    std::ostringstream os;
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" font-size=\"10\">%.4g</text>\n", kMargin, h_ - kMargin + 14,
                  x0_);
    os << buf;
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" font-size=\"10\" text-anchor=\"end\">%.4g</text>\n",
                  w_ - kMargin, h_ - kMargin + 14, x1_);
    os << buf;
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" font-size=\"10\" text-anchor=\"end\">%.4g</text>\n",
                  kMargin - 4, h_ - kMargin, y0_);
    os << buf;
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" font-size=\"10\" text-anchor=\"end\">%.4g</text>\n",
                  kMargin - 4, kMargin + 4, y1_);
    os << buf;
    return os.str();
  }

  double x0_, x1_, y0_, y1_;
  int w_, h_;
  std::ostringstream body_;
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
  require(f.good(), ErrorCode::InvalidArgument, "cannot write " + path.string());
}

inline std::pair<double, double> finite_range(const std::vector<double>& v) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double x : v) {
    if (!std::isfinite(x)) continue;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  if (lo > hi) return {0, 1};
  return {lo, hi};
}

/// Zeros from a zeros CSV (columns re, im) inside the disk |z| <= radius.
inline std::filesystem::path zeros_scatter(const std::filesystem::path& csv, double radius,
                                           const std::filesystem::path& out) {
  const auto t = read_csv(csv);
  const auto re = t.numbers("re"), im = t.numbers("im");
  const double R = radius * 1.1;
  Canvas c(-R, R, -R, R, 460, 460);
  std::vector<double> cx, cy;
  for (int k = 0; k <= 256; ++k) {
    cx.push_back(radius * std::cos(2 * std::numbers::pi * k / 256));
    cy.push_back(radius * std::sin(2 * std::numbers::pi * k / 256));
  }
  c.polyline(cx, cy, "stroke=\"#444\"");
  for (std::size_t i = 0; i < re.size(); ++i) c.circle(re[i], im[i], 2.5, "fill=\"#1f5fa8\"");
  write_text(out, c.render("zeros in |z| <= " + std::to_string(radius), "Re z", "Im z"));
  return out;
}

/// S(r)/r^4 from a growth CSV (columns r, S_over_r4) with the level e^2/4.
inline std::filesystem::path growth_curve(const std::filesystem::path& csv, const std::filesystem::path& out) {
  const auto t = read_csv(csv);
  const auto r = t.numbers("r"), y = t.numbers("S_over_r4");
  const double level = std::exp(2.0) / 4;
  auto [x0, x1] = finite_range(r);
  auto [y0, y1] = finite_range(y);
  y0 = std::min(y0, level) * 0.95;
  y1 = std::max(y1, level) * 1.05;
  Canvas c(x0, x1, y0, y1);
  c.polyline(r, y, "stroke=\"#1f5fa8\" stroke-width=\"2\"");
  for (std::size_t i = 0; i < r.size(); ++i) c.circle(r[i], y[i], 3, "fill=\"#1f5fa8\"");
  c.line(x0, level, x1, level, "stroke=\"#c0392b\" stroke-dasharray=\"6,4\"");
  write_text(out, c.render("S(r)/r^4 and e^2/4", "r", "S(r)/r^4"));
  return out;
}

/// Mean count per sector at the largest radius of a sectors CSV.
inline std::filesystem::path sector_histogram(const std::filesystem::path& csv, const std::filesystem::path& out) {
  const auto t = read_csv(csv);
  const auto r = t.numbers("r"), sector = t.numbers("sector"), count = t.numbers("count");
  const double rmax = finite_range(r).second;
  std::map<int, std::pair<double, int>> acc;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] != rmax) continue;
    auto& a = acc[static_cast<int>(sector[i])];
    a.first += count[i];
    ++a.second;
  }
  const int n = acc.empty() ? 1 : acc.rbegin()->first + 1;
  double top = 0;
  for (const auto& [k, v] : acc) top = std::max(top, v.first / v.second);
  Canvas c(0, n, 0, top > 0 ? top * 1.1 : 1);
  for (const auto& [k, v] : acc) c.rect(k + 0.1, 0, k + 0.9, v.first / v.second, "fill=\"#1f5fa8\"");
  write_text(out, c.render("mean zeros per sector, r = " + std::to_string(rmax), "sector", "mean count"));
  return out;
}

/// -log P_hat against r with S(r) overlaid, from the hole radii CSV.
inline std::filesystem::path hole_overlay(const std::filesystem::path& csv, const std::filesystem::path& out) {
  const auto t = read_csv(csv);
  const auto r = t.numbers("r"), S = t.numbers("S"), nlp = t.numbers("neg_log_p");
  auto [x0, x1] = finite_range(r);
  std::vector<double> both = S;
  both.insert(both.end(), nlp.begin(), nlp.end());
  auto [y0, y1] = finite_range(both);
  Canvas c(x0, x1, std::min(0.0, y0), y1 > 0 ? y1 * 1.1 : 1);
  c.polyline(r, nlp, "stroke=\"#1f5fa8\" stroke-width=\"2\"");
  c.polyline(r, S, "stroke=\"#c0392b\" stroke-dasharray=\"6,4\"");
  for (std::size_t i = 0; i < r.size(); ++i) c.circle(r[i], nlp[i], 3, "fill=\"#1f5fa8\"");
  write_text(out, c.render("-log P(hole) (solid) and S(r) (dashed)", "r", "value"));
  return out;
}

}  // namespace randfun::plot
