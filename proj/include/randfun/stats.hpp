#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

#include "randfun/error.hpp"

namespace randfun::stats {

struct MeanSE {
  double mean = 0;
  double se = 0;
  std::size_t n = 0;
};

inline MeanSE mean_se(const std::vector<double>& x) {
  MeanSE out;
  out.n = x.size();
  if (x.empty()) return out;
  double s = 0;
  for (double v : x) s += v;
  out.mean = s / static_cast<double>(x.size());
  if (x.size() < 2) return out;
  double ss = 0;
  for (double v : x) ss += (v - out.mean) * (v - out.mean);
  out.se = std::sqrt(ss / static_cast<double>(x.size() - 1) / static_cast<double>(x.size()));
  return out;
}

struct Interval {
  double lo = 0;
  double hi = 0;
};

/// Wilson score interval for a binomial proportion.
inline Interval wilson(std::int64_t successes, std::int64_t trials, double z = 1.959963984540054) {
  require(trials > 0 && successes >= 0 && successes <= trials, ErrorCode::InvalidArgument, "bad binomial counts");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

struct LineFit {
  double slope = 0;
  double intercept = 0;
};

/// Ordinary least squares y = intercept + slope x.
inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, ErrorCode::InvalidArgument, "need two or more points to fit");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  require(sxx > 0, ErrorCode::InvalidArgument, "degenerate abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

inline bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) return false;
  }
  return true;
}

inline bool nonincreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[i - 1]) return false;
  }
  return true;
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace randfun::stats
