#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "randfun/error.hpp"

namespace randfun {

using cplx = std::complex<double>;

struct HornerResult {
  cplx p;
  cplx dp;
  double abs_bound;  // sum |c_k| |z|^k, the scale of rounding errors in p
};

inline HornerResult horner(const std::vector<cplx>& c, cplx z) {
  cplx p{}, dp{};
  double b = 0;
  const double az = std::abs(z);
  for (std::size_t i = c.size(); i-- > 0;) {
    dp = dp * z + p;
    p = p * z + c[i];
    b = b * az + std::abs(c[i]);
  }
  return {p, dp, b};
}

namespace detail {

// Newton correction p/p' at z. Outside the unit circle the reversed
// polynomial q(w) = w^D p(1/w) is used so that powers of z never overflow:
// p/p' = z / (D - w q'(w)/q(w)).
struct NewtonStep {
  cplx ratio;
  bool converged;
};

inline NewtonStep newton_ratio(const std::vector<cplx>& c, const std::vector<cplx>& rev, cplx z) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double D = static_cast<double>(c.size() - 1);
  if (std::abs(z) <= 1) {
    const auto h = horner(c, z);
    const bool conv = std::abs(h.p) <= 4 * D * eps * h.abs_bound;
    if (h.dp == cplx{}) return {cplx{1e-3, 1e-3}, conv};
    return {h.p / h.dp, conv};
  }
  const cplx w = 1.0 / z;
  const auto h = horner(rev, w);
  const bool conv = std::abs(h.p) <= 4 * D * eps * h.abs_bound;
  const cplx denom = D - w * h.dp / h.p;
  if (h.p == cplx{}) return {cplx{}, true};
  if (denom == cplx{}) return {cplx{1e-3, 1e-3} * std::abs(z), conv};
  return {z / denom, conv};
}

// Initial guesses from the upper convex hull of (k, log|c_k|): each hull
// edge of slope -log rho and horizontal length L contributes L points on
// the circle |z| = rho.
inline std::vector<cplx> newton_polygon_start(const std::vector<cplx>& c) {
  const std::size_t D = c.size() - 1;
  std::vector<std::size_t> hull;
  auto lg = [&](std::size_t k) { return std::log(std::abs(c[k])); };
  for (std::size_t k = 0; k <= D; ++k) {
    if (c[k] == cplx{}) continue;
    while (hull.size() >= 2) {
      const auto i = hull[hull.size() - 2], j = hull.back();
      const double cross = (lg(j) - lg(i)) * static_cast<double>(k - i) -
                           (lg(k) - lg(i)) * static_cast<double>(j - i);
      if (cross <= 0) hull.pop_back();
      else break;
    }
    hull.push_back(k);
  }
  std::vector<cplx> z;
  z.reserve(D);
  const double offset = 0.4;
  for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
    const auto i = hull[e], j = hull[e + 1];
    const auto len = j - i;
    const double rho = std::exp((lg(i) - lg(j)) / static_cast<double>(len));
    for (std::size_t t = 0; t < len; ++t) {
      const double ang = 2 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(len) +
                         2 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(D) + offset;
      z.push_back(std::polar(rho, ang));
    }
  }
  return z;
}

}  // namespace detail

struct RootsResult {
  std::vector<cplx> roots;
  int iterations = 0;
  bool converged = false;
};

/// All roots of sum c_k z^k by Aberth-Ehrlich iteration (Gauss-Seidel form).
/// Leading zero coefficients are dropped; trailing ones give roots at 0.
inline RootsResult aberth_roots(std::vector<cplx> c, int max_iter = 1000) {
  for (const auto& x : c) {
    require(std::isfinite(x.real()) && std::isfinite(x.imag()), ErrorCode::NumericalFailure,
            "non-finite polynomial coefficient");
  }
  while (!c.empty() && c.back() == cplx{}) c.pop_back();
  require(!c.empty(), ErrorCode::InvalidArgument, "zero polynomial has no isolated roots");
  RootsResult out;
  std::size_t zeros_at_origin = 0;
  while (c[zeros_at_origin] == cplx{}) ++zeros_at_origin;
  c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(zeros_at_origin));
  out.roots.assign(zeros_at_origin, cplx{});
  const std::size_t D = c.size() - 1;
  if (D == 0) {
    out.converged = true;
    return out;
  }
  if (D == 1) {
    out.roots.push_back(-c[0] / c[1]);
    out.converged = true;
    return out;
  }
  std::vector<cplx> rev(c.rbegin(), c.rend());
  auto z = detail::newton_polygon_start(c);
  std::vector<bool> done(D, false);
  std::size_t remaining = D;
  int it = 0;
  for (; it < max_iter && remaining > 0; ++it) {
    for (std::size_t i = 0; i < D; ++i) {
      if (done[i]) continue;
      const auto step = detail::newton_ratio(c, rev, z[i]);
      if (step.converged) {
        done[i] = true;
        --remaining;
        continue;
      }
      cplx s{};
      for (std::size_t j = 0; j < D; ++j) {
        if (j != i) s += 1.0 / (z[i] - z[j]);
      }
      const cplx corr = step.ratio / (1.0 - step.ratio * s);
      if (!std::isfinite(corr.real()) || !std::isfinite(corr.imag())) continue;
      z[i] -= corr;
      if (std::abs(corr) <= 2 * std::numeric_limits<double>::epsilon() * std::abs(z[i])) {
        done[i] = true;
        --remaining;
      }
    }
  }
  out.iterations = it;
  out.converged = remaining == 0;
  out.roots.insert(out.roots.end(), z.begin(), z.end());
  return out;
}

}  // namespace randfun
