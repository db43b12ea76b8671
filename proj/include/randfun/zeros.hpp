#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "randfun/error.hpp"
#include "randfun/polynomial.hpp"
#include "randfun/sampling.hpp"

namespace randfun {

inline constexpr double kBoundaryTol = 1e-9;
inline constexpr double kClusterTol = 1e-7;

enum class ZeroMethod { RootFinder, ArgumentPrinciple, Jensen };

inline std::string to_string(ZeroMethod m) {
  switch (m) {
    case ZeroMethod::RootFinder: return "rootfinder";
    case ZeroMethod::ArgumentPrinciple: return "argument";
    case ZeroMethod::Jensen: return "jensen";
  }
  return "?";
}

struct Root {
  cplx z;
  int multiplicity = 1;
};

struct ZeroSet {
  double radius = 0;
  std::vector<Root> roots;
  ZeroMethod method = ZeroMethod::RootFinder;
  double residual = 0;
  std::vector<cplx> boundary_flags;  // roots within kBoundaryTol of |z| = radius, counted as inside
  bool multiplicity_warning = false;
  std::int64_t counted = 0;  // for methods that count without locating

  std::int64_t count() const {
    if (method != ZeroMethod::RootFinder) return counted;
    std::int64_t c = 0;
    for (const auto& r : roots) c += r.multiplicity;
    return c;
  }
  bool empty() const { return count() == 0; }
};

namespace detail {

inline void require_certified(const SeriesSample& s, double r) {
  require(r > 0 && std::isfinite(r), ErrorCode::InvalidArgument, "radius must be positive and finite");
  if (!(r <= s.r_max() * (1 + 1e-12))) fail(ErrorCode::OutOfCertifiedDisk, "radius exceeds the certified disk");
}

inline double max_abs(const std::vector<cplx>& c) {
  double m = 0;
  for (const auto& x : c) m = std::max(m, std::abs(x));
  return m;
}

// Groups roots closer than tol (single linkage) into multiple roots.
inline std::vector<Root> cluster(const std::vector<cplx>& pts, double tol) {
  const std::size_t n = pts.size();
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(pts[i] - pts[j]) < tol) parent[find(i)] = find(j);
    }
  }
  std::vector<Root> out;
  std::vector<std::ptrdiff_t> slot(n, -1);
  std::vector<cplx> sum;
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = find(i);
    if (slot[p] < 0) {
      slot[p] = static_cast<std::ptrdiff_t>(out.size());
      out.push_back({cplx{}, 0});
      sum.emplace_back();
    }
    auto& r = out[static_cast<std::size_t>(slot[p])];
    sum[static_cast<std::size_t>(slot[p])] += pts[i];
    ++r.multiplicity;
  }
  for (std::size_t k = 0; k < out.size(); ++k) out[k].z = sum[k] / static_cast<double>(out[k].multiplicity);
  return out;
}

}  // namespace detail

/// Every root of the degree-D truncation, found in the variable w = z/scale
/// and returned in z units.
inline std::vector<cplx> truncation_roots(const SeriesSample& s, double scale) {
  auto res = aberth_roots(s.scaled_coeffs(scale));
  if (!res.converged) {
    fail(ErrorCode::NumericalFailure, "root iteration did not converge after " + std::to_string(res.iterations) +
                                          " sweeps (degree " + std::to_string(s.degree()) + ")");
  }
  for (auto& z : res.roots) z *= scale;
  return res.roots;
}

/// Restricts a full root list to the closed disk |z| <= r (with the
/// boundary annulus counted inside) and merges clusters.
inline ZeroSet zeros_in_disk(const std::vector<cplx>& all_roots, double r) {
  ZeroSet zs;
  zs.radius = r;
  std::vector<cplx> inside;
  for (const auto& z : all_roots) {
    const double a = std::abs(z);
    if (a <= r * (1 + kBoundaryTol)) inside.push_back(z);
  }
  zs.roots = detail::cluster(inside, kClusterTol * r);
  for (const auto& root : zs.roots) {
    if (root.multiplicity > 1) zs.multiplicity_warning = true;
    if (std::abs(std::abs(root.z) - r) < kBoundaryTol * r) zs.boundary_flags.push_back(root.z);
  }
  return zs;
}

struct RoucheMargin {
  double log_min_modulus;  // estimated min of log|p| on |z| = r
  double log_tail;
  bool ok;
};

/// Compares the smallest sampled |truncation| on |z| = r with the certified
/// tail; the zero count of the full series equals that of the truncation
/// when the margin is positive.
inline RoucheMargin rouche_margin(const SeriesSample& s, double r) {
  detail::require_certified(s, r);
  const auto c = s.scaled_coeffs(r);
  const std::size_t nodes = std::max<std::size_t>(256, 4 * c.size());
  double mn = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < nodes; ++k) {
    const cplx w = std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(nodes));
    mn = std::min(mn, std::abs(horner(c, w).p));
  }
  const double log_min = std::log(mn);
  const double tail = s.tail_log_bound();
  return {log_min, tail, tail == kNegInf || log_min > tail};
}

/// Zeros of the sample in the closed disk |z| <= r.
inline ZeroSet find_zeros_disk(const SeriesSample& s, double r) {
  detail::require_certified(s, r);
  const auto margin = rouche_margin(s, r);
  if (!margin.ok) {
    fail(ErrorCode::RoucheMarginUnverifiable,
         "tail bound exp(" + std::to_string(margin.log_tail) + ") is not below min |f| on the circle exp(" +
             std::to_string(margin.log_min_modulus) + "); resample with a smaller tail_tol");
  }
  const auto c = s.scaled_coeffs(r);
  ZeroSet zs = zeros_in_disk(truncation_roots(s, r), r);
  const double scale = std::max(1.0, detail::max_abs(c));
  for (const auto& root : zs.roots) {
    zs.residual = std::max(zs.residual, std::abs(horner(c, root.z / r).p) / scale);
  }
  return zs;
}

// Roots of one sample computed once and reused for every radius up to the
// scale they were computed at.
class RootCache {
 public:
  RootCache(const SeriesSample& s, double scale) : sample_(&s), scale_(scale), roots_(truncation_roots(s, scale)) {}

  const std::vector<cplx>& roots() const { return roots_; }

  /// As find_zeros_disk(sample, r) for r up to the cache scale.
  ZeroSet disk(double r) const {
    detail::require_certified(*sample_, r);
    require(r <= scale_ * (1 + 1e-12), ErrorCode::InvalidArgument, "radius beyond the cached root scale");
    const auto margin = rouche_margin(*sample_, r);
    if (!margin.ok) fail(ErrorCode::RoucheMarginUnverifiable, "tail bound exceeds min |f| on the circle");
    ZeroSet zs = zeros_in_disk(roots_, r);
    const auto c = sample_->scaled_coeffs(r);
    const double scale = std::max(1.0, detail::max_abs(c));
    for (const auto& root : zs.roots) zs.residual = std::max(zs.residual, std::abs(horner(c, root.z / r).p) / scale);
    return zs;
  }

  double min_modulus() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& z : roots_) m = std::min(m, std::abs(z));
    return m;
  }

 private:
  const SeriesSample* sample_;
  double scale_;
  std::vector<cplx> roots_;
};

namespace detail {

// Winding number of p(e^{i theta}) around 0 by phase tracking: the argument
// increments between neighbouring nodes are summed, and a step is bisected
// while its increment or the local bound h |p'/p| exceeds pi/4, so a root
// close to the circle only refines the steps near it. Returns nullopt when
// |p| falls to rounding level on the circle.
inline std::optional<std::int64_t> winding_number(const std::vector<cplx>& c) {
  constexpr double kStepTurn = std::numbers::pi / 4;
  constexpr double kMinStep = 1e-13;
  struct Node {
    double theta;
    cplx p;
    double log_deriv;  // |w p'(w) / p(w)|
  };
  bool degenerate = false;
  auto eval = [&](double theta) {
    const cplx w = std::polar(1.0, theta);
    const auto h = horner(c, w);
    if (std::abs(h.p) <= 1e-14 * h.abs_bound) degenerate = true;
    return Node{theta, h.p, std::abs(w * h.dp / h.p)};
  };
  const std::size_t start = std::max<std::size_t>(256, 4 * c.size());
  const double h0 = 2 * std::numbers::pi / static_cast<double>(start);
  double total = 0;
  Node left = eval(0.0);
  const Node first = left;
  std::vector<Node> stack;
  for (std::size_t k = 1; k <= start; ++k) {
    Node right = k == start ? Node{2 * std::numbers::pi, first.p, first.log_deriv} : eval(h0 * static_cast<double>(k));
    stack.push_back(right);
    while (!stack.empty()) {
      if (degenerate) return std::nullopt;
      const Node& r = stack.back();
      const double h = r.theta - left.theta;
      const double turn = std::arg(r.p / left.p);
      if (std::abs(turn) > kStepTurn || h * std::max(left.log_deriv, r.log_deriv) > kStepTurn) {
        if (h < kMinStep) return std::nullopt;
        stack.push_back(eval(left.theta + h / 2));
        continue;
      }
      total += turn;
      left = r;
      stack.pop_back();
    }
  }
  const double val = total / (2 * std::numbers::pi);
  const double rounded = std::round(val);
  if (std::abs(val - rounded) > 1e-6) return std::nullopt;
  return static_cast<std::int64_t>(rounded);
}

}  // namespace detail

/// Number of zeros in |z| <= r from the argument principle. If the contour
/// passes through a zero at rounding level the radius is nudged by 1e-6
/// relative, at most five times.
inline std::int64_t argument_principle_count(const SeriesSample& s, double r) {
  detail::require_certified(s, r);
  static constexpr double nudges[] = {0.0, -1e-6, 1e-6, -2e-6, 2e-6, -3e-6};
  for (double nudge : nudges) {
    const double rr = r * (1 + nudge);
    if (!(rr <= s.r_max() * (1 + 1e-12))) continue;
    if (auto n = detail::winding_number(s.scaled_coeffs(rr))) return *n;
  }
  fail(ErrorCode::BoundaryRootUnresolved, "argument principle did not settle near r = " + std::to_string(r));
}

inline ZeroSet argument_principle_zero_set(const SeriesSample& s, double r) {
  ZeroSet zs;
  zs.radius = r;
  zs.method = ZeroMethod::ArgumentPrinciple;
  zs.counted = argument_principle_count(s, r);
  return zs;
}

/// N_f(r) = \int_0^1 log|f(r e^{2 pi i theta})| d theta - log|f(0)|.
inline double jensen_N(const SeriesSample& s, double r) {
  detail::require_certified(s, r);
  const cplx f0 = s.constant_term();
  if (f0 == cplx{}) fail(ErrorCode::ZeroAtOrigin, "f(0) = 0; factor out the zero at the origin first");
  const auto c = s.scaled_coeffs(r);
  auto mean_log = [&](std::size_t nodes, std::size_t stride_from) {
    // sum over the nodes not already included in the coarser grid
    double acc = 0;
    for (std::size_t k = stride_from; k < nodes; k += (stride_from ? 2 : 1)) {
      const cplx w = std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(nodes));
      acc += std::log(std::abs(horner(c, w).p));
    }
    return acc;
  };
  std::size_t nodes = 256;
  double sum = mean_log(nodes, 0);
  double prev = sum / static_cast<double>(nodes);
  while (nodes < (std::size_t{1} << 22)) {
    nodes *= 2;
    sum += mean_log(nodes, 1);
    const double cur = sum / static_cast<double>(nodes);
    if (!std::isfinite(cur)) break;
    if (std::abs(cur - prev) < 1e-8) return cur - std::log(std::abs(f0));
    prev = cur;
  }
  fail(ErrorCode::BoundaryRootUnresolved, "log|f| quadrature did not settle at r = " + std::to_string(r));
}

/// Sum of log(r/|z|) over the located zeros, the root-side form of N_f(r).
inline double jensen_from_roots(const ZeroSet& zs) {
  double acc = 0;
  for (const auto& root : zs.roots) {
    const double a = std::abs(root.z);
    if (a == 0) fail(ErrorCode::ZeroAtOrigin, "zero at the origin");
    acc += root.multiplicity * std::max(0.0, std::log(zs.radius / a));
  }
  return acc;
}

namespace detail {

inline double arg_2pi(cplx z) {
  double a = std::arg(z);
  if (a < 0) a += 2 * std::numbers::pi;
  if (a >= 2 * std::numbers::pi) a = 0;
  return a;
}

inline void require_sector(double alpha, double beta) {
  require(0 <= alpha && alpha < beta && beta <= 2 * std::numbers::pi + 1e-15, ErrorCode::InvalidArgument,
          "sector needs 0 <= alpha < beta <= 2 pi");
}

}  // namespace detail

/// Zeros with alpha <= arg z < beta, counted with multiplicity.
inline std::int64_t sector_count(const ZeroSet& zs, double alpha, double beta) {
  detail::require_sector(alpha, beta);
  std::int64_t n = 0;
  for (const auto& root : zs.roots) {
    const double a = detail::arg_2pi(root.z);
    if (alpha <= a && a < beta) n += root.multiplicity;
  }
  return n;
}

/// Solutions of f(z) = b in |z| <= r.
inline ZeroSet value_solutions(const SeriesSample& s, double r, cplx b) { return find_zeros_disk(s.shifted(b), r); }

/// \int_0^r n(t, alpha, beta) / t dt for the step function n of sector
/// counts, integrated exactly between consecutive grid points.
inline double integrated_sector_N(const ZeroSet& zs, double alpha, double beta, const std::vector<double>& t_grid) {
  detail::require_sector(alpha, beta);
  require(!t_grid.empty() && t_grid.front() > 0, ErrorCode::InvalidArgument, "t_grid must be positive");
  require(std::is_sorted(t_grid.begin(), t_grid.end()), ErrorCode::InvalidArgument, "t_grid must be increasing");
  std::vector<std::pair<double, int>> in_sector;
  for (const auto& root : zs.roots) {
    const double a = detail::arg_2pi(root.z);
    if (alpha <= a && a < beta) {
      if (std::abs(root.z) == 0) fail(ErrorCode::ZeroAtOrigin, "zero at the origin");
      in_sector.emplace_back(std::abs(root.z), root.multiplicity);
    }
  }
  double acc = 0;
  double lo = 0;
  for (double hi : t_grid) {
    for (const auto& [mod, mult] : in_sector) {
      if (mod <= hi) acc += mult * std::log(hi / std::max(mod, lo));
    }
    lo = hi;
  }
  return acc;
}

inline double integrated_sector_N(const SeriesSample& s, double r, double alpha, double beta,
                                  std::size_t grid_points = 64) {
  if (s.constant_term() == cplx{}) fail(ErrorCode::ZeroAtOrigin, "f(0) = 0");
  const ZeroSet zs = find_zeros_disk(s, r);
  std::vector<double> grid(grid_points);
  double smallest = r;
  for (const auto& root : zs.roots) smallest = std::min(smallest, std::abs(root.z));
  const double lo = std::log(smallest) - 1.0, hi = std::log(r);
  for (std::size_t i = 0; i < grid_points; ++i) {
    grid[i] = std::exp(lo + (hi - lo) * static_cast<double>(i + 1) / static_cast<double>(grid_points));
  }
  grid.back() = r;
  return integrated_sector_N(zs, alpha, beta, grid);
}

inline void write_zeros_csv_header(std::ostream& os) { os << "trial_id,re,im,modulus,multiplicity,method\n"; }

inline void write_zeros_csv_rows(std::ostream& os, std::uint64_t trial, const ZeroSet& zs) {
  const auto old = os.precision(17);
  for (const auto& root : zs.roots) {
    os << trial << ',' << root.z.real() << ',' << root.z.imag() << ',' << std::abs(root.z) << ','
       << root.multiplicity << ',' << to_string(zs.method) << '\n';
  }
  os.precision(old);
}

}  // namespace randfun
