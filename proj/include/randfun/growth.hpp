#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "randfun/error.hpp"
#include "randfun/sequence.hpp"

namespace randfun {

/// Window exponent: delta(r) = m(r)^(-eta). The admissible range is (0, 1/4].
inline constexpr double kDefaultEta = 0.25;

namespace detail {

// A scan stops once the terms have passed their maximum and fallen this far
// (in log units) below min(max, 0).
inline constexpr double kScanFloor = 80.0;

// Visits (n, log a_n + n log r) over the support of `seq` in increasing n.
// Infinite sequences are cut once the terms are past their peak and
// negligible; this is exact for log-concave and lacunary magnitudes.
template <class Visit>
void scan_log_terms(const CoefficientSequence& seq, double log_r, Visit&& visit) {
  require(!std::isnan(log_r), ErrorCode::InvalidArgument, "radius is NaN");
  if (!seq.is_entire() && log_r >= 0) {
    fail(ErrorCode::NonEntireSequence, seq.describe() + " diverges at radius >= 1");
  }
  const bool finite = seq.last_index().has_value();
  double max_term = kNegInf;
  for (auto n = seq.support_from(0); n; n = seq.support_from(*n + 1)) {
    if (*n > kMaxMaterializedIndex) {
      fail(ErrorCode::NonEntireSequence, seq.describe() + ": terms still significant past index 10^7 (series not entire, or radius too large)");
    }
    const double term = seq.log_a(*n) + (*n == 0 ? 0.0 : static_cast<double>(*n) * log_r);
    visit(*n, term);
    if (term > max_term) {
      max_term = term;
    } else if (!finite) {
      const double floor = std::min(max_term, 0.0) - kScanFloor;
      if (term < floor || (term == kNegInf && max_term == kNegInf)) break;
    }
  }
}

// Running sum of exp(x_i) and of w_i exp(x_i), kept relative to the running
// maximum of x_i.
class ShiftedSum {
 public:
  void add(double x, double w = 0.0) {
    if (x == kNegInf) return;
    if (x > shift_) {
      const double scale = std::exp(shift_ - x);
      sum_ *= scale;
      weighted_ *= scale;
      shift_ = x;
    }
    const double e = std::exp(x - shift_);
    sum_ += e;
    weighted_ += w * e;
  }

  double log_sum() const { return sum_ > 0 ? shift_ + std::log(sum_) : kNegInf; }
  double weighted_mean() const { return sum_ > 0 ? weighted_ / sum_ : 0.0; }

 private:
  double shift_ = kNegInf;
  double sum_ = 0.0;
  double weighted_ = 0.0;
};

inline double log_radius(double r) {
  require(r > 0 && std::isfinite(r), ErrorCode::InvalidArgument, "radius must be positive and finite");
  return std::log(r);
}

}  // namespace detail

/// log sigma^2(r) = log sum a_n^2 r^{2n}.
inline double log_sigma2(const CoefficientSequence& seq, double r) {
  detail::ShiftedSum acc;
  detail::scan_log_terms(seq, detail::log_radius(r), [&](std::int64_t, double t) { acc.add(2 * t); });
  return acc.log_sum();
}

inline double sigma(const CoefficientSequence& seq, double r) { return std::exp(0.5 * log_sigma2(seq, r)); }

/// s(r) = d log sigma / d log r = sum n a_n^2 r^{2n} / sum a_n^2 r^{2n}.
inline double s_log_deriv(const CoefficientSequence& seq, double r) {
  detail::ShiftedSum acc;
  detail::scan_log_terms(seq, detail::log_radius(r),
                         [&](std::int64_t n, double t) { acc.add(2 * t, static_cast<double>(n)); });
  return acc.weighted_mean();
}

/// Expected number of zeros of the Gaussian series in |z| <= r, computed as
/// (r/2) K'(r)/K(r) with K(r) = sum a_n^2 r^{2n}.
inline double edelman_kostlan(const CoefficientSequence& seq, double r) {
  const double log_r = detail::log_radius(r);
  std::vector<double> log_k_terms;
  std::vector<double> log_dk_terms;
  detail::scan_log_terms(seq, log_r, [&](std::int64_t n, double) {
    const double la = seq.log_a(n);
    log_k_terms.push_back(2 * la + 2 * static_cast<double>(n) * log_r);
    if (n > 0) log_dk_terms.push_back(std::log(2.0 * static_cast<double>(n)) + 2 * la +
                                      (2 * static_cast<double>(n) - 1) * log_r);
  });
  auto log_sum_exp = [](const std::vector<double>& xs) {
    const double m = xs.empty() ? kNegInf : *std::max_element(xs.begin(), xs.end());
    if (m == kNegInf) return kNegInf;
    double s = 0;
    for (double x : xs) s += std::exp(x - m);
    return m + std::log(s);
  };
  const double log_dk = log_sum_exp(log_dk_terms);
  if (log_dk == kNegInf) return 0.0;
  return std::exp(log_r - std::log(2.0) + log_dk - log_sum_exp(log_k_terms));
}

/// b_n(r) = (1/n) log a_n + log r; -inf when a_n = 0.
inline double b_n(const CoefficientSequence& seq, std::int64_t n, double r) {
  require(n >= 1, ErrorCode::InvalidIndex, "b_n is defined for n >= 1");
  const double la = seq.log_a(n);
  if (la == kNegInf) return kNegInf;
  return la / static_cast<double>(n) + detail::log_radius(r);
}

struct GrowthProfile {
  double r = 0;
  double log_sigma = 0;
  double sigma = 0;
  double s = 0;
  double S = 0;
  std::int64_t n_count = 0;
  std::int64_t m_weight = 0;
  double delta = 1;
  std::vector<std::int64_t> N_set;
};

/// Everything in the dominant-term bookkeeping at radius r: the index set
/// N(r) = {n : a_n r^n >= 1}, its size n(r), m(r) = 4 sum_{N(r)} n,
/// S(r) = 2 sum_{N(r)} log(a_n r^n) and delta(r) = m(r)^(-eta).
/// When m(r) = 0, delta is reported as 1.
inline GrowthProfile growth_profile(const CoefficientSequence& seq, double r, double eta = kDefaultEta) {
  require(eta > 0 && eta <= 0.25, ErrorCode::InvalidArgument, "eta must lie in (0, 1/4]");
  GrowthProfile g;
  g.r = r;
  detail::ShiftedSum acc;
  detail::scan_log_terms(seq, detail::log_radius(r), [&](std::int64_t n, double t) {
    acc.add(2 * t, static_cast<double>(n));
    if (t >= 0) {
      g.N_set.push_back(n);
      g.S += 2 * t;
      g.m_weight += 4 * n;
    }
  });
  g.log_sigma = 0.5 * acc.log_sum();
  g.sigma = std::exp(g.log_sigma);
  g.s = acc.weighted_mean();
  g.n_count = static_cast<std::int64_t>(g.N_set.size());
  g.delta = g.m_weight > 0 ? std::pow(static_cast<double>(g.m_weight), -eta) : 1.0;
  return g;
}

/// m(r) alone.
inline std::int64_t dominant_weight(const CoefficientSequence& seq, double r) {
  std::int64_t m = 0;
  detail::scan_log_terms(seq, detail::log_radius(r), [&](std::int64_t n, double t) {
    if (t >= 0) m += 4 * n;
  });
  return m;
}

/// S(r) alone.
inline double S_of_r(const CoefficientSequence& seq, double r) {
  double S = 0;
  detail::scan_log_terms(seq, detail::log_radius(r), [&](std::int64_t, double t) {
    if (t >= 0) S += 2 * t;
  });
  return S;
}

/// N_delta(r) = {n : b_n(r) >= -delta}; index 0 belongs iff a_0 >= 1.
/// Negative delta is allowed and gives {n : b_n(r) >= |delta|}.
inline std::vector<std::int64_t> N_delta_set(const CoefficientSequence& seq, double r, double delta) {
  require(std::isfinite(delta), ErrorCode::InvalidArgument, "delta must be finite");
  const double log_r = detail::log_radius(r);
  std::vector<std::int64_t> out;
  detail::scan_log_terms(seq, log_r + std::max(delta, 0.0), [&](std::int64_t n, double) {
    const double la = seq.log_a(n);
    if (la == kNegInf) return;
    const bool member = n == 0 ? la >= 0 : la / static_cast<double>(n) + log_r >= -delta;
    if (member) out.push_back(n);
  });
  return out;
}

/// 2 sum log+(d a_n r^n), the dominant-term sum after rescaling every
/// coefficient by d.
inline double S_scaled(const CoefficientSequence& seq, double r, double d) {
  require(d > 0 && std::abs(std::log(d)) <= 40, ErrorCode::InvalidArgument, "scale d must satisfy |log d| <= 40");
  const double log_d = std::log(d);
  double S = 0;
  detail::scan_log_terms(seq, detail::log_radius(r), [&](std::int64_t, double t) {
    if (t + log_d > 0) S += 2 * (t + log_d);
  });
  return S;
}

struct SBoundsCheck {
  double S = 0;
  std::int64_t m_weight = 0;
  double lower_bound = 0;   // m^(1-eta) / 8
  bool lower_ok = false;
  double gamma = 0;         // 1/m
  double S_shrunk = 0;      // S((1-gamma) r)
  bool growth_ok = false;
  double S_rescaled = 0;    // S computed from d * a_n
  double scaling_gap = 0;   // |S - S_rescaled| / sqrt(m)
};

/// Evaluates the three S(r) estimates at r: the lower bound by m(r), the
/// shrink estimate S((1-1/m) r) >= S(r) - 1, and the rescaling gap for d.
/// A false `lower_ok` at small r is a finding, not an error.
inline SBoundsCheck S_bounds_check(const CoefficientSequence& seq, double r, double d = 2.0,
                                   double eta = kDefaultEta) {
  const GrowthProfile g = growth_profile(seq, r, eta);
  require(g.n_count >= 2, ErrorCode::TooFewDominantTerms, "S(r) estimates need n(r) >= 2");
  SBoundsCheck c;
  c.S = g.S;
  c.m_weight = g.m_weight;
  const double m = static_cast<double>(g.m_weight);
  c.lower_bound = std::pow(m, 1 - eta) / 8;
  c.lower_ok = g.S >= c.lower_bound;
  c.gamma = 1 / m;
  c.S_shrunk = S_of_r(seq, (1 - c.gamma) * r);
  c.growth_ok = c.S_shrunk >= g.S - c.gamma * m;
  c.S_rescaled = S_scaled(seq, r, d);
  c.scaling_gap = std::abs(g.S - c.S_rescaled) / std::sqrt(m);
  return c;
}

/// True when m(r e^{-delta}) > (1-eta) m(r) and m(r e^{delta}) < (1+eta) m(r)
/// with delta = m(r)^(-eta). Radii with m(r) = 0 pass by convention.
inline bool hayman_window(const CoefficientSequence& seq, double r, double eta = kDefaultEta) {
  const std::int64_t m = dominant_weight(seq, r);
  if (m == 0) return true;
  const double md = static_cast<double>(m);
  const double delta = std::pow(md, -eta);
  const double below = static_cast<double>(dominant_weight(seq, r * std::exp(-delta)));
  const double above = static_cast<double>(dominant_weight(seq, r * std::exp(delta)));
  return below > (1 - eta) * md && above < (1 + eta) * md;
}

}  // namespace randfun
