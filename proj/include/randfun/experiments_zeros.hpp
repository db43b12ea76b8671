#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "randfun/covariance.hpp"
#include "randfun/experiment_common.hpp"
#include "randfun/growth.hpp"
#include "randfun/parallel.hpp"
#include "randfun/sampling.hpp"
#include "randfun/stats.hpp"
#include "randfun/zeros.hpp"

namespace randfun {

// ---------------------------------------------------------------------------
// Zero counts n_f(r) against s_f(r).

inline ExperimentReport exp_zero_concentration(const CoefficientSequence& seq, const EnsembleSpec& ens,
                                               std::vector<double> r_grid, std::int64_t trials,
                                               const RunOptions& opt = {}) {
  require(trials >= 100, ErrorCode::InvalidArgument, "concentration needs at least 100 trials");
  r_grid = detail::sorted_grid(std::move(r_grid));
  ExperimentReport rep;
  rep.name = "concentration";
  rep.seed = ens.seed;
  rep.config = {{"seq", seq.describe()}, {"ensemble", to_string(ens.kind)}, {"r_grid", r_grid},
                {"trials", trials}, {"options", detail::options_json(opt)}};
  rep.columns = {"trial_id", "r", "count", "ap_count", "s_f", "abs_dev"};
  const double r_max = r_grid.back();
  struct Trial {
    bool failed = false;
    std::vector<std::int64_t> count, ap;
  };
  auto results = parallel_map<Trial>(trials, opt.threads, [&](std::int64_t t) {
    Trial out;
    try {
      const auto s = sample(seq, ens, r_max, opt.tail_tol, static_cast<std::uint64_t>(t));
      const RootCache cache(s, r_max);
      for (double r : r_grid) {
        out.count.push_back(cache.disk(r).count());
        out.ap.push_back(argument_principle_count(s, r));
      }
    } catch (const Error& e) {
      if (!detail::recoverable(e)) throw;
      out.failed = true;
    }
    return out;
  });

  std::vector<double> s_f;
  for (double r : r_grid) s_f.push_back(s_log_deriv(seq, r));
  std::int64_t failures = 0, disagreements = 0;
  std::vector<std::vector<double>> counts(r_grid.size()), devs(r_grid.size());
  for (std::int64_t t = 0; t < trials; ++t) {
    const auto& tr = results[static_cast<std::size_t>(t)];
    if (tr.failed) {
      ++failures;
      continue;
    }
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
      const double dev = std::abs(static_cast<double>(tr.count[i]) - s_f[i]);
      if (tr.count[i] != tr.ap[i]) ++disagreements;
      counts[i].push_back(static_cast<double>(tr.count[i]));
      devs[i].push_back(dev);
      rep.add_row({t, r_grid[i], tr.count[i], tr.ap[i], s_f[i], dev});
    }
  }
  ojson per_r = ojson::array();
  std::vector<double> rel_dev;
  double C_fit = 0, C_fit_filtered = 0;
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    const auto c = stats::mean_se(counts[i]);
    const auto d = stats::mean_se(devs[i]);
    const double max_dev = devs[i].empty() ? 0 : *std::max_element(devs[i].begin(), devs[i].end());
    const double s = s_f[i];
    const double rel = s > 0 ? d.mean / s : 0.0;
    rel_dev.push_back(rel);
    const bool hayman = hayman_window(seq, r_grid[i], opt.eta);
    if (s > 0) {
      const double scale = std::sqrt(s) * std::pow(std::log(std::max(s, std::numbers::e)), 4);
      C_fit = std::max(C_fit, max_dev / scale);
      if (hayman) C_fit_filtered = std::max(C_fit_filtered, max_dev / scale);
    }
    per_r.push_back({{"r", r_grid[i]},
                     {"hayman_ok", hayman},
                     {"s_f", s},
                     {"mean_count", c.mean},
                     {"se_count", c.se},
                     {"mean_within_3se", std::abs(c.mean - s) <= 3 * c.se + 1e-12},
                     {"mean_abs_dev", d.mean},
                     {"max_abs_dev", max_dev},
                     {"mean_rel_dev", rel}});
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < rel_dev.size(); ++i) {
    if (s_f[i] > 0 && s_f[i - 1] > 0 && !(rel_dev[i] < rel_dev[i - 1])) decreasing = false;
  }
  rep.summary["per_r"] = per_r;
  rep.summary["C_fit"] = C_fit;
  rep.summary["C_fit_hayman_filtered"] = C_fit_filtered;
  rep.summary["method_disagreements"] = disagreements;
  rep.summary["rel_dev_decreasing"] = decreasing;
  rep.passed = decreasing && disagreements == 0;
  detail::apply_failure_budget(rep, failures, trials);
  return rep;
}

// ---------------------------------------------------------------------------
// Sector counts n_F(r, alpha, beta) against (beta - alpha)/(2 pi) s_F(r).

inline ExperimentReport exp_equidistribution(const CoefficientSequence& seq, const EnsembleSpec& ens,
                                             std::vector<double> r_list, std::int64_t n_sectors,
                                             std::int64_t trials, double eps = 0.05, const RunOptions& opt = {}) {
  require(n_sectors >= 1 && trials >= 1, ErrorCode::InvalidArgument, "need sectors and trials");
  r_list = detail::sorted_grid(std::move(r_list));
  ExperimentReport rep;
  rep.name = "sectors";
  rep.seed = ens.seed;
  rep.config = {{"seq", seq.describe()}, {"ensemble", to_string(ens.kind)}, {"r_list", r_list},
                {"n_sectors", n_sectors}, {"trials", trials}, {"eps", eps},
                {"options", detail::options_json(opt)}};
  rep.columns = {"trial_id", "r", "sector", "count", "deviation"};
  const double r_max = r_list.back();
  const double width = 2 * std::numbers::pi / static_cast<double>(n_sectors);
  struct Trial {
    bool failed = false;
    std::vector<std::vector<std::int64_t>> counts;  // [r][sector]
  };
  auto results = parallel_map<Trial>(trials, opt.threads, [&](std::int64_t t) {
    Trial out;
    try {
      const auto s = sample(seq, ens, r_max, opt.tail_tol, static_cast<std::uint64_t>(t));
      const RootCache cache(s, r_max);
      for (double r : r_list) {
        const auto zs = cache.disk(r);
        std::vector<std::int64_t> row;
        for (std::int64_t k = 0; k < n_sectors; ++k) {
          const double hi = k + 1 == n_sectors ? 2 * std::numbers::pi : width * static_cast<double>(k + 1);
          row.push_back(sector_count(zs, width * static_cast<double>(k), hi));
        }
        out.counts.push_back(row);
      }
    } catch (const Error& e) {
      if (!detail::recoverable(e)) throw;
      out.failed = true;
    }
    return out;
  });
  std::int64_t failures = 0;
  ojson per_r = ojson::array();
  std::vector<double> ratio_s;
  bool bounded = true;
  for (std::size_t i = 0; i < r_list.size(); ++i) {
    const double s = s_log_deriv(seq, r_list[i]);
    const double expected = s / static_cast<double>(n_sectors);
    std::vector<double> max_dev;
    for (std::int64_t t = 0; t < trials; ++t) {
      const auto& tr = results[static_cast<std::size_t>(t)];
      if (tr.failed) continue;
      double m = 0;
      for (std::int64_t k = 0; k < n_sectors; ++k) {
        const double dev = static_cast<double>(tr.counts[i][static_cast<std::size_t>(k)]) - expected;
        m = std::max(m, std::abs(dev));
        rep.add_row({t, r_list[i], k, tr.counts[i][static_cast<std::size_t>(k)], dev});
      }
      max_dev.push_back(m);
    }
    const auto md = stats::mean_se(max_dev);
    const double rs = s > 0 ? md.mean / s : std::numeric_limits<double>::infinity();
    const double rg = s > 0 ? md.mean / std::pow(s, 0.75 + eps) : std::numeric_limits<double>::infinity();
    if (!std::isfinite(rg)) bounded = false;
    ratio_s.push_back(rs);
    per_r.push_back({{"r", r_list[i]},
                     {"s_f", s},
                     {"hayman_ok", hayman_window(seq, r_list[i], opt.eta)},
                     {"mean_max_dev", md.mean},
                     {"se_max_dev", md.se},
                     {"max_dev_over_s", num(rs)},
                     {"max_dev_over_s_gamma", num(rg)}});
  }
  for (const auto& tr : results) failures += tr.failed ? 1 : 0;
  bool decreasing = true;
  for (std::size_t i = 1; i < ratio_s.size(); ++i) {
    if (!(ratio_s[i] < ratio_s[i - 1])) decreasing = false;
  }
  rep.summary["per_r"] = per_r;
  rep.summary["max_dev_over_s_decreasing"] = decreasing;
  rep.summary["gamma_ratio_bounded"] = bounded;
  rep.passed = bounded && (r_list.size() < 2 || decreasing);
  detail::apply_failure_budget(rep, failures, trials);
  return rep;
}

// ---------------------------------------------------------------------------
// f(z) = sum xi_k e^{-alpha k^2} z^k with fixed signs on the first k terms.

inline ExperimentReport exp_real_zeros(double alpha, std::int64_t m_max, std::int64_t k_signs, bool expect_real,
                                       const RunOptions& opt = {}) {
  require(m_max >= 1, ErrorCode::InvalidArgument, "m_max must be positive");
  require(k_signs >= 0 && k_signs <= 12, ErrorCode::InvalidArgument, "sign patterns are enumerated for k <= 12");
  if (expect_real) {
    require(alpha >= std::log(3.0), ErrorCode::InvalidArgument,
            "alpha below log 3 requires the exploratory mode (expect_real = false)");
  } else {
    require(alpha > 0, ErrorCode::InvalidArgument, "alpha must be positive");
  }
  ExperimentReport rep;
  rep.name = "realzeros";
  rep.seed = opt.seed;
  rep.exploratory = !expect_real;
  rep.config = {{"alpha", alpha}, {"m_max", m_max}, {"k_signs", k_signs}, {"expect_real", expect_real},
                {"options", detail::options_json(opt)}};
  rep.columns = {"pattern", "m", "radius", "count", "max_imag_ratio"};
  const auto seq = CoefficientSequence::gauss_squared(alpha);
  const double r_big = std::exp(2 * alpha * static_cast<double>(m_max));
  const std::int64_t patterns = std::int64_t{1} << k_signs;
  struct Trial {
    std::vector<std::int64_t> counts;
    double imag_ratio = 0;
  };
  auto results = parallel_map<Trial>(patterns, opt.threads, [&](std::int64_t p) {
    std::vector<double> signs(static_cast<std::size_t>(k_signs));
    for (std::int64_t j = 0; j < k_signs; ++j) signs[static_cast<std::size_t>(j)] = (p >> j) & 1 ? -1.0 : 1.0;
    const auto ens = EnsembleSpec::fixed_signs(signs);
    auto s = sample(seq, ens, r_big, opt.tail_tol);
    if (s.degree() < k_signs - 1) s = sample(seq, ens, r_big, opt.tail_tol, 0, k_signs - 1);
    const RootCache cache(s, r_big);
    Trial out;
    for (const auto& root : cache.disk(r_big).roots) {
      out.imag_ratio = std::max(out.imag_ratio, std::abs(root.z.imag()) / std::abs(root.z));
    }
    for (std::int64_t m = 1; m <= m_max; ++m) {
      out.counts.push_back(cache.disk(std::exp(2 * alpha * static_cast<double>(m))).count());
    }
    return out;
  });
  bool all_real = true, exact = true;
  double worst = 0;
  std::int64_t nonreal_patterns = 0;
  for (std::int64_t p = 0; p < patterns; ++p) {
    const auto& tr = results[static_cast<std::size_t>(p)];
    worst = std::max(worst, tr.imag_ratio);
    if (!(tr.imag_ratio < 1e-7)) {
      all_real = false;
      ++nonreal_patterns;
    }
    for (std::int64_t m = 1; m <= m_max; ++m) {
      const auto c = tr.counts[static_cast<std::size_t>(m - 1)];
      if (c != m) exact = false;
      rep.add_row({p, m, std::exp(2 * alpha * static_cast<double>(m)), c, tr.imag_ratio});
    }
  }
  rep.summary["patterns"] = patterns;
  rep.summary["all_real"] = all_real;
  rep.summary["counts_exact"] = exact;
  rep.summary["max_imag_ratio"] = worst;
  rep.summary["nonreal_patterns"] = nonreal_patterns;
  if (expect_real) {
    rep.passed = all_real && exact;
  } else {
    rep.notes.push_back("exploratory run below alpha = log 3: nothing asserted; the conjectured threshold is near 0.785409");
  }
  return rep;
}

// ---------------------------------------------------------------------------
// f(z) = sum_j xi_j z^{2^j} / exp(j 2^j) on the windows around |z| = e^k.

inline double lacunary_delta(std::int64_t k) { return std::ldexp(std::log(2.0), static_cast<int>(2 - k)); }

/// Interior points of (lo, hi) avoiding each endpoint by 0.1 of the width.
inline std::vector<double> window_points(double lo, double hi, std::int64_t count) {
  std::vector<double> pts;
  const double w = hi - lo;
  for (std::int64_t i = 0; i < count; ++i) {
    pts.push_back(count == 1 ? lo + 0.5 * w
                             : lo + 0.1 * w + 0.8 * w * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  return pts;
}

inline ExperimentReport exp_lacunary_discrepancy(std::int64_t k, std::int64_t patterns, std::int64_t points = 5,
                                                 const RunOptions& opt = {}) {
  require(k >= 5 && k <= 7, ErrorCode::InvalidArgument, "k must lie in [5, 7]");
  require(patterns >= 1 && points >= 1, ErrorCode::InvalidArgument, "need patterns and points");
  const auto seq = CoefficientSequence::lacunary();
  const double kd = static_cast<double>(k);
  const double delta = lacunary_delta(k);
  ExperimentReport rep;
  rep.name = "lacunary";
  rep.seed = opt.seed;
  rep.config = {{"k", k}, {"patterns", patterns}, {"points", points}, {"options", detail::options_json(opt)}};
  rep.columns = {"pattern", "window", "s", "count", "ap_count", "s_f", "rel_gap"};
  const auto lower = window_points(kd - 2 * delta, kd - delta, points);
  const auto upper = window_points(kd + delta, kd + 2 * delta, points);
  const double r_max = std::exp(kd + 2 * delta);
  const auto low_count = std::int64_t{1} << (k - 2);
  const auto high_count = std::int64_t{1} << (k - 1);
  const double s_low_bound = 18.0 / 17.0 * static_cast<double>(low_count) * 0.9;
  const double s_high_bound = 33.0 / 34.0 * static_cast<double>(high_count) * 1.1;
  struct Trial {
    std::vector<std::int64_t> count, ap;
  };
  // pattern 0 is all +1, the rest are Rademacher draws
  auto results = parallel_map<Trial>(patterns, opt.threads, [&](std::int64_t p) {
    const auto ens = p == 0 ? EnsembleSpec::fixed_signs({}) : EnsembleSpec::rademacher(opt.seed);
    const auto s = sample(seq, ens, r_max, opt.tail_tol, static_cast<std::uint64_t>(p));
    const RootCache cache(s, r_max);
    Trial out;
    for (const auto* w : {&lower, &upper}) {
      for (double x : *w) {
        out.count.push_back(cache.disk(std::exp(x)).count());
        out.ap.push_back(argument_principle_count(s, std::exp(x)));
      }
    }
    return out;
  });
  bool counts_ok = true, bounds_ok = true;
  double c_min = std::numeric_limits<double>::infinity();
  std::vector<double> s_vals;
  for (const auto* w : {&lower, &upper}) {
    for (double x : *w) s_vals.push_back(s_log_deriv(seq, std::exp(x)));
  }
  for (std::size_t i = 0; i < s_vals.size(); ++i) {
    if (i < lower.size() ? s_vals[i] < s_low_bound : s_vals[i] > s_high_bound) bounds_ok = false;
  }
  for (std::int64_t p = 0; p < patterns; ++p) {
    const auto& tr = results[static_cast<std::size_t>(p)];
    for (std::size_t i = 0; i < s_vals.size(); ++i) {
      const bool low = i < lower.size();
      const double x = low ? lower[i] : upper[i - lower.size()];
      const auto want = low ? low_count : high_count;
      if (tr.count[i] != want || tr.ap[i] != want) counts_ok = false;
      const double gap = std::abs(static_cast<double>(tr.count[i]) - s_vals[i]) / s_vals[i];
      c_min = std::min(c_min, gap);
      rep.add_row({p, low ? "lower" : "upper", x, tr.count[i], tr.ap[i], s_vals[i], gap});
    }
  }
  rep.summary["delta_k"] = delta;
  rep.summary["expected_lower"] = low_count;
  rep.summary["expected_upper"] = high_count;
  rep.summary["s_f_lower_bound"] = s_low_bound;
  rep.summary["s_f_upper_bound"] = s_high_bound;
  rep.summary["s_f_min_lower"] = *std::min_element(s_vals.begin(), s_vals.begin() + static_cast<std::ptrdiff_t>(lower.size()));
  rep.summary["s_f_max_upper"] = *std::max_element(s_vals.begin() + static_cast<std::ptrdiff_t>(lower.size()), s_vals.end());
  rep.summary["counts_exact"] = counts_ok;
  rep.summary["s_f_bounds_hold"] = bounds_ok;
  rep.summary["c_min"] = c_min;
  rep.passed = counts_ok && bounds_ok && c_min > 0;
  return rep;
}

// ---------------------------------------------------------------------------
// Hole probability P(no zeros in |z| <= r) for Gaussian coefficients.

struct HoleRadiusSummary {
  double r = 0;
  double S = 0;
  std::int64_t holes = 0;
  double p_hat = 0;
  stats::Interval ci;
  double neg_log_p = 0;
};

inline ExperimentReport exp_hole_mc(const CoefficientSequence& seq, std::vector<double> r_grid, std::int64_t trials,
                                    const RunOptions& opt = {}) {
  require(trials >= 1, ErrorCode::InvalidArgument, "need at least one trial");
  r_grid = detail::sorted_grid(std::move(r_grid));
  for (double r : r_grid) {
    const double expected_holes = static_cast<double>(trials) * std::exp(-S_of_r(seq, r));
    if (expected_holes < 10) {
      fail(ErrorCode::RareEventInfeasible, "expected hole count below 10 at r = " + std::to_string(r) +
                                               " (the smallest infeasible radius); raise trials or lower r");
    }
  }
  const auto ens = EnsembleSpec::gaussian(opt.seed);
  ExperimentReport rep;
  rep.name = "hole";
  rep.seed = opt.seed;
  rep.config = {{"seq", seq.describe()}, {"ensemble", "gaussian"}, {"r_grid", r_grid}, {"trials", trials},
                {"options", detail::options_json(opt)}};
  rep.columns = {"trial_id", "min_modulus"};
  for (std::size_t i = 0; i < r_grid.size(); ++i) rep.columns.push_back("ap_count_" + std::to_string(i));
  const double r_max = r_grid.back();
  struct Trial {
    bool failed = false;
    double min_modulus = 0;
    std::vector<bool> hole_roots;
    std::vector<std::int64_t> ap;
  };
  auto results = parallel_map<Trial>(trials, opt.threads, [&](std::int64_t t) {
    Trial out;
    try {
      const auto s = sample(seq, ens, r_max, opt.tail_tol, static_cast<std::uint64_t>(t));
      const RootCache cache(s, r_max);
      out.min_modulus = cache.min_modulus();
      for (double r : r_grid) {
        out.hole_roots.push_back(cache.disk(r).empty());
        out.ap.push_back(argument_principle_count(s, r));
      }
    } catch (const Error& e) {
      if (!detail::recoverable(e)) throw;
      out.failed = true;
    }
    return out;
  });
  std::int64_t failures = 0, nesting = 0, disagreements = 0, used = 0;
  std::vector<std::int64_t> holes(r_grid.size(), 0);
  for (std::int64_t t = 0; t < trials; ++t) {
    const auto& tr = results[static_cast<std::size_t>(t)];
    if (tr.failed) {
      ++failures;
      continue;
    }
    ++used;
    std::vector<ojson> row{t, tr.min_modulus};
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
      const bool by_ap = tr.ap[i] == 0;
      if (by_ap != tr.hole_roots[i]) ++disagreements;
      if (i > 0 && tr.hole_roots[i] && !tr.hole_roots[i - 1]) ++nesting;
      if (i > 0 && by_ap && tr.ap[i - 1] != 0) ++nesting;
      holes[i] += tr.hole_roots[i] ? 1 : 0;
      row.push_back(tr.ap[i]);
    }
    rep.add_row(std::move(row));
  }
  ojson per_r = ojson::array();
  std::vector<double> nlp;
  Table radii{"radii", {"r", "S", "holes", "p_hat", "ci_lo", "ci_hi", "neg_log_p"}, {}};
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    const double p = used ? static_cast<double>(holes[i]) / static_cast<double>(used) : 0.0;
    const auto ci = used ? stats::wilson(holes[i], used) : stats::Interval{};
    const double neg_log = -std::log(p);
    nlp.push_back(neg_log);
    radii.rows.push_back({r_grid[i], S_of_r(seq, r_grid[i]), holes[i], p, ci.lo, ci.hi, neg_log});
    ojson e = {{"r", r_grid[i]},  {"S", S_of_r(seq, r_grid[i])}, {"holes", holes[i]}, {"p_hat", p},
               {"ci_lo", ci.lo},  {"ci_hi", ci.hi},              {"neg_log_p", num(neg_log)}};
    try {
      const auto b = hole_bound_pair(seq, r_grid[i]);
      e["upper"] = b.upper;
      e["lower"] = b.lower;
      e["hayman_ok"] = b.hayman_ok;
    } catch (const Error& err) {
      if (err.code() != ErrorCode::TooFewDominantTerms) throw;
      e["upper"] = nullptr;
      e["lower"] = nullptr;
      e["hayman_ok"] = nullptr;
    }
    per_r.push_back(e);
  }
  bool nondecreasing = true;
  for (std::size_t i = 1; i < nlp.size(); ++i) {
    if (nlp[i] < nlp[i - 1]) nondecreasing = false;
  }
  rep.tables.push_back(std::move(radii));
  rep.summary["per_r"] = per_r;
  rep.summary["trials_used"] = used;
  rep.summary["nesting_violations"] = nesting;
  rep.summary["method_disagreements"] = disagreements;
  rep.summary["neg_log_p_strictly_increasing"] = stats::strictly_increasing(nlp);
  rep.passed = nesting == 0 && disagreements == 0 && nondecreasing;
  detail::apply_failure_budget(rep, failures, trials);
  return rep;
}

// ---------------------------------------------------------------------------
// The event Omega_r forces a zero-free disk.

inline ExperimentReport exp_omega_soundness(const CoefficientSequence& seq, double r, std::int64_t trials,
                                            std::int64_t conditioned_trials, const RunOptions& opt = {}) {
  const auto ens = EnsembleSpec::gaussian(opt.seed);
  const auto sets = omega_index_sets(seq, r, opt.eta);
  const auto probs = envelope_event_probability(seq, ens, r, std::nullopt, opt.eta);
  const double C = probs.C;
  ExperimentReport rep;
  rep.name = "omega";
  rep.seed = opt.seed;
  rep.config = {{"seq", seq.describe()}, {"r", r}, {"trials", trials}, {"conditioned_trials", conditioned_trials},
                {"options", detail::options_json(opt)}};
  rep.columns = {"trial_id", "conditioned", "omega_holds", "zero_count"};
  struct Trial {
    bool holds = false;
    bool clamped = false;
    std::int64_t zeros = -1;
  };
  auto unconditioned = parallel_map<Trial>(trials, opt.threads, [&](std::int64_t t) {
    const auto s = sample(seq, ens, r, opt.tail_tol, static_cast<std::uint64_t>(t));
    const auto chk = omega_holds(s, sets, C);
    Trial out{chk.holds, chk.clamped, -1};
    if (chk.holds) out.zeros = find_zeros_disk(s, r).count();
    return out;
  });
  auto conditioned = parallel_map<Trial>(conditioned_trials, opt.threads, [&](std::int64_t t) {
    const auto base = sample(seq, ens, r, opt.tail_tol, static_cast<std::uint64_t>(t));
    const auto s = sample_conditioned_on_omega(base, sets, C);
    const auto chk = omega_holds(s, sets, C);
    return Trial{chk.holds, chk.clamped, find_zeros_disk(s, r).count()};
  });
  std::int64_t hits = 0, counterexamples = 0, predicate_misses = 0;
  bool clamped = false;
  for (std::int64_t t = 0; t < trials; ++t) {
    const auto& tr = unconditioned[static_cast<std::size_t>(t)];
    clamped = clamped || tr.clamped;
    if (!tr.holds) continue;
    ++hits;
    if (tr.zeros != 0) ++counterexamples;
    rep.add_row({t, false, true, tr.zeros});
  }
  for (std::int64_t t = 0; t < conditioned_trials; ++t) {
    const auto& tr = conditioned[static_cast<std::size_t>(t)];
    clamped = clamped || tr.clamped;
    if (!tr.holds) ++predicate_misses;
    if (tr.holds && tr.zeros != 0) ++counterexamples;
    rep.add_row({t, true, tr.holds, tr.zeros});
  }
  const double m = static_cast<double>(probs.m_weight);
  rep.summary["S"] = probs.S;
  rep.summary["m"] = probs.m_weight;
  rep.summary["n"] = probs.n_count;
  rep.summary["delta"] = probs.delta;
  rep.summary["C"] = C;
  rep.summary["C1"] = sets.C1;
  rep.summary["C2"] = sets.C2;
  rep.summary["log_p_i"] = probs.log_p_i;
  rep.summary["log_p_ii"] = probs.log_p_ii;
  rep.summary["log_p_iii"] = probs.log_p_iii;
  rep.summary["log_p_iv"] = probs.log_p_iv;
  rep.summary["log_p_iv_bound"] = probs.log_p_iv_bound;
  rep.summary["log_p_omega"] = probs.total;
  rep.summary["C_prime"] = num(probs.C_prime);
  rep.summary["bound_rhs"] = num(-probs.S - probs.C_prime * std::sqrt(m) * std::log(m));
  rep.summary["unconditioned_trials"] = trials;
  rep.summary["unconditioned_hits"] = hits;
  rep.summary["conditioned_trials"] = conditioned_trials;
  rep.summary["conditioned_predicate_misses"] = predicate_misses;
  rep.summary["counterexamples"] = counterexamples;
  rep.summary["index_clamped"] = clamped;
  if (hits == 0) rep.notes.push_back("no unconditioned sample satisfied Omega_r; soundness rests on conditioned samples");
  if (clamped) rep.notes.push_back("part of the extended index set lies beyond the sample degree and was clamped");
  rep.passed = counterexamples == 0 && predicate_misses == 0;
  return rep;
}

// ---------------------------------------------------------------------------
// Smallest zero of Rademacher series on GEF magnitudes.

inline ExperimentReport exp_counterexample_r0(std::int64_t trials, std::int64_t degree, bool all_plus = false,
                                              const RunOptions& opt = {}) {
  require(trials >= 1 && degree >= 1, ErrorCode::InvalidArgument, "need trials and a positive degree");
  const auto seq = CoefficientSequence::gef();
  const auto ens = all_plus ? EnsembleSpec::fixed_signs({}) : EnsembleSpec::rademacher(opt.seed);
  ExperimentReport rep;
  rep.name = "counterexample";
  rep.seed = opt.seed;
  rep.config = {{"trials", trials}, {"degree", degree}, {"all_plus", all_plus}, {"options", detail::options_json(opt)}};
  rep.columns = {"trial_id", "min_modulus"};
  const double r_cert = 4.0;
  auto mins = parallel_map<double>(trials, opt.threads, [&](std::int64_t t) {
    const auto s = sample(seq, ens, r_cert, opt.tail_tol, static_cast<std::uint64_t>(t), degree);
    double m = std::numeric_limits<double>::infinity();
    for (const auto& z : truncation_roots(s, 1.0)) m = std::min(m, std::abs(z));
    return m;
  });
  double r0 = 0;
  for (std::int64_t t = 0; t < trials; ++t) {
    r0 = std::max(r0, mins[static_cast<std::size_t>(t)]);
    rep.add_row({t, mins[static_cast<std::size_t>(t)]});
  }
  constexpr int bins = 10;
  std::vector<std::int64_t> hist(bins, 0);
  for (double m : mins) {
    const int b = r0 > 0 ? std::min(bins - 1, static_cast<int>(m / r0 * bins)) : 0;
    ++hist[static_cast<std::size_t>(b)];
  }
  rep.summary["r0_hat"] = r0;
  rep.summary["histogram_bin_width"] = r0 / bins;
  rep.summary["histogram"] = hist;
  rep.summary["within_certified_disk"] = r0 <= r_cert;
  rep.exploratory = true;
  rep.notes.push_back("estimate only: the radius r0 has no closed form");
  return rep;
}

// ---------------------------------------------------------------------------
// sum over solutions of f = b in |w| <= r of (1 - |w|) for unit-disk series.

inline ExperimentReport exp_kahane_range(const CoefficientSequence& seq, std::vector<double> r_list,
                                         const std::vector<cplx>& b_list, std::int64_t trials,
                                         const RunOptions& opt = {}) {
  require(seq.kind() == SequenceKind::UnitDisk && seq.alpha() <= 0.5, ErrorCode::InvalidArgument,
          "profile must be a unit-disk profile with divergent sum a_n^2 (unitdisk with kappa <= 1/2)");
  require(!b_list.empty() && trials >= 1, ErrorCode::InvalidArgument, "need targets and trials");
  r_list = detail::sorted_grid(std::move(r_list));
  for (double r : r_list) require(r < 1, ErrorCode::InvalidArgument, "radii must lie below 1");
  const auto ens = EnsembleSpec::rademacher(opt.seed);
  ExperimentReport rep;
  rep.name = "kahane";
  rep.seed = opt.seed;
  ojson bs = ojson::array();
  for (const auto& b : b_list) bs.push_back({b.real(), b.imag()});
  rep.config = {{"seq", seq.describe()}, {"r_list", r_list}, {"b_list", bs}, {"trials", trials},
                {"options", detail::options_json(opt)}};
  rep.columns = {"trial_id", "b_re", "b_im", "r", "count", "partial_sum"};
  // largest radius whose truncation is feasible
  std::vector<double> feasible;
  for (double r : r_list) {
    try {
      detail::choose_truncation(seq, std::log(r), std::log(opt.tail_tol), std::nullopt);
      feasible.push_back(r);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TruncationFailure) throw;
      break;
    }
  }
  require(!feasible.empty(), ErrorCode::TruncationFailure, "no radius in the list admits a certified truncation");
  if (feasible.size() < r_list.size()) {
    rep.notes.push_back("truncation infeasible beyond r = " + std::to_string(feasible.back()));
  }
  const double r_star = feasible.back();
  struct Trial {
    std::vector<std::vector<std::int64_t>> counts;  // [b][r]
    std::vector<std::vector<double>> sums;
  };
  auto results = parallel_map<Trial>(trials, opt.threads, [&](std::int64_t t) {
    const auto s = sample(seq, ens, r_star, opt.tail_tol, static_cast<std::uint64_t>(t));
    Trial out;
    for (const auto& b : b_list) {
      const auto shifted = s.shifted(b);
      const RootCache cache(shifted, r_star);
      std::vector<std::int64_t> cs;
      std::vector<double> ss;
      for (double r : feasible) {
        const auto zs = cache.disk(r);
        double acc = 0;
        for (const auto& root : zs.roots) acc += root.multiplicity * (1 - std::abs(root.z));
        cs.push_back(zs.count());
        ss.push_back(acc);
      }
      out.counts.push_back(cs);
      out.sums.push_back(ss);
    }
    return out;
  });
  bool per_sample_monotone = true;
  ojson per_b = ojson::array();
  bool growing = true;
  for (std::size_t bi = 0; bi < b_list.size(); ++bi) {
    std::vector<double> mean_sum(feasible.size(), 0.0);
    for (std::int64_t t = 0; t < trials; ++t) {
      const auto& tr = results[static_cast<std::size_t>(t)];
      for (std::size_t i = 0; i < feasible.size(); ++i) {
        if (i > 0 && tr.sums[bi][i] < tr.sums[bi][i - 1]) per_sample_monotone = false;
        mean_sum[i] += tr.sums[bi][i] / static_cast<double>(trials);
        rep.add_row({t, b_list[bi].real(), b_list[bi].imag(), feasible[i], tr.counts[bi][i], tr.sums[bi][i]});
      }
    }
    if (feasible.size() > 1 && !stats::strictly_increasing(mean_sum)) growing = false;
    per_b.push_back({{"b", {b_list[bi].real(), b_list[bi].imag()}}, {"r", feasible}, {"mean_partial_sum", mean_sum}});
  }
  rep.summary["per_b"] = per_b;
  rep.summary["max_feasible_r"] = r_star;
  rep.summary["per_sample_nondecreasing"] = per_sample_monotone;
  rep.summary["mean_strictly_increasing"] = growing;
  rep.notes.push_back("finite runs show a trend only; almost sure divergence cannot be established numerically");
  rep.passed = per_sample_monotone && growing;
  return rep;
}

}  // namespace randfun
