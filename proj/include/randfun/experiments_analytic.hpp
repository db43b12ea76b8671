#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

#include "randfun/experiment_common.hpp"
#include "randfun/parallel.hpp"
#include "randfun/rng.hpp"
#include "randfun/stats.hpp"

namespace randfun {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Taylor coefficients of exp(z^2/2 + beta z).

struct LogCoefficient {
  double log_abs = kNegInf;  // -inf encodes an exact zero
  cplx phase{0.0, 0.0};
};

/// b_0 .. b_{n_max} from n b_n = beta b_{n-1} + b_{n-2}, kept as
/// (log |b_n|, b_n / |b_n|) so nothing overflows.
inline std::vector<LogCoefficient> exp_quadratic_coefficients(cplx beta, std::int64_t n_max) {
  require(n_max >= 1, ErrorCode::InvalidArgument, "n_max must be positive");
  std::vector<LogCoefficient> b(static_cast<std::size_t>(n_max) + 1);
  b[0] = {0.0, 1.0};
  if (beta != cplx{}) b[1] = {std::log(std::abs(beta)), beta / std::abs(beta)};
  const double log_beta = beta == cplx{} ? kNegInf : std::log(std::abs(beta));
  const cplx beta_phase = beta == cplx{} ? cplx{} : beta / std::abs(beta);
  for (std::int64_t n = 2; n <= n_max; ++n) {
    const auto& p1 = b[static_cast<std::size_t>(n - 1)];
    const auto& p2 = b[static_cast<std::size_t>(n - 2)];
    const double l1 = p1.log_abs + log_beta;
    const double M = std::max(l1, p2.log_abs);
    auto& out = b[static_cast<std::size_t>(n)];
    if (M == kNegInf) continue;
    cplx v{};
    if (l1 != kNegInf) v += beta_phase * p1.phase * std::exp(l1 - M);
    if (p2.log_abs != kNegInf) v += p2.phase * std::exp(p2.log_abs - M);
    if (v == cplx{}) continue;
    out.log_abs = M + std::log(std::abs(v)) - std::log(static_cast<double>(n));
    out.phase = v / std::abs(v);
  }
  return b;
}

inline ExperimentReport exp_coeff_asymptotics(cplx beta, std::int64_t n_max, const RunOptions& opt = {}) {
  require(n_max >= 16, ErrorCode::InvalidArgument, "n_max must be at least 16");
  const auto b = exp_quadratic_coefficients(beta, n_max);
  ExperimentReport rep;
  rep.name = "asymptotics";
  rep.seed = opt.seed;
  rep.config = {{"beta", {beta.real(), beta.imag()}}, {"n_max", n_max}};
  rep.columns = {"n", "log_abs_b", "arg_b", "residual"};
  const bool real_beta = beta.imag() == 0 && beta.real() != 0;
  const bool imag_beta = beta.real() == 0 && beta.imag() != 0;
  // residual(n) = log|b_{n-1}| + (n/2) log(n/e) - |Re beta| sqrt(n)
  std::vector<double> res(static_cast<std::size_t>(n_max) + 1, std::numeric_limits<double>::quiet_NaN());
  for (std::int64_t n = 2; n <= n_max; ++n) {
    const auto& c = b[static_cast<std::size_t>(n - 1)];
    const double nd = static_cast<double>(n);
    const double r = c.log_abs + 0.5 * nd * (std::log(nd) - 1) - std::abs(beta.real()) * std::sqrt(nd);
    res[static_cast<std::size_t>(n)] = r;
    rep.add_row({n, num(c.log_abs), c.log_abs == kNegInf ? 0.0 : std::arg(c.phase), num(r)});
  }
  bool passed = true;
  if (beta == cplx{}) {
    bool odd_zero = true;
    for (std::size_t k = 1; k < b.size(); k += 2) odd_zero = odd_zero && b[k].log_abs == kNegInf;
    rep.summary["odd_coefficients_zero"] = odd_zero;
    passed = odd_zero;
  }
  if (real_beta) {
    std::vector<double> lx, ly;
    for (std::int64_t n = n_max / 8; 2 * n <= n_max; ++n) {
      const double d = std::abs(res[static_cast<std::size_t>(2 * n)] - res[static_cast<std::size_t>(n)]);
      if (d > 0) {
        lx.push_back(std::log(static_cast<double>(n)));
        ly.push_back(std::log(d));
      }
    }
    const auto fit = stats::fit_line(lx, ly);
    std::vector<double> x, y;
    for (std::int64_t n = n_max / 4; n <= n_max; ++n) {
      x.push_back(1 / std::sqrt(static_cast<double>(n)));
      y.push_back(res[static_cast<std::size_t>(n)]);
    }
    const auto lim = stats::fit_line(x, y);
    const double gap = std::abs(res[static_cast<std::size_t>(n_max)] - lim.intercept);
    bool approaching = true;
    double prev = std::numeric_limits<double>::infinity();
    for (std::int64_t n = 8; n <= n_max; n *= 2) {
      const double d = std::abs(res[static_cast<std::size_t>(n)] - lim.intercept);
      approaching = approaching && d < prev;
      prev = d;
    }
    rep.summary["difference_rate_exponent"] = fit.slope;
    rep.summary["limit_estimate"] = lim.intercept;
    rep.summary["final_gap_to_limit"] = gap;
    rep.summary["gap_decreasing"] = approaching;
    passed = fit.slope >= -0.8 && fit.slope <= -0.3 && gap < 0.05;
  }
  if (imag_beta) {
    // q(n) = b_{n-1} (n/e)^{n/2} / (e^{beta sqrt n} + (-1)^{n-1} e^{-beta sqrt n}) settles to a constant
    // away from the zeros of the bracket; the alternative sign (-1)^n is reported for contrast.
    auto spread = [&](int sign_shift) {
      std::vector<cplx> q;
      for (std::int64_t n = n_max / 2; n <= n_max; ++n) {
        const double nd = static_cast<double>(n);
        const double sgn = ((n - 1 + sign_shift) % 2 == 0) ? 1.0 : -1.0;
        const cplx den = std::exp(beta * std::sqrt(nd)) + sgn * std::exp(-beta * std::sqrt(nd));
        if (std::abs(den) < 1) continue;
        const auto& c = b[static_cast<std::size_t>(n - 1)];
        q.push_back(c.phase * std::exp(c.log_abs + 0.5 * nd * (std::log(nd) - 1)) / den);
      }
      std::vector<double> re(q.size());
      for (std::size_t i = 0; i < q.size(); ++i) re[i] = q[i].real();
      std::nth_element(re.begin(), re.begin() + static_cast<std::ptrdiff_t>(re.size() / 2), re.end());
      const double med = re[re.size() / 2];
      double agree = 0, worst = 0;
      for (const auto& v : q) {
        agree += (v.real() * med > 0) ? 1 : 0;
        worst = std::max(worst, std::abs(v - med) / std::abs(med));
      }
      return std::array<double, 3>{med, agree / static_cast<double>(q.size()), worst};
    };
    const auto idx = spread(0);
    const auto alt = spread(1);
    rep.summary["ratio_median"] = idx[0];
    rep.summary["sign_agreement"] = idx[1];
    rep.summary["relative_spread"] = idx[2];
    rep.summary["sign_agreement_alternative"] = alt[1];
    passed = idx[1] == 1.0 && idx[2] < 0.25;
  }
  if (!real_beta && !imag_beta && beta != cplx{}) rep.exploratory = true;
  rep.passed = passed;
  return rep;
}

// ---------------------------------------------------------------------------
// Log-integrability of Rademacher Fourier series.

/// Coefficients b_n = 1 for |n| < K (2K - 1 of them), before normalisation.
inline std::vector<double> flat_profile(std::int64_t K) {
  require(K >= 1, ErrorCode::InvalidArgument, "profile half-width must be positive");
  return std::vector<double>(static_cast<std::size_t>(2 * K - 1), 1.0);
}

inline ExperimentReport exp_log_moments(std::vector<double> profile, std::vector<double> q_list, std::int64_t trials,
                                        const RunOptions& opt = {}) {
  require(profile.size() % 2 == 1, ErrorCode::InvalidArgument, "profile needs odd length (frequencies -K..K)");
  require(!q_list.empty() && trials >= 1, ErrorCode::InvalidArgument, "need q values and trials");
  std::sort(q_list.begin(), q_list.end());
  for (double q : q_list) require(q > 0, ErrorCode::InvalidArgument, "q must be positive");
  double norm = 0;
  for (double b : profile) norm += b * b;
  require(norm > 0, ErrorCode::InvalidArgument, "profile is zero");
  for (double& b : profile) b /= std::sqrt(norm);
  const auto K = static_cast<std::int64_t>(profile.size() / 2);
  const std::int64_t nodes = std::max<std::int64_t>(64, 16 * K);
  ExperimentReport rep;
  rep.name = "moments";
  rep.seed = opt.seed;
  rep.config = {{"profile_size", profile.size()}, {"q_list", q_list}, {"trials", trials}, {"nodes", nodes},
                {"options", detail::options_json(opt)}};
  rep.columns = {"trial_id", "q", "integral"};
  const std::size_t F = profile.size();
  std::vector<cplx> table(static_cast<std::size_t>(nodes) * F);
  for (std::int64_t j = 0; j < nodes; ++j) {
    for (std::size_t k = 0; k < F; ++k) {
      const double freq = static_cast<double>(static_cast<std::int64_t>(k) - K);
      table[static_cast<std::size_t>(j) * F + k] =
          std::polar(1.0, 2 * std::numbers::pi * freq * static_cast<double>(j) / static_cast<double>(nodes));
    }
  }
  auto integrals = parallel_map<std::vector<double>>(trials, opt.threads, [&](std::int64_t t) {
    const Substream s(opt.seed, static_cast<std::uint64_t>(t), Stream::Coefficients);
    std::vector<double> c(F);
    for (std::size_t k = 0; k < F; ++k) c[k] = profile[k] * s.rademacher(k);
    std::vector<double> out(q_list.size(), 0.0);
    for (std::int64_t j = 0; j < nodes; ++j) {
      cplx g{};
      for (std::size_t k = 0; k < F; ++k) g += c[k] * table[static_cast<std::size_t>(j) * F + k];
      const double l = std::abs(std::log(std::abs(g)));
      for (std::size_t i = 0; i < q_list.size(); ++i) out[i] += std::pow(l, q_list[i]);
    }
    for (auto& v : out) v /= static_cast<double>(nodes);
    return out;
  });
  bool finite = true, power_mean = true;
  std::vector<std::vector<double>> per_q(q_list.size());
  for (std::int64_t t = 0; t < trials; ++t) {
    const auto& v = integrals[static_cast<std::size_t>(t)];
    for (std::size_t i = 0; i < q_list.size(); ++i) {
      finite = finite && std::isfinite(v[i]);
      per_q[i].push_back(v[i]);
      rep.add_row({t, q_list[i], num(v[i])});
      if (i > 0) {
        const double lo = std::pow(v[i - 1], 1 / q_list[i - 1]);
        const double hi = std::pow(v[i], 1 / q_list[i]);
        if (hi < lo * (1 - 1e-12)) power_mean = false;
      }
    }
  }
  ojson per = ojson::array();
  double C_fit = 0;
  for (std::size_t i = 0; i < q_list.size(); ++i) {
    const auto ms = stats::mean_se(per_q[i]);
    const double root = std::pow(ms.mean, 1 / q_list[i]);
    C_fit = std::max(C_fit, root / std::pow(q_list[i], 6));
    per.push_back({{"q", q_list[i]}, {"moment", num(ms.mean)}, {"se", num(ms.se)}, {"moment_root", num(root)}});
  }
  rep.summary["per_q"] = per;
  rep.summary["C_fit"] = num(C_fit);
  rep.summary["finite"] = finite;
  rep.summary["power_mean_ordered"] = power_mean;
  rep.passed = finite && power_mean;
  return rep;
}

// ---------------------------------------------------------------------------
// g_N(theta) = sin(2 pi theta)^{2N}.

struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
};

/// \int_0^1 sin^{4N}(2 pi theta) d theta = C(4N, 2N) / 4^{2N}, reduced.
inline Rational gN_l2_exact(std::int64_t N) {
  require(N >= 1 && N <= 15, ErrorCode::InvalidArgument, "exact arithmetic supports 1 <= N <= 15");
  std::uint64_t c = 1;
  const auto n = static_cast<std::uint64_t>(4 * N);
  const auto k = static_cast<std::uint64_t>(2 * N);
  for (std::uint64_t i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
  const std::uint64_t d = std::uint64_t{1} << (4 * N);
  const std::uint64_t g = std::gcd(c, d);
  return {c / g, d / g};
}

inline ExperimentReport exp_gN_sharpness(const std::vector<std::int64_t>& N_list, const RunOptions& opt = {}) {
  require(!N_list.empty(), ErrorCode::InvalidArgument, "need at least one N");
  ExperimentReport rep;
  rep.name = "gn";
  rep.seed = opt.seed;
  rep.config = {{"N_list", N_list}};
  rep.columns = {"N", "l2_num", "l2_den", "l2", "l2_quadrature", "sup_small_window", "sup_bound", "c0",
                 "N_times_l2"};
  bool ok = true;
  double c_min = std::numeric_limits<double>::infinity(), c0_min = c_min;
  for (auto N : N_list) {
    const auto exact = gN_l2_exact(N);
    const double l2 = static_cast<double>(exact.num) / static_cast<double>(exact.den);
    // the trapezoid rule is exact for trigonometric polynomials of degree < nodes
    const std::int64_t nodes = 8 * N + 8;
    double quad = 0;
    for (std::int64_t j = 0; j < nodes; ++j) {
      quad += std::pow(std::sin(2 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(nodes)),
                       static_cast<double>(4 * N));
    }
    quad /= static_cast<double>(nodes);
    const double Nd = static_cast<double>(N);
    const double x = 2 * std::numbers::pi * std::exp(-Nd);
    const double sup = std::pow(std::sin(x), 2 * Nd);
    const double bound = std::pow(x, 2 * Nd);
    const double c0 = -std::log(sup) / (Nd * Nd);
    c_min = std::min(c_min, Nd * l2);
    c0_min = std::min(c0_min, c0);
    ok = ok && sup <= bound && std::abs(quad - l2) <= 1e-14;
    rep.add_row({N, exact.num, exact.den, l2, quad, sup, bound, c0, Nd * l2});
  }
  rep.summary["c_min"] = c_min;
  rep.summary["c0_min"] = c0_min;
  rep.passed = ok;
  return rep;
}

// ---------------------------------------------------------------------------
// Khinchin inequalities for Rademacher linear and bilinear forms.

inline ExperimentReport exp_khinchin(std::vector<double> p_list, std::int64_t dim, std::int64_t trials,
                                     std::int64_t vectors = 4, const RunOptions& opt = {}) {
  require(!p_list.empty() && dim >= 2 && trials >= 2 && vectors >= 1, ErrorCode::InvalidArgument,
          "need p values, dim >= 2, trials >= 2 and at least one vector");
  std::sort(p_list.begin(), p_list.end());
  for (double p : p_list) require(p >= 1, ErrorCode::InvalidArgument, "p must be >= 1");
  ExperimentReport rep;
  rep.name = "khinchin";
  rep.seed = opt.seed;
  rep.config = {{"p_list", p_list}, {"dim", dim}, {"trials", trials}, {"vectors", vectors},
                {"options", detail::options_json(opt)}};
  rep.columns = {"vector", "form", "p", "ratio", "ratio_scaled", "se"};
  const auto D = static_cast<std::size_t>(dim);
  bool p2_ok = true;
  double worst_lin = 0, worst_bil = 0;
  for (std::int64_t v = 0; v < vectors; ++v) {
    SubstreamCursor gen(Substream(opt.seed, static_cast<std::uint64_t>(v), Stream::Vectors));
    std::vector<double> a(D), A(D * D, 0.0);
    double na = 0, nA = 0;
    for (auto& x : a) {
      x = gen.normal();
      na += x * x;
    }
    for (std::size_t k = 0; k < D; ++k) {
      for (std::size_t l = 0; l < D; ++l) {
        if (k == l) continue;
        A[k * D + l] = gen.normal();
        nA += A[k * D + l] * A[k * D + l];
      }
    }
    for (auto& x : a) x /= std::sqrt(na);
    for (auto& x : A) x /= std::sqrt(nA);
    struct Draw {
      double lin = 0, bil = 0;
    };
    auto draws = parallel_map<Draw>(trials, opt.threads, [&](std::int64_t t) {
      const Substream s(opt.seed, static_cast<std::uint64_t>(v * trials + t), Stream::Coefficients);
      std::vector<double> xi(D);
      for (std::size_t k = 0; k < D; ++k) xi[k] = s.rademacher(k);
      Draw d;
      for (std::size_t k = 0; k < D; ++k) {
        d.lin += a[k] * xi[k];
        double row = 0;
        for (std::size_t l = 0; l < D; ++l) row += A[k * D + l] * xi[l];
        d.bil += xi[k] * row;
      }
      return d;
    });
    for (double p : p_list) {
      for (int form = 0; form < 2; ++form) {
        std::vector<double> pw;
        for (const auto& d : draws) pw.push_back(std::pow(std::abs(form == 0 ? d.lin : d.bil), p));
        const auto ms = stats::mean_se(pw);
        const double ratio = std::pow(ms.mean, 1 / p);
        const double se = ms.se / (p * std::pow(ms.mean, 1 - 1 / p));
        const double scaled = form == 0 ? ratio / std::sqrt(p) : ratio / p;
        if (form == 0) {
          worst_lin = std::max(worst_lin, scaled);
          if (p == 2 && std::abs(ms.mean - 1) > 3 * ms.se) p2_ok = false;
        } else {
          worst_bil = std::max(worst_bil, scaled);
        }
        rep.add_row({v, form == 0 ? "linear" : "bilinear", p, ratio, scaled, se});
      }
    }
  }
  rep.summary["max_linear_ratio_over_sqrt_p"] = worst_lin;
  rep.summary["max_bilinear_ratio_over_p"] = worst_bil;
  rep.summary["p2_linear_within_3se"] = p2_ok;
  rep.passed = p2_ok && worst_lin <= 4 && worst_bil <= 4;
  return rep;
}

// ---------------------------------------------------------------------------
// Turan-type comparison sup_J |p| <= (C m(J)/m(E))^n sup_E |p|.

inline ExperimentReport exp_turan_diagnostic(std::int64_t n_freq, std::int64_t trials, bool e_equals_j = false,
                                             std::int64_t grid = 4096, const RunOptions& opt = {}) {
  require(n_freq >= 1 && trials >= 1 && grid >= 16, ErrorCode::InvalidArgument, "need frequencies, trials, grid");
  ExperimentReport rep;
  rep.name = "turan";
  rep.seed = opt.seed;
  rep.config = {{"n_freq", n_freq}, {"trials", trials}, {"e_equals_j", e_equals_j}, {"grid", grid},
                {"options", detail::options_json(opt)}};
  rep.columns = {"trial_id", "C_hat", "measure_ratio", "sup_ratio"};
  struct Trial {
    double C_hat = 0, measure_ratio = 0, sup_ratio = 0;
  };
  const auto exponent = static_cast<double>(n_freq - 1);
  auto res = parallel_map<Trial>(trials, opt.threads, [&](std::int64_t t) {
    SubstreamCursor gen(Substream(opt.seed, static_cast<std::uint64_t>(t), Stream::Intervals));
    std::vector<double> lambda(static_cast<std::size_t>(n_freq));
    std::vector<cplx> c(static_cast<std::size_t>(n_freq));
    for (auto& l : lambda) l = gen.uniform(-20.0, 20.0);
    for (auto& x : c) x = gen.complex_gaussian();
    const double a = gen.uniform(-1.0, 1.0);
    const double L = gen.uniform(0.5, 2.0);
    // E: 1-3 disjoint pieces of J in relative coordinates, each at least 1% long
    std::vector<std::pair<double, double>> pieces;
    if (e_equals_j) {
      pieces.push_back({0.0, 1.0});
    } else {
      const int k = 1 + static_cast<int>(gen.uniform() * 3);
      for (;;) {
        std::vector<double> pts(static_cast<std::size_t>(2 * k));
        for (auto& p : pts) p = gen.uniform();
        std::sort(pts.begin(), pts.end());
        bool ok = true;
        for (int i = 0; i < k; ++i) ok = ok && pts[2 * i + 1] - pts[2 * i] >= 0.01;
        if (!ok) continue;
        for (int i = 0; i < k; ++i) pieces.push_back({pts[2 * i], pts[2 * i + 1]});
        break;
      }
    }
    double supJ = 0, supE = 0;
    for (std::int64_t i = 0; i < grid; ++i) {
      const double u = static_cast<double>(i) / static_cast<double>(grid - 1);
      const double tt = a + L * u;
      cplx v{};
      for (std::size_t k = 0; k < c.size(); ++k) v += c[k] * std::polar(1.0, lambda[k] * tt);
      const double m = std::abs(v);
      supJ = std::max(supJ, m);
      for (const auto& [lo, hi] : pieces) {
        if (lo <= u && u <= hi) supE = std::max(supE, m);
      }
    }
    double mE = 0;
    for (const auto& [lo, hi] : pieces) mE += hi - lo;
    Trial out;
    out.measure_ratio = mE;
    out.sup_ratio = supJ / supE;
    out.C_hat = exponent > 0 ? std::pow(out.sup_ratio, 1 / exponent) * mE : mE;
    return out;
  });
  double max_all = 0, max_half = 0;
  for (std::int64_t t = 0; t < trials; ++t) {
    const auto& r = res[static_cast<std::size_t>(t)];
    max_all = std::max(max_all, r.C_hat);
    if (2 * t < trials || trials == 1) max_half = std::max(max_half, r.C_hat);
    rep.add_row({t, r.C_hat, r.measure_ratio, r.sup_ratio});
  }
  rep.summary["exponent"] = exponent;
  rep.summary["max_C_hat"] = max_all;
  rep.summary["max_C_hat_first_half"] = max_half;
  rep.summary["growth_second_half"] = max_half > 0 ? max_all / max_half : 0.0;
  rep.notes.push_back("diagnostic: the comparison constant is unspecified, only finiteness and stability are checked");
  rep.passed = std::isfinite(max_all);
  return rep;
}

}  // namespace randfun
