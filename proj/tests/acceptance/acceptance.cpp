// One PASS/FAIL line per acceptance criterion. A criterion also fails when it
// exceeds its runtime budget. Exit status is nonzero if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "randfun/randfun.hpp"

using namespace randfun;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

// Reference hole fraction at r = 0.5, frozen from an independent numpy run:
//   python3 tests/oracles/hole_probability_oracle.py --trials 1000000 --seed 20261016
constexpr double kOracleHoles = 754289;
constexpr double kOracleTrials = 1e6;

Outcome gef_closed_forms() {
  const auto gef = CoefficientSequence::gef();
  double worst = 0;
  for (double r : {0.5, 1.0, 2.0, 4.0}) {
    const double s2 = std::exp(log_sigma2(gef, r));
    worst = std::max(worst, std::abs(s2 / std::exp(r * r) - 1));
    worst = std::max(worst, std::abs(s_log_deriv(gef, r) / (r * r) - 1));
  }
  return {worst < 1e-10, fmt("max relative error %.3g", worst)};
}

Outcome hole_constant_trend() {
  const auto gef = CoefficientSequence::gef();
  std::vector<double> ratio;
  for (double r : {5.0, 10.0, 20.0}) ratio.push_back(S_of_r(gef, r) / std::pow(r, 4));
  const double target = std::exp(2.0) / 4;
  const double gap = std::abs(ratio.back() / target - 1);
  return {gap <= 0.02 && stats::strictly_increasing(ratio),
          fmt("S/r^4 = %.5f, %.5f, %.5f; gap at r=20 %.4f", ratio[0], ratio[1], ratio[2], gap)};
}

Outcome zero_count_mean() {
  const auto rep = exp_zero_concentration(CoefficientSequence::gef(), EnsembleSpec::gaussian(3), {2.0}, 2000,
                                          RunOptions{.seed = 3});
  const auto& e = rep.summary["per_r"][0];
  const double mean = e["mean_count"], se = e["se_count"];
  const std::int64_t dis = rep.summary["method_disagreements"];
  return {std::abs(mean - 4) <= 3 * se && dis == 0,
          fmt("mean %.4f se %.4f, method disagreements %.0f", mean, se, static_cast<double>(dis))};
}

Outcome jensen_identity() {
  const auto gef = CoefficientSequence::gef();
  const auto ens = EnsembleSpec::gaussian(4);
  double worst = 0;
  for (std::uint64_t t = 0; t < 1000; ++t) {
    const auto s = sample(gef, ens, 2.0, 1e-12, t);
    for (double r : {1.0, 2.0}) worst = std::max(worst, std::abs(jensen_N(s, r) - jensen_from_roots(find_zeros_disk(s, r))));
  }
  return {worst < 1e-6, fmt("max |quadrature - roots| %.3g over 1000 samples", worst)};
}

Outcome real_zeros() {
  const auto rep = exp_real_zeros(1.1, 3, 10, true);
  const double ratio = rep.summary["max_imag_ratio"];
  const bool ok = rep.summary["all_real"] && rep.summary["counts_exact"] && ratio < 1e-7;
  return {ok, fmt("1024 patterns, max |Im z|/|z| %.3g", ratio)};
}

Outcome lacunary_window() {
  const auto rep = exp_lacunary_discrepancy(6, 8, 5);
  const bool ok = rep.summary["counts_exact"] && rep.summary["s_f_bounds_hold"];
  return {ok, fmt("counts 16/32 exact over 8 patterns; s_f min below %.3f, max above %.3f",
                  rep.summary["s_f_min_lower"].get<double>(), rep.summary["s_f_max_upper"].get<double>())};
}

Outcome circulant_eigenvalues_match() {
  double worst = 0;
  for (const auto& seq : {CoefficientSequence::gef(), CoefficientSequence::gamma_type(0.5)}) {
    for (double rho : {0.5, 1.0, 2.0}) {
      for (std::int64_t N : {2, 4, 8, 16}) {
        auto lam = circulant_eigenvalues(seq, rho, N);
        const auto cov = build_covariance(seq, CircleConfiguration::equispaced(rho, static_cast<std::size_t>(N)));
        const auto dense = dense_eigenvalues(cov.entries());
        std::sort(lam.begin(), lam.end());
        for (std::size_t i = 0; i < lam.size(); ++i) worst = std::max(worst, std::abs(lam[i] - dense[i]) / lam.back());
      }
    }
  }
  const auto two = circulant_eigenvalues(CoefficientSequence::gef(), 1.0, 2);
  const double closed = std::max(std::abs(two[0] - 2 * std::cosh(1.0)), std::abs(two[1] - 2 * std::sinh(1.0)));
  return {worst < 1e-9 && closed < 1e-12, fmt("max relative mismatch %.3g; 2cosh1/2sinh1 error %.3g", worst, closed)};
}

Outcome det_sigma_bound() {
  const auto gef = CoefficientSequence::gef();
  const auto a = det_sigma_lower_check(gef, 2.0);
  const auto b = det_sigma_lower_check(gef, 3.0);
  return {a.ok && b.ok, fmt("r=2: log det %.3f >= S %.3f; r=3: %.3f >= %.3f", a.log_det, a.S_r, b.log_det, b.S_r)};
}

Outcome vandermonde_mean() {
  const auto v = vandermonde_average(4, {1, 2, 3}, 1.0, 100000, 9);
  return {std::abs(v.mean - 24) <= 3 * v.standard_error, fmt("mean %.4f se %.4f", v.mean, v.standard_error)};
}

Outcome hole_mc() {
  const auto rep = exp_hole_mc(CoefficientSequence::gef(), {0.25, 0.5, 0.75, 1.0}, 100000, RunOptions{.seed = 10});
  const std::int64_t nesting = rep.summary["nesting_violations"];
  const bool increasing = rep.summary["neg_log_p_strictly_increasing"];
  const double p = rep.summary["per_r"][1]["p_hat"];
  const double n = rep.summary["trials_used"];
  const double po = kOracleHoles / kOracleTrials;
  const double se = std::sqrt(p * (1 - p) / n + po * (1 - po) / kOracleTrials);
  const bool close = std::abs(p - po) <= 2.576 * se;
  return {nesting == 0 && increasing && close,
          fmt("P(0.5) = %.5f vs reference %.6f (99%% band %.5f); nesting violations %.0f", p, po, 2.576 * se,
              static_cast<double>(nesting))};
}

Outcome omega_soundness() {
  const auto rep = exp_omega_soundness(CoefficientSequence::gef(), 2.0, 100000, 1000, RunOptions{.seed = 11});
  const std::int64_t bad = rep.summary["counterexamples"];
  const std::int64_t misses = rep.summary["conditioned_predicate_misses"];
  const double lp = rep.summary["log_p_omega"];
  const auto& rhs = rep.summary["bound_rhs"];
  const bool bound = rhs.is_number() && lp >= rhs.get<double>() - 1e-9 * std::abs(lp);
  return {bad == 0 && misses == 0 && bound,
          fmt("counterexamples %.0f; log P %.2f >= %.2f with C' %.4f", static_cast<double>(bad), lp,
              rhs.is_number() ? rhs.get<double>() : NAN,
              rep.summary["C_prime"].is_number() ? rep.summary["C_prime"].get<double>() : NAN)};
}

Outcome gN_sharpness() {
  const auto exact = gN_l2_exact(5);
  const bool rational = exact.num * 1048576ULL == 184756ULL * exact.den;
  const double x = 2 * std::numbers::pi * std::exp(-5.0);
  // |sin| is increasing on [0, x], so the sup over |theta| <= e^-5 is attained at the endpoint
  const double sup = std::pow(std::sin(x), 10);
  const auto rep = exp_gN_sharpness({5});
  return {rational && sup <= 2e-14 && rep.passed,
          fmt("integral %.0f/%.0f, sup %.3g", static_cast<double>(exact.num), static_cast<double>(exact.den), sup)};
}

Outcome khinchin() {
  const auto rep = exp_khinchin({2, 4, 8}, 64, 10000, 4, RunOptions{.seed = 13});
  const double lin = rep.summary["max_linear_ratio_over_sqrt_p"], bil = rep.summary["max_bilinear_ratio_over_p"];
  const bool p2 = rep.summary["p2_linear_within_3se"];
  return {p2 && lin <= 4 && bil <= 4, fmt("p=2 within 3 SE: %.0f; max linear/sqrt p %.3f; max bilinear/p %.3f",
                                          p2 ? 1.0 : 0.0, lin, bil)};
}

Outcome coefficient_asymptotics() {
  const auto one = exp_coeff_asymptotics({1.0, 0.0}, 400);
  const auto zero = exp_coeff_asymptotics({0.0, 0.0}, 400);
  const double slope = one.summary["difference_rate_exponent"];
  const bool odd = zero.summary["odd_coefficients_zero"];
  return {slope >= -0.8 && slope <= -0.3 && odd,
          fmt("difference rate exponent %.4f; odd coefficients zero at beta=0: %.0f", slope, odd ? 1.0 : 0.0)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all = {
      {1, "GEF closed forms for sigma and s", 1, gef_closed_forms},
      {2, "hole constant trend S(r)/r^4", 1, hole_constant_trend},
      {3, "zero count mean and method agreement", 120, zero_count_mean},
      {4, "Jensen identity", 120, jensen_identity},
      {5, "real zeros for alpha = 1.1", 60, real_zeros},
      {6, "lacunary exceptional windows", 60, lacunary_window},
      {7, "circulant eigenvalues", 5, circulant_eigenvalues_match},
      {8, "determinant lower bound", 60, det_sigma_bound},
      {9, "Vandermonde average", 30, vandermonde_mean},
      {10, "hole probability Monte Carlo", 600, hole_mc},
      {11, "Omega_r soundness", 300, omega_soundness},
      {12, "g_N sharpness", 1, gN_sharpness},
      {13, "Khinchin ratios", 60, khinchin},
      {14, "coefficient asymptotics", 1, coefficient_asymptotics},
  };
  int failed = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = o.ok && dt <= c.budget_s;
    if (!ok) ++failed;
    std::printf("%s %2d %s: %s (%.2f s of %.0f s)\n", ok ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), dt,
                c.budget_s);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
