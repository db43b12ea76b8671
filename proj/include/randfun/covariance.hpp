#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "randfun/error.hpp"
#include "randfun/growth.hpp"
#include "randfun/rng.hpp"
#include "randfun/sequence.hpp"

namespace randfun {

using cplx = std::complex<double>;

struct CircleConfiguration {
  double rho = 1;
  std::vector<double> angles;  // sorted, distinct, in [0, 2 pi)

  std::size_t size() const { return angles.size(); }
  cplx point(std::size_t j) const { return std::polar(rho, angles[j]); }

  static CircleConfiguration equispaced(double rho, std::size_t n, double offset = 0) {
    CircleConfiguration c{rho, {}};
    for (std::size_t j = 0; j < n; ++j) {
      c.angles.push_back(std::fmod(offset + 2 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n),
                                   2 * std::numbers::pi));
    }
    std::sort(c.angles.begin(), c.angles.end());
    return c;
  }
};

// The matrix is stored divided by sigma^2(rho) (its common diagonal value),
// so entries stay O(1) however large the variance; log_scale = log sigma^2.
struct CovarianceMatrix {
  Eigen::MatrixXcd scaled;
  double log_scale = 0;
  double min_eigenvalue_ratio = 0;  // min eigenvalue / trace, of the scaled matrix

  Eigen::MatrixXcd entries() const { return scaled * std::exp(log_scale); }
  std::size_t size() const { return static_cast<std::size_t>(scaled.rows()); }
};

namespace detail {

// (n, 2 log(a_n rho^n) - log sigma^2(rho)) over the indices that matter.
inline std::vector<std::pair<std::int64_t, double>> normalized_weights(const CoefficientSequence& seq, double rho,
                                                                       double& log_sigma2_out) {
  std::vector<std::pair<std::int64_t, double>> w;
  if (rho == 0) {
    require(seq.log_a(0) != kNegInf, ErrorCode::InvalidArgument, "a_0 = 0 gives a zero covariance at rho = 0");
    log_sigma2_out = 2 * seq.log_a(0);
    w.emplace_back(0, 0.0);
    return w;
  }
  const double ls2 = log_sigma2(seq, rho);
  log_sigma2_out = ls2;
  scan_log_terms(seq, std::log(rho), [&](std::int64_t n, double t) {
    const double lw = 2 * t - ls2;
    if (lw > -80) w.emplace_back(n, lw);
  });
  return w;
}

inline double log_det_hpd(const Eigen::MatrixXcd& m) {
  Eigen::LLT<Eigen::MatrixXcd> llt(m);
  if (llt.info() != Eigen::Success) fail(ErrorCode::NumericalFailure, "covariance matrix is not positive definite");
  double acc = 0;
  const auto& L = llt.matrixLLT();
  for (Eigen::Index i = 0; i < m.rows(); ++i) acc += 2 * std::log(L(i, i).real());
  return acc;
}

}  // namespace detail

/// Sigma_jk = E f(z_j) conj(f(z_k)) = sum_m a_m^2 rho^{2m} e^{i m (theta_j - theta_k)}.
inline CovarianceMatrix build_covariance(const CoefficientSequence& seq, const CircleConfiguration& config) {
  require(config.rho >= 0 && std::isfinite(config.rho), ErrorCode::InvalidArgument, "rho must be finite and >= 0");
  require(!config.angles.empty(), ErrorCode::InvalidArgument, "configuration needs at least one point");
  CovarianceMatrix cov;
  const auto weights = detail::normalized_weights(seq, config.rho, cov.log_scale);
  const auto n = static_cast<Eigen::Index>(config.size());
  cov.scaled = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j; k < n; ++k) {
      const double d = config.angles[static_cast<std::size_t>(j)] - config.angles[static_cast<std::size_t>(k)];
      cplx acc{};
      for (const auto& [m, lw] : weights) acc += std::exp(lw) * std::polar(1.0, static_cast<double>(m) * d);
      cov.scaled(j, k) = acc;
      cov.scaled(k, j) = std::conj(acc);
    }
    cov.scaled(j, j) = cov.scaled(j, j).real();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(cov.scaled, Eigen::EigenvaluesOnly);
  const double trace = cov.scaled.trace().real();
  cov.min_eigenvalue_ratio = es.eigenvalues().minCoeff() / trace;
  if (cov.min_eigenvalue_ratio < -1e-10) fail(ErrorCode::NumericalFailure, "covariance matrix fails the PSD check");
  return cov;
}

/// Eigenvalues of the covariance of N equispaced points, indexed by k:
/// lambda_k = N sum_l a_{k+lN}^2 rho^{2(k+lN)}.
inline std::vector<double> circulant_eigenvalues(const CoefficientSequence& seq, double rho, std::int64_t N) {
  require(N >= 1, ErrorCode::InvalidArgument, "N must be positive");
  std::vector<double> lam(static_cast<std::size_t>(N), 0.0);
  double ls2 = 0;
  const auto weights = detail::normalized_weights(seq, rho, ls2);
  for (const auto& [m, lw] : weights) lam[static_cast<std::size_t>(m % N)] += std::exp(lw + ls2);
  for (auto& x : lam) x *= static_cast<double>(N);
  return lam;
}

/// Eigenvalues of a Hermitian matrix, ascending (dense solver).
inline std::vector<double> dense_eigenvalues(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return out;
}

namespace detail {

// log |det A| for A_jk = z_j^{e_k}; the rho factor is handled separately.
inline double log_abs_generalized_vandermonde(const std::vector<double>& angles,
                                              const std::vector<std::int64_t>& exponents) {
  const auto n = static_cast<Eigen::Index>(angles.size());
  Eigen::MatrixXcd A(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      A(j, k) = std::polar(1.0, static_cast<double>(exponents[static_cast<std::size_t>(k)]) *
                                    angles[static_cast<std::size_t>(j)]);
    }
  }
  return std::log(std::abs(A.partialPivLu().determinant()));
}

inline std::vector<std::int64_t> with_zero_exponent(const std::vector<std::int64_t>& js) {
  std::vector<std::int64_t> e{0};
  for (auto j : js) {
    require(j > 0, ErrorCode::InvalidArgument, "exponents must be positive");
    require(j > e.back(), ErrorCode::InvalidArgument, "exponents must be strictly increasing");
    e.push_back(j);
  }
  return e;
}

}  // namespace detail

struct VandermondeAverage {
  double mean = 0;
  double standard_error = 0;
  std::int64_t trials = 0;
};

/// Monte Carlo mean of |det A|^2 / rho^{2 sum j} over independent uniform
/// angles, where A has rows (1, z^{j_1}, ..., z^{j_{n-1}}). The exact value
/// is n!.
inline VandermondeAverage vandermonde_average(std::int64_t n, const std::vector<std::int64_t>& exponents,
                                              double rho, std::int64_t trials, std::uint64_t seed) {
  require(n >= 1 && static_cast<std::int64_t>(exponents.size()) == n - 1, ErrorCode::InvalidArgument,
          "need n - 1 exponents");
  require(rho > 0 && trials >= 2, ErrorCode::InvalidArgument, "need rho > 0 and at least two trials");
  const auto e = detail::with_zero_exponent(exponents);
  VandermondeAverage out;
  out.trials = trials;
  if (n == 1) {
    out.mean = 1;
    return out;
  }
  double sum = 0, sum2 = 0;
  std::vector<double> ang(static_cast<std::size_t>(n));
  for (std::int64_t t = 0; t < trials; ++t) {
    const Substream s(seed, static_cast<std::uint64_t>(t), Stream::Angles);
    for (std::size_t j = 0; j < ang.size(); ++j) ang[j] = 2 * std::numbers::pi * s.uniform(j);
    // |det(rho-scaled)|^2 / rho^{2 sum j} is the unit-circle determinant.
    const double v = std::exp(2 * detail::log_abs_generalized_vandermonde(ang, e));
    sum += v;
    sum2 += v * v;
  }
  const double N = static_cast<double>(trials);
  out.mean = sum / N;
  out.standard_error = std::sqrt(std::max(0.0, (sum2 / N - out.mean * out.mean) / (N - 1)));
  return out;
}

struct ConfigurationSearch {
  CircleConfiguration config;
  std::vector<std::int64_t> exponents;  // column exponents, 0 first when present
  double log_ratio = 0;                 // log(|det A| / rho^{sum j})
  bool success = false;                 // log_ratio >= 0
  std::int64_t attempts = 0;
};

/// Best of the equispaced configuration and `attempts` random ones for the
/// generalized Vandermonde determinant with the given column exponents.
inline ConfigurationSearch good_configuration_search(const std::vector<std::int64_t>& column_exponents, double rho,
                                                     std::int64_t attempts, std::uint64_t seed) {
  require(!column_exponents.empty(), ErrorCode::InvalidArgument, "need at least one exponent");
  require(rho > 0, ErrorCode::InvalidArgument, "rho must be positive");
  ConfigurationSearch best;
  best.exponents = column_exponents;
  best.attempts = attempts;
  const std::size_t n = column_exponents.size();
  auto score = [&](const std::vector<double>& ang) {
    return detail::log_abs_generalized_vandermonde(ang, column_exponents);
  };
  auto eq = CircleConfiguration::equispaced(rho, n);
  best.config = eq;
  best.log_ratio = score(eq.angles);
  std::vector<double> ang(n);
  for (std::int64_t t = 0; t < attempts; ++t) {
    const Substream s(seed, static_cast<std::uint64_t>(t), Stream::Search);
    for (std::size_t j = 0; j < n; ++j) ang[j] = 2 * std::numbers::pi * s.uniform(j);
    const double v = score(ang);
    if (v > best.log_ratio) {
      best.log_ratio = v;
      best.config.angles = ang;
      std::sort(best.config.angles.begin(), best.config.angles.end());
    }
  }
  best.success = best.log_ratio >= -1e-12;
  return best;
}

/// The search with exponents N(r) of the sequence at radius r.
inline ConfigurationSearch good_configuration_search(const CoefficientSequence& seq, double r, double rho,
                                                     std::int64_t attempts, std::uint64_t seed) {
  const auto N = growth_profile(seq, r).N_set;
  require(!N.empty(), ErrorCode::TooFewDominantTerms, "N(r) is empty");
  return good_configuration_search(N, rho, attempts, seed);
}

struct DetSigmaCheck {
  double rho = 0;
  std::int64_t n = 0;
  std::vector<double> angles;
  double log_det = 0;
  double S_r = 0;
  bool ok = false;
};

/// log det Sigma for n(r) points on |z| = r against S(r).
inline DetSigmaCheck det_sigma_lower_check(const CoefficientSequence& seq, double r, std::int64_t attempts = 10000,
                                           std::uint64_t seed = 1) {
  const auto g = growth_profile(seq, r);
  require(g.n_count >= 1, ErrorCode::TooFewDominantTerms, "N(r) is empty");
  const auto search = good_configuration_search(g.N_set, r, attempts, seed);
  const auto cov = build_covariance(seq, search.config);
  DetSigmaCheck out;
  out.rho = r;
  out.n = g.n_count;
  out.angles = search.config.angles;
  out.log_det = detail::log_det_hpd(cov.scaled) + static_cast<double>(cov.size()) * cov.log_scale;
  out.S_r = g.S;
  out.ok = out.log_det >= out.S_r - 1e-6;
  return out;
}

inline nlohmann::ordered_json to_json(const DetSigmaCheck& d) {
  return {{"rho", d.rho}, {"n", d.n}, {"angles", d.angles}, {"log_det", d.log_det}, {"S_r", d.S_r}, {"ok", d.ok}};
}

struct ProjectionCheck {
  double log_det_sigma = 0;
  double log_det_projection_sq = 0;  // log |det PV|^2
  bool ok = false;
};

/// det Sigma >= |det PV|^2 where V_jm = a_m z_j^m and P keeps the columns
/// in `exponents`.
inline ProjectionCheck projection_check(const CoefficientSequence& seq, const CircleConfiguration& config,
                                        const std::vector<std::int64_t>& exponents) {
  require(exponents.size() == config.size(), ErrorCode::InvalidArgument, "need one exponent per point");
  const auto cov = build_covariance(seq, config);
  ProjectionCheck out;
  out.log_det_sigma = detail::log_det_hpd(cov.scaled) + static_cast<double>(cov.size()) * cov.log_scale;
  const auto n = static_cast<Eigen::Index>(config.size());
  Eigen::MatrixXcd PV(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto e = exponents[static_cast<std::size_t>(k)];
      PV(j, k) = std::polar(std::exp(seq.log_a(e) - 0.5 * cov.log_scale) *
                                std::pow(config.rho, static_cast<double>(e)),
                            static_cast<double>(e) * config.angles[static_cast<std::size_t>(j)]);
    }
  }
  // rows were divided by sigma, so |det|^2 gains n log sigma^2 back
  out.log_det_projection_sq =
      2 * std::log(std::abs(PV.partialPivLu().determinant())) + static_cast<double>(n) * cov.log_scale;
  out.ok = out.log_det_sigma >= out.log_det_projection_sq - 1e-9 * std::max(1.0, std::abs(out.log_det_sigma));
  return out;
}

struct HoleBoundPair {
  double S = 0;
  double upper = 0;
  double lower = 0;
  std::int64_t n_count = 0;
  std::int64_t m_weight = 0;
  bool hayman_ok = false;
};

/// S(r) + C_u sqrt(m) log m and S(r) - C_l n log S(r).
inline HoleBoundPair hole_bound_pair(const CoefficientSequence& seq, double r, double C_u = 1.0, double C_l = 1.0) {
  const auto g = growth_profile(seq, r);
  if (g.n_count < 2) fail(ErrorCode::TooFewDominantTerms, "n(r) < 2");
  HoleBoundPair out;
  out.S = g.S;
  out.n_count = g.n_count;
  out.m_weight = g.m_weight;
  const double m = static_cast<double>(g.m_weight);
  out.upper = g.S + C_u * std::sqrt(m) * std::log(m);
  out.lower = g.S - C_l * static_cast<double>(g.n_count) * std::log(g.S);
  out.hayman_ok = hayman_window(seq, r);
  return out;
}

}  // namespace randfun
