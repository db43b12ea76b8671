#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "randfun/error.hpp"
#include "randfun/growth.hpp"
#include "randfun/rng.hpp"
#include "randfun/sequence.hpp"

namespace randfun {

using cplx = std::complex<double>;

inline constexpr std::int64_t kMaxDegree = 1'000'000;

enum class EnsembleKind { ComplexGaussian, Rademacher, Steinhaus, FixedSigns };

inline std::string to_string(EnsembleKind k) {
  switch (k) {
    case EnsembleKind::ComplexGaussian: return "gaussian";
    case EnsembleKind::Rademacher: return "rademacher";
    case EnsembleKind::Steinhaus: return "steinhaus";
    case EnsembleKind::FixedSigns: return "fixed";
  }
  return "?";
}

// Law of the random factors xi_n together with the seed that drives them.
struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::ComplexGaussian;
  std::uint64_t seed = 0;
  std::vector<double> signs;  // FixedSigns only; indices past the end use +1

  static EnsembleSpec gaussian(std::uint64_t seed) { return {EnsembleKind::ComplexGaussian, seed, {}}; }
  static EnsembleSpec rademacher(std::uint64_t seed) { return {EnsembleKind::Rademacher, seed, {}}; }
  static EnsembleSpec steinhaus(std::uint64_t seed) { return {EnsembleKind::Steinhaus, seed, {}}; }
  static EnsembleSpec fixed_signs(std::vector<double> signs) {
    for (double s : signs) require(s == 1.0 || s == -1.0, ErrorCode::InvalidArgument, "fixed signs must be +-1");
    return {EnsembleKind::FixedSigns, 0, std::move(signs)};
  }

  /// xi_n for the given trial; a pure function of (seed, trial, n).
  cplx draw(std::uint64_t trial, std::int64_t n) const {
    const Substream s(seed, trial, Stream::Coefficients);
    const auto idx = static_cast<std::uint64_t>(n);
    switch (kind) {
      case EnsembleKind::ComplexGaussian: return s.complex_gaussian(idx);
      case EnsembleKind::Rademacher: return s.rademacher(idx);
      case EnsembleKind::Steinhaus: return s.steinhaus(idx);
      case EnsembleKind::FixedSigns:
        return static_cast<std::size_t>(n) < signs.size() ? signs[static_cast<std::size_t>(n)] : 1.0;
    }
    return 0.0;
  }
};

// One realization of the truncated series sum_{n <= degree} xi_n a_n z^n.
// The magnitudes are kept as log a_n so the coefficients can be rescaled to
// any radius without overflow.
class SeriesSample {
 public:
  SeriesSample(CoefficientSequence seq, EnsembleSpec ensemble, std::uint64_t trial, double r_max, double tail_tol,
               std::vector<cplx> xi, std::vector<double> log_a, double tail_log_bound)
      : seq_(std::move(seq)),
        ensemble_(std::move(ensemble)),
        trial_(trial),
        r_max_(r_max),
        tail_tol_(tail_tol),
        xi_(std::move(xi)),
        log_a_(std::move(log_a)),
        tail_log_bound_(tail_log_bound) {}

  /// A fixed polynomial sum c_n z^n with no tail, certified on the whole plane.
  static SeriesSample polynomial(const std::vector<cplx>& coeffs) {
    require(!coeffs.empty(), ErrorCode::InvalidArgument, "polynomial needs at least one coefficient");
    std::vector<double> mags;
    std::vector<cplx> xi;
    std::vector<double> log_a;
    for (const cplx& c : coeffs) {
      const double m = std::abs(c);
      mags.push_back(m);
      xi.push_back(m > 0 ? c / m : cplx{1.0});
      log_a.push_back(m > 0 ? std::log(m) : kNegInf);
    }
    return SeriesSample(CoefficientSequence::explicit_list(mags, true), EnsembleSpec::fixed_signs({}), 0,
                        std::numeric_limits<double>::infinity(), 0.0, std::move(xi), std::move(log_a), kNegInf);
  }

  const CoefficientSequence& sequence() const { return seq_; }
  const EnsembleSpec& ensemble() const { return ensemble_; }
  std::uint64_t trial() const { return trial_; }
  double r_max() const { return r_max_; }
  double tail_tol() const { return tail_tol_; }
  std::int64_t degree() const { return static_cast<std::int64_t>(xi_.size()) - 1; }
  const std::vector<cplx>& xi() const { return xi_; }
  const std::vector<double>& log_a() const { return log_a_; }
  double tail_log_bound() const { return tail_log_bound_; }

  /// c_n = xi_n a_n (may underflow to 0 for very small a_n).
  std::vector<cplx> coeffs() const { return scaled_coeffs(1.0); }

  /// c_n t^n, i.e. the coefficients of w -> f(t w).
  std::vector<cplx> scaled_coeffs(double t) const {
    require(t > 0, ErrorCode::InvalidArgument, "scale must be positive");
    const double log_t = std::log(t);
    std::vector<cplx> out(xi_.size());
    for (std::size_t n = 0; n < xi_.size(); ++n) {
      const double l = log_a_[n];
      out[n] = l == kNegInf ? cplx{} : xi_[n] * std::exp(l + static_cast<double>(n) * log_t);
    }
    return out;
  }

  cplx constant_term() const { return log_a_.empty() || log_a_[0] == kNegInf ? cplx{} : xi_[0] * std::exp(log_a_[0]); }

  /// The series f - b.
  SeriesSample shifted(cplx b) const {
    SeriesSample out = *this;
    const cplx c0 = constant_term() - b;
    const double m = std::abs(c0);
    out.xi_[0] = m > 0 ? c0 / m : cplx{1.0};
    out.log_a_[0] = m > 0 ? std::log(m) : kNegInf;
    return out;
  }

  /// Same magnitudes and truncation with the random factors replaced.
  SeriesSample with_xi(std::vector<cplx> xi) const {
    require(xi.size() == xi_.size(), ErrorCode::InvalidArgument, "xi length must match the degree");
    SeriesSample out = *this;
    out.xi_ = std::move(xi);
    return out;
  }

 private:
  CoefficientSequence seq_;
  EnsembleSpec ensemble_;
  std::uint64_t trial_;
  double r_max_;
  double tail_tol_;
  std::vector<cplx> xi_;
  std::vector<double> log_a_;
  double tail_log_bound_;
};

namespace detail {

// Per-index envelope exponent: the Gaussian factors are controlled by
// |xi_n| <= exp(delta n / 2) with delta = m(r_max)^(-1/4); bounded ensembles
// have |xi_n| <= 1.
inline double envelope_rate(const CoefficientSequence& seq, const EnsembleSpec& ens, double r_max) {
  if (ens.kind != EnsembleKind::ComplexGaussian) return 0.0;
  if (!seq.is_entire()) return 0.0;
  const std::int64_t m = dominant_weight(seq, r_max);
  return m > 0 ? 0.5 * std::pow(static_cast<double>(m), -0.25) : 0.5;
}

inline double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

struct Truncation {
  std::int64_t degree = 0;
  double tail_log_bound = kNegInf;
};

// Smallest degree whose envelope tail log sum_{n > D} A_n a_n r^n is at most
// log_tol. Past the peak the scan continues until the terms are far below
// log_tol, and the remainder is bounded by a geometric series.
inline Truncation choose_truncation(const CoefficientSequence& seq, double log_r_env, double log_tol,
                                    std::optional<std::int64_t> forced_degree) {
  std::vector<std::pair<std::int64_t, double>> terms;
  double max_term = kNegInf;
  double remainder = kNegInf;
  const auto last = seq.last_index();
  if (!seq.is_entire() && log_r_env >= 0) {
    fail(ErrorCode::NonEntireSequence, seq.describe() + " cannot be truncated at radius >= 1");
  }
  for (auto n = seq.support_from(0); n; n = seq.support_from(*n + 1)) {
    if (*n > kMaxDegree) {
      fail(ErrorCode::TruncationFailure, "tail bound not reached below degree 10^6 for " + seq.describe());
    }
    const double t = seq.log_a(*n) + (*n == 0 ? 0.0 : static_cast<double>(*n) * log_r_env);
    terms.emplace_back(*n, t);
    if (t > max_term) {
      max_term = t;
      continue;
    }
    if (last) continue;
    const bool beyond_forced = !forced_degree || *n > *forced_degree;
    if (beyond_forced && t < std::min(max_term, log_tol) - 40.0 && terms.size() >= 2) {
      const double prev = terms[terms.size() - 2].second;
      const double log_q = t - prev;
      if (log_q < 0) {
        // sum_{k>=1} e^{t + k log_q} for a ratio that can only shrink further.
        remainder = t + log_q - std::log(-std::expm1(log_q));
        break;
      }
    }
  }
  // suffix[i] = log sum of terms i.. plus remainder
  std::vector<double> suffix(terms.size() + 1, kNegInf);
  suffix[terms.size()] = remainder;
  for (std::size_t i = terms.size(); i-- > 0;) suffix[i] = log_add(suffix[i + 1], terms[i].second);

  Truncation out;
  if (forced_degree) {
    out.degree = *forced_degree;
    out.tail_log_bound = remainder;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (terms[i].first > *forced_degree) {
        out.tail_log_bound = suffix[i];
        break;
      }
    }
    return out;
  }
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (suffix[i + 1] <= log_tol) {
      out.degree = terms[i].first;
      out.tail_log_bound = suffix[i + 1];
      return out;
    }
  }
  fail(ErrorCode::TruncationFailure, "tail bound not reached for " + seq.describe());
}

}  // namespace detail

/// Draws trial `trial` of the series truncated at the smallest degree whose
/// certified envelope tail on |z| <= r_max is below tail_tol. A forced
/// degree bypasses the search (the tail bound is still reported).
inline SeriesSample sample(const CoefficientSequence& seq, const EnsembleSpec& ensemble, double r_max,
                           double tail_tol, std::uint64_t trial = 0,
                           std::optional<std::int64_t> forced_degree = std::nullopt) {
  require(r_max > 0 && std::isfinite(r_max), ErrorCode::InvalidArgument, "r_max must be positive and finite");
  require(tail_tol > 0, ErrorCode::InvalidArgument, "tail_tol must be positive");
  if (forced_degree) {
    require(*forced_degree >= 0 && *forced_degree <= kMaxDegree, ErrorCode::InvalidArgument,
            "forced degree out of range");
  }
  const double rate = detail::envelope_rate(seq, ensemble, r_max);
  const auto trunc = detail::choose_truncation(seq, std::log(r_max) + rate, std::log(tail_tol), forced_degree);
  std::vector<cplx> xi(static_cast<std::size_t>(trunc.degree) + 1);
  std::vector<double> log_a(xi.size());
  for (std::int64_t n = 0; n <= trunc.degree; ++n) {
    xi[static_cast<std::size_t>(n)] = ensemble.draw(trial, n);
    log_a[static_cast<std::size_t>(n)] = seq.log_a(n);
  }
  return SeriesSample(seq, ensemble, trial, r_max, tail_tol, std::move(xi), std::move(log_a), trunc.tail_log_bound);
}

/// Horner evaluation of the truncated series at z with |z| <= r_max.
inline cplx evaluate(const SeriesSample& s, cplx z) {
  const double az = std::abs(z);
  if (!(az <= s.r_max() * (1 + 1e-12))) {
    fail(ErrorCode::OutOfCertifiedDisk, "|z| exceeds the certified radius of the sample");
  }
  if (az == 0) return s.constant_term();
  const auto c = s.scaled_coeffs(az);
  const cplx w = z / az;
  cplx acc{};
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * w + c[i];
  return acc;
}

// theta -> f(r e^{2 pi i theta}) / sigma_f(r).
class NormalizedCircle {
 public:
  NormalizedCircle(const SeriesSample& s, double r) : r_(r) {
    require(r > 0 && r <= s.r_max() * (1 + 1e-12), ErrorCode::OutOfCertifiedDisk,
            "normalization radius outside the certified disk");
    coeffs_ = s.scaled_coeffs(r);
    log_sigma_ = 0.5 * log_sigma2(s.sequence(), r);
    const double inv = std::exp(-log_sigma_);
    for (auto& c : coeffs_) c *= inv;
  }

  cplx operator()(double theta) const {
    const cplx w = std::polar(1.0, 2 * std::numbers::pi * theta);
    cplx acc{};
    for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * w + coeffs_[i];
    return acc;
  }

  /// Trapezoid quadrature of |f^|^2 over the circle (exact once nodes > degree).
  double l2_mass(std::size_t nodes = 0) const {
    if (nodes == 0) nodes = 2 * coeffs_.size() + 8;
    double acc = 0;
    for (std::size_t k = 0; k < nodes; ++k) acc += std::norm((*this)(static_cast<double>(k) / nodes));
    return acc / static_cast<double>(nodes);
  }

  double radius() const { return r_; }
  double log_sigma() const { return log_sigma_; }

 private:
  double r_;
  double log_sigma_ = 0;
  std::vector<cplx> coeffs_;
};

inline NormalizedCircle sigma_hat_normalize(const SeriesSample& s, double r) { return NormalizedCircle(s, r); }

// ---------------------------------------------------------------------------
// The event Omega_r under which the constant term dominates on |z| <= r:
//   (i)   |xi_0| >= C m^{1/4}
//   (ii)  |xi_n| <= (a_n r^n)^{-1} / sqrt(m)   for n in N(r) \ {0}
//   (iii) |xi_n| <= 1 / sqrt(m)                for n in N~(r) \ N(r)
//   (iv)  |xi_n| <= exp(delta n / 2)           for n outside N~(r)
// with N~(r) = N_delta(r) u {n < sqrt(m)}.

struct OmegaIndexSets {
  GrowthProfile profile;
  std::vector<std::int64_t> dominant;      // N(r) \ {0}
  std::vector<std::int64_t> intermediate;  // N~(r) \ N(r)
  std::int64_t envelope_start = 0;         // every n >= this outside N~ belongs to (iv)
  std::vector<bool> in_extended;           // membership in N~(r) for n < envelope_start
  double C1 = 0;
  double C2 = 0;
};

inline OmegaIndexSets omega_index_sets(const CoefficientSequence& seq, double r, double eta = kDefaultEta) {
  OmegaIndexSets o;
  o.profile = growth_profile(seq, r, eta);
  const double m = static_cast<double>(o.profile.m_weight);
  const auto n_delta = N_delta_set(seq, r, o.profile.delta);
  const auto sqrt_m = static_cast<std::int64_t>(std::ceil(std::sqrt(m)));
  std::int64_t top = sqrt_m;
  if (!n_delta.empty()) top = std::max(top, n_delta.back() + 1);
  o.envelope_start = top;
  o.in_extended.assign(static_cast<std::size_t>(top), false);
  for (std::int64_t n = 0; n < sqrt_m; ++n) o.in_extended[static_cast<std::size_t>(n)] = true;
  for (auto n : n_delta) o.in_extended[static_cast<std::size_t>(n)] = true;
  std::vector<bool> dominant(static_cast<std::size_t>(top), false);
  for (auto n : o.profile.N_set) {
    if (n < top) dominant[static_cast<std::size_t>(n)] = true;
    if (n != 0) o.dominant.push_back(n);
  }
  for (std::int64_t n = 0; n < top; ++n) {
    if (o.in_extended[static_cast<std::size_t>(n)] && !dominant[static_cast<std::size_t>(n)]) {
      o.intermediate.push_back(n);
    }
  }
  if (m > 0) {
    o.C1 = static_cast<double>(o.profile.n_count) / std::sqrt(m);
    o.C2 = static_cast<double>(o.intermediate.size()) / std::sqrt(m);
  }
  return o;
}

/// Default constant of event (i): C1 + C2 + 4, one more than the margin
/// needed for Omega_r to force a zero-free disk.
inline double default_omega_constant(const OmegaIndexSets& o) { return o.C1 + o.C2 + 4.0; }

struct OmegaProbabilities {
  double S = 0;
  std::int64_t m_weight = 0;
  std::int64_t n_count = 0;
  double delta = 0;
  double C = 0;
  double log_p_i = 0;
  double log_p_ii = 0;
  double log_p_iii = 0;
  double log_p_iv = 0;           // exact product over the (iv) indices
  double log_p_iv_bound = 0;     // the generic lower bound log(1/4)
  double total = 0;              // log P(Omega_r)
  double C_prime = 0;            // total = -S - C' sqrt(m) log m
};

/// Exact log-probabilities of the events (i)-(iv) for standard complex
/// Gaussian factors, using P(|xi| >= l) = exp(-l^2).
inline OmegaProbabilities envelope_event_probability(const CoefficientSequence& seq, const EnsembleSpec& ensemble,
                                                     double r, std::optional<double> C = std::nullopt,
                                                     double eta = kDefaultEta) {
  require(ensemble.kind == EnsembleKind::ComplexGaussian, ErrorCode::UnsupportedEnsemble,
          "event probabilities are computed for the complex Gaussian ensemble only");
  const OmegaIndexSets o = omega_index_sets(seq, r, eta);
  OmegaProbabilities p;
  p.S = o.profile.S;
  p.m_weight = o.profile.m_weight;
  p.n_count = o.profile.n_count;
  p.delta = o.profile.delta;
  p.C = C.value_or(default_omega_constant(o));
  const double m = static_cast<double>(o.profile.m_weight);
  const double log_r = std::log(r);
  p.log_p_i = -p.C * p.C * std::sqrt(m);
  for (auto n : o.dominant) {
    // lambda^2 = (a_n r^n)^{-2} / m
    const double log_lambda2 = -2 * (seq.log_a(n) + static_cast<double>(n) * log_r) - std::log(m);
    p.log_p_ii += std::log(-std::expm1(-std::exp(log_lambda2)));
  }
  if (m > 0) p.log_p_iii = static_cast<double>(o.intermediate.size()) * std::log(-std::expm1(-1.0 / m));
  auto add_iv = [&](std::int64_t n) {
    const double x = std::exp(p.delta * static_cast<double>(n));
    const double term = std::log1p(-std::exp(-x));
    p.log_p_iv += term;
    return term;
  };
  for (std::int64_t n = 0; n < o.envelope_start; ++n) {
    if (!o.in_extended[static_cast<std::size_t>(n)]) add_iv(n);
  }
  for (std::int64_t n = o.envelope_start;; ++n) {
    if (add_iv(n) > -1e-300 && static_cast<double>(n) * p.delta > 50) break;
  }
  p.log_p_iv_bound = std::log(0.25);
  p.total = p.log_p_i + p.log_p_ii + p.log_p_iii + p.log_p_iv;
  const double scale = m > 1 ? std::sqrt(m) * std::log(m) : std::numeric_limits<double>::quiet_NaN();
  p.C_prime = (-p.S - p.total) / scale;
  return p;
}

struct OmegaCheck {
  bool holds = false;
  bool clamped = false;  // part of N~(r) lies beyond the sample degree
};

/// Whether the sample's factors satisfy (i)-(iv) at radius r, checked on the
/// indices up to the sample degree.
inline OmegaCheck omega_holds(const SeriesSample& s, const OmegaIndexSets& o, double C) {
  OmegaCheck out;
  const auto& xi = s.xi();
  const auto degree = s.degree();
  const double m = static_cast<double>(o.profile.m_weight);
  const double log_r = std::log(o.profile.r);
  out.clamped = o.envelope_start > degree + 1;
  auto mod = [&](std::int64_t n) { return std::abs(xi[static_cast<std::size_t>(n)]); };
  if (mod(0) < C * std::pow(m, 0.25)) return out;
  for (auto n : o.dominant) {
    if (n > degree) continue;
    const double bound = std::exp(-(s.sequence().log_a(n) + static_cast<double>(n) * log_r)) / std::sqrt(m);
    if (mod(n) > bound) return out;
  }
  for (auto n : o.intermediate) {
    if (n <= degree && mod(n) > 1 / std::sqrt(m)) return out;
  }
  for (std::int64_t n = 0; n <= degree; ++n) {
    const bool extended = n < o.envelope_start && o.in_extended[static_cast<std::size_t>(n)];
    if (!extended && mod(n) > std::exp(o.profile.delta * static_cast<double>(n) / 2)) return out;
  }
  out.holds = true;
  return out;
}

/// Redraws the factors of `base` from the Gaussian law conditioned on
/// Omega_r; each event constrains one |xi_n|^2 ~ Exp(1) to an interval, and
/// the phase stays uniform.
inline SeriesSample sample_conditioned_on_omega(const SeriesSample& base, const OmegaIndexSets& o, double C) {
  const Substream stream(base.ensemble().seed, base.trial(), Stream::Conditioned);
  const double m = static_cast<double>(o.profile.m_weight);
  const double log_r = std::log(o.profile.r);
  std::vector<double> upper2(static_cast<std::size_t>(base.degree()) + 1);
  for (std::int64_t n = 0; n <= base.degree(); ++n) {
    const bool extended = n < o.envelope_start && o.in_extended[static_cast<std::size_t>(n)];
    upper2[static_cast<std::size_t>(n)] = extended ? std::numeric_limits<double>::infinity()
                                                   : std::exp(o.profile.delta * static_cast<double>(n));
  }
  for (auto n : o.intermediate) {
    if (n <= base.degree()) upper2[static_cast<std::size_t>(n)] = 1 / m;
  }
  for (auto n : o.dominant) {
    if (n <= base.degree()) {
      upper2[static_cast<std::size_t>(n)] =
          std::exp(-2 * (base.sequence().log_a(n) + static_cast<double>(n) * log_r)) / m;
    }
  }
  std::vector<cplx> xi(upper2.size());
  for (std::size_t n = 0; n < xi.size(); ++n) {
    const auto [u, v] = stream.uniform_pair(n);
    double mod2;
    if (n == 0) {
      mod2 = C * C * std::sqrt(m) - std::log(u);
    } else if (std::isinf(upper2[n])) {
      mod2 = -std::log(u);
    } else {
      mod2 = -std::log1p(u * std::expm1(-upper2[n]));
    }
    xi[n] = std::polar(std::sqrt(mod2), 2 * std::numbers::pi * v);
  }
  return base.with_xi(std::move(xi));
}

// JSON form: degree, seed, trial, ensemble kind, sequence, certified radius,
// tail data and the coefficients c_n as [re, im] pairs.
inline nlohmann::ordered_json to_json(const SeriesSample& s) {
  nlohmann::ordered_json j;
  j["degree"] = s.degree();
  j["seed"] = s.ensemble().seed;
  j["trial"] = s.trial();
  j["ensemble"] = to_string(s.ensemble().kind);
  j["sequence"] = s.sequence().describe();
  j["r_max"] = std::isfinite(s.r_max()) ? nlohmann::ordered_json(s.r_max()) : nlohmann::ordered_json(nullptr);
  j["tail_tol"] = s.tail_tol();
  j["tail_log_bound"] = s.tail_log_bound() == kNegInf ? nlohmann::ordered_json(nullptr)
                                                      : nlohmann::ordered_json(s.tail_log_bound());
  auto& arr = j["coefficients"] = nlohmann::ordered_json::array();
  for (const cplx& c : s.coeffs()) arr.push_back({c.real(), c.imag()});
  return j;
}

}  // namespace randfun
