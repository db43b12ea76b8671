#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "randfun/error.hpp"

namespace randfun {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Indices beyond this are never materialized; a scan that reaches it is
// treated as a divergent (non-entire) sequence.
inline constexpr std::int64_t kMaxMaterializedIndex = 10'000'000;

enum class SequenceKind { Gef, GammaType, GaussSquared, Lacunary, ExplicitList, HoleBlocks, UnitDisk };

// Deterministic magnitudes a_n >= 0 of a random Taylor series
// sum xi_n a_n z^n, accessed through log a_n (-inf when a_n = 0).
class CoefficientSequence {
 public:
  /// a_n = 1/sqrt(n!), the plane-invariant Gaussian entire function.
  static CoefficientSequence gef() { return CoefficientSequence(SequenceKind::Gef); }

  /// a_n = 1/Gamma(alpha n + 1).
  static CoefficientSequence gamma_type(double alpha) {
    require(alpha > 0 && std::isfinite(alpha), ErrorCode::InvalidArgument, "gamma alpha must be positive");
    CoefficientSequence s(SequenceKind::GammaType);
    s.alpha_ = alpha;
    return s;
  }

  /// a_n = exp(-alpha n^2); all zeros real once alpha >= log 3.
  static CoefficientSequence gauss_squared(double alpha) {
    require(alpha > 0 && std::isfinite(alpha), ErrorCode::InvalidArgument, "gauss alpha must be positive");
    CoefficientSequence s(SequenceKind::GaussSquared);
    s.alpha_ = alpha;
    return s;
  }

  /// a_j = exp(-2^k k) for j = 2^k, zero otherwise (so a_0 = 0).
  static CoefficientSequence lacunary() { return CoefficientSequence(SequenceKind::Lacunary); }

  /// A finite list of magnitudes. A zero constant term must be asked for.
  static CoefficientSequence explicit_list(std::vector<double> values, bool allow_zero_constant = false) {
    require(!values.empty(), ErrorCode::InvalidArgument, "explicit list must be non-empty");
    for (double v : values) {
      require(v >= 0 && std::isfinite(v), ErrorCode::InvalidArgument,
              "explicit list entries must be finite and nonnegative");
    }
    require(allow_zero_constant || values.front() > 0, ErrorCode::InvalidArgument,
            "explicit list has a_0 = 0; pass allow_zero_constant to permit it");
    CoefficientSequence s(SequenceKind::ExplicitList);
    s.values_ = std::move(values);
    s.log_values_.reserve(s.values_.size());
    for (double v : s.values_) s.log_values_.push_back(v > 0 ? std::log(v) : kNegInf);
    return s;
  }

  /// Consecutive blocks with a_j r_m^j = 1 for j in (k_{m-1}, k_m], where
  /// r_m = exp(a^m) and k_m = floor(exp(b^m)); a_0 = 1 and only blocks
  /// 1..blocks are materialized.
  static CoefficientSequence hole_blocks(double a, double b, int blocks) {
    require(a > 1 && b > 1 && std::isfinite(a) && std::isfinite(b), ErrorCode::InvalidArgument,
            "hole blocks need a > 1 and b > 1");
    require(blocks >= 1, ErrorCode::InvalidArgument, "hole blocks need at least one block");
    CoefficientSequence s(SequenceKind::HoleBlocks);
    s.alpha_ = a;
    s.beta_ = b;
    s.block_ends_.push_back(0);
    for (int m = 1; m <= blocks; ++m) {
      const double k = std::floor(std::exp(std::pow(b, m)));
      require(k <= static_cast<double>(kMaxMaterializedIndex), ErrorCode::InvalidArgument,
              "hole block end exceeds the materialization cap");
      s.block_ends_.push_back(std::max(s.block_ends_.back(), static_cast<std::int64_t>(k)));
      s.block_log_radius_.push_back(std::pow(a, m));
    }
    return s;
  }

  /// a_n = (n+1)^(-kappa): radius of convergence 1, used for unit-disk
  /// experiments only.
  static CoefficientSequence unit_disk(double kappa) {
    require(kappa >= 0 && std::isfinite(kappa), ErrorCode::InvalidArgument, "unit-disk kappa must be >= 0");
    CoefficientSequence s(SequenceKind::UnitDisk);
    s.alpha_ = kappa;
    return s;
  }

  SequenceKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  bool is_entire() const { return kind_ != SequenceKind::UnitDisk; }
  const std::vector<double>& explicit_values() const { return values_; }

  /// Radius r_m = exp(a^m) and end index k_m of hole block m (1-based).
  double block_log_radius(int m) const { return block_log_radius_.at(static_cast<std::size_t>(m - 1)); }
  std::int64_t block_end(int m) const { return block_ends_.at(static_cast<std::size_t>(m)); }
  int block_count() const { return static_cast<int>(block_log_radius_.size()); }

  double log_a(std::int64_t n) const {
    if (n < 0) return kNegInf;
    switch (kind_) {
      case SequenceKind::Gef:
        return -0.5 * std::lgamma(static_cast<double>(n) + 1.0);
      case SequenceKind::GammaType:
        return -std::lgamma(alpha_ * static_cast<double>(n) + 1.0);
      case SequenceKind::GaussSquared:
        return -alpha_ * static_cast<double>(n) * static_cast<double>(n);
      case SequenceKind::Lacunary: {
        if (n == 0 || (n & (n - 1)) != 0) return kNegInf;
        const int k = std::countr_zero(static_cast<std::uint64_t>(n));
        return -static_cast<double>(n) * k;
      }
      case SequenceKind::ExplicitList:
        return static_cast<std::size_t>(n) < log_values_.size() ? log_values_[static_cast<std::size_t>(n)]
                                                                : kNegInf;
      case SequenceKind::HoleBlocks: {
        if (n == 0) return 0.0;
        for (std::size_t m = 1; m < block_ends_.size(); ++m) {
          if (n <= block_ends_[m]) return -static_cast<double>(n) * block_log_radius_[m - 1];
        }
        return kNegInf;
      }
      case SequenceKind::UnitDisk:
        return -alpha_ * std::log(static_cast<double>(n) + 1.0);
    }
    return kNegInf;
  }

  double a(std::int64_t n) const { return std::exp(log_a(n)); }

  /// Last index that can be nonzero, for finitely supported sequences.
  std::optional<std::int64_t> last_index() const {
    if (kind_ == SequenceKind::ExplicitList) {
      std::int64_t last = 0;
      for (std::size_t i = 0; i < values_.size(); ++i) {
        if (values_[i] > 0) last = static_cast<std::int64_t>(i);
      }
      return last;
    }
    if (kind_ == SequenceKind::HoleBlocks) return block_ends_.back();
    return std::nullopt;
  }

  /// Smallest index >= n with a_index > 0, or nullopt if none remains.
  std::optional<std::int64_t> support_from(std::int64_t n) const {
    if (n < 0) n = 0;
    if (kind_ == SequenceKind::Lacunary) {
      if (n <= 1) return 1;
      return std::int64_t{1} << std::bit_width(static_cast<std::uint64_t>(n - 1));
    }
    if (auto last = last_index()) {
      for (; n <= *last; ++n) {
        if (log_a(n) > kNegInf) return n;
      }
      return std::nullopt;
    }
    return n;
  }

  std::string describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind_) {
      case SequenceKind::Gef: os << "gef"; break;
      case SequenceKind::GammaType: os << "gamma:" << alpha_; break;
      case SequenceKind::GaussSquared: os << "gauss:" << alpha_; break;
      case SequenceKind::Lacunary: os << "lacunary"; break;
      case SequenceKind::ExplicitList: {
        os << "list:";
        for (std::size_t i = 0; i < values_.size(); ++i) os << (i ? "," : "") << values_[i];
        break;
      }
      case SequenceKind::HoleBlocks: os << "holeblocks:" << alpha_ << "," << beta_ << "," << block_count(); break;
      case SequenceKind::UnitDisk: os << "unitdisk:" << alpha_; break;
    }
    return os.str();
  }

 private:
  explicit CoefficientSequence(SequenceKind kind) : kind_(kind) {}

  SequenceKind kind_;
  double alpha_ = 0;
  double beta_ = 0;
  std::vector<double> values_;
  std::vector<double> log_values_;
  std::vector<std::int64_t> block_ends_;
  std::vector<double> block_log_radius_;
};

}  // namespace randfun
