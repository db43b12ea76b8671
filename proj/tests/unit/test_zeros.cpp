#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "randfun/polynomial.hpp"
#include "randfun/stats.hpp"
#include "randfun/zeros.hpp"

using namespace randfun;

namespace {

constexpr double kPi = std::numbers::pi;

SeriesSample poly(std::vector<cplx> c) { return SeriesSample::polynomial(std::move(c)); }

// companion-matrix eigenvalues as an independent root oracle
std::vector<cplx> companion_roots(const std::vector<cplx>& c) {
  const int d = static_cast<int>(c.size()) - 1;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 1; i < d; ++i) m(i, i - 1) = 1;
  for (int i = 0; i < d; ++i) m(i, d - 1) = -c[i] / c[d];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m);
  std::vector<cplx> out(es.eigenvalues().data(), es.eigenvalues().data() + d);
  return out;
}

double matched_distance(std::vector<cplx> a, std::vector<cplx> b) {
  if (a.size() != b.size()) return INFINITY;
  double worst = 0;
  for (const auto& z : a) {
    auto it = std::min_element(b.begin(), b.end(), [&](cplx x, cplx y) { return std::abs(x - z) < std::abs(y - z); });
    worst = std::max(worst, std::abs(*it - z));
    b.erase(it);
  }
  return worst;
}

}  // namespace

TEST(Aberth, MatchesCompanionEigenvalues) {
  for (std::uint64_t t = 0; t < 20; ++t) {
    std::vector<cplx> c;
    for (int n = 0; n <= 12; ++n) c.push_back(EnsembleSpec::gaussian(21).draw(t, n));
    const auto r = aberth_roots(c);
    ASSERT_TRUE(r.converged);
    EXPECT_LT(matched_distance(r.roots, companion_roots(c)), 1e-8);
  }
}

TEST(Aberth, LeadingAndTrailingZeros) {
  const auto r = aberth_roots({0, 0, -1, 0, 1, 0});  // z^2 (z^2 - 1), trailing zero trimmed
  ASSERT_EQ(r.roots.size(), 4u);
  EXPECT_LT(matched_distance(r.roots, {0, 0, 1, -1}), 1e-12);
}

TEST(FindZeros, CubeRootsOfUnity) {
  const auto zs = find_zeros_disk(poly({-1, 0, 0, 1}), 2);
  ASSERT_EQ(zs.roots.size(), 3u);
  std::vector<cplx> got;
  for (const auto& r : zs.roots) {
    EXPECT_EQ(r.multiplicity, 1);
    got.push_back(r.z);
  }
  EXPECT_LT(matched_distance(got, {1, std::polar(1.0, 2 * kPi / 3), std::polar(1.0, -2 * kPi / 3)}), 1e-12);
}

TEST(FindZeros, DoubleRoot) {
  const auto zs = find_zeros_disk(poly({1, -2, 1}), 2);
  ASSERT_EQ(zs.roots.size(), 1u);
  EXPECT_EQ(zs.roots[0].multiplicity, 2);
  EXPECT_NEAR(std::abs(zs.roots[0].z - 1.0), 0, 1e-7);
  EXPECT_EQ(zs.count(), 2);
}

TEST(FindZeros, GefMeanCount) {
  const auto gef = CoefficientSequence::gef();
  std::vector<double> counts;
  for (std::uint64_t t = 0; t < 2000; ++t) {
    const auto s = sample(gef, EnsembleSpec::gaussian(31), 2.0, 1e-12, t);
    counts.push_back(static_cast<double>(find_zeros_disk(s, 2).count()));
  }
  const auto m = stats::mean_se(counts);
  EXPECT_NEAR(m.mean, 4.0, 3 * m.se);
}

TEST(FindZeros, RoucheFailure) {
  // a huge tolerance leaves a tail larger than the truncation on the circle
  const auto s = sample(CoefficientSequence::gef(), EnsembleSpec::gaussian(1), 2.0, 1e3);
  try {
    find_zeros_disk(s, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RoucheMarginUnverifiable);
  }
}

TEST(ArgumentPrinciple, Examples) {
  EXPECT_EQ(argument_principle_count(poly({0, 0, 0, 1}), 1), 3);
  EXPECT_EQ(argument_principle_count(poly({1, -2, 1}), 2), 2);
}

TEST(ArgumentPrinciple, RootsNextToTheContour) {
  for (double eps : {1e-4, 1e-7, 1e-10}) {
    EXPECT_EQ(argument_principle_count(poly({-(1 - eps), 1}), 1), 1) << eps;
    EXPECT_EQ(argument_principle_count(poly({-(1 + eps), 1}), 1), 0) << eps;
    EXPECT_EQ(argument_principle_count(poly({cplx(0, 1 - eps), 0, 1}), 1), 2) << eps;
  }
}

TEST(ArgumentPrinciple, AgreesWithRootFinder) {
  const auto gef = CoefficientSequence::gef();
  for (std::uint64_t t = 0; t < 10000; ++t) {
    const auto s = sample(gef, EnsembleSpec::gaussian(41), 2.0, 1e-12, t);
    const RootCache cache(s, 2.0);
    for (double r : {1.0, 2.0}) ASSERT_EQ(argument_principle_count(s, r), cache.disk(r).count()) << t << " " << r;
  }
}

TEST(Jensen, Examples) {
  EXPECT_NEAR(jensen_N(poly({-0.5, 1}), 1), std::log(2.0), 1e-10);
  EXPECT_NEAR(jensen_N(poly({1}), 3), 0, 1e-14);
  try {
    jensen_N(poly({0, 1}), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroAtOrigin);
  }
}

TEST(Jensen, MatchesRoots) {
  const auto gef = CoefficientSequence::gef();
  for (std::uint64_t t = 0; t < 50; ++t) {
    const auto s = sample(gef, EnsembleSpec::gaussian(51), 2.0, 1e-12, t);
    EXPECT_NEAR(jensen_N(s, 2), jensen_from_roots(find_zeros_disk(s, 2)), 1e-6);
  }
}

TEST(Sectors, HalfOpenConvention) {
  EXPECT_EQ(sector_count(ZeroSet{}, 0, kPi), 0);
  const auto zs = find_zeros_disk(poly({-1, 0, 0, 0, 1}), 2);
  EXPECT_EQ(sector_count(zs, 0, kPi), 2);  // arg 0 and pi/2, not pi
  EXPECT_EQ(sector_count(zs, 0, 2 * kPi), 4);
}

TEST(Sectors, RotationMovesCounts) {
  // zeros of z^8 - 1 rotated by a small angle fall one per sector of width pi/4
  std::vector<cplx> c(9, 0);
  c[0] = -std::polar(1.0, 8 * 0.1);
  c[8] = 1;
  const auto zs = find_zeros_disk(poly(c), 2);
  for (int k = 0; k < 8; ++k) EXPECT_EQ(sector_count(zs, k * kPi / 4, (k + 1) * kPi / 4), 1);
}

TEST(ValueSolutions, Examples) {
  const auto one = value_solutions(poly({0, 1}), 1, 0.3);
  ASSERT_EQ(one.count(), 1);
  EXPECT_NEAR(std::abs(one.roots[0].z - 0.3), 0, 1e-14);
  EXPECT_TRUE(value_solutions(poly({1}), 1, 0).empty());
}

TEST(IntegratedSector, Examples) {
  EXPECT_NEAR(integrated_sector_N(poly({1}), 1, 0, 2 * kPi), 0, 1e-15);
  EXPECT_NEAR(integrated_sector_N(poly({-0.5, 1}), 1, 0, 2 * kPi), std::log(2.0), 1e-12);
}

TEST(IntegratedSector, HalvesAddUp) {
  const auto gef = CoefficientSequence::gef();
  for (std::uint64_t t = 0; t < 10; ++t) {
    const auto s = sample(gef, EnsembleSpec::gaussian(61), 3.0, 1e-12, t);
    const double full = integrated_sector_N(s, 3, 0, 2 * kPi);
    const double halves = integrated_sector_N(s, 3, 0, kPi) + integrated_sector_N(s, 3, kPi, 2 * kPi);
    EXPECT_NEAR(full, halves, 1e-3);
    EXPECT_NEAR(full, jensen_N(s, 3), 1e-6);
  }
}

TEST(Invariance, GaussianRotation) {
  // multiplying xi_n by fixed unimodular phases leaves the law of n_f(r) unchanged
  const auto gef = CoefficientSequence::gef();
  std::vector<stats::MeanSE> means;
  for (int phase = 0; phase < 4; ++phase) {
    std::vector<double> counts;
    for (std::uint64_t t = 0; t < 1000; ++t) {
      const auto s = sample(gef, EnsembleSpec::gaussian(71 + phase), 2.0, 1e-12, t);
      auto xi = s.xi();
      for (std::size_t n = 0; n < xi.size(); ++n) xi[n] *= std::polar(1.0, 0.7 * phase * static_cast<double>(n * n + 1));
      counts.push_back(static_cast<double>(find_zeros_disk(s.with_xi(xi), 2).count()));
    }
    means.push_back(stats::mean_se(counts));
  }
  for (std::size_t i = 1; i < means.size(); ++i) {
    const double se = std::hypot(means[0].se, means[i].se);
    EXPECT_NEAR(means[i].mean, means[0].mean, 3 * se);
  }
}

TEST(Invariance, ScalingMapsZeros) {
  // zeros of f(z/c) are c times the zeros of f
  const std::vector<cplx> c{cplx(0.3, -0.2), 1.1, cplx(0, 0.7), -0.4, 1};
  std::vector<cplx> scaled = c;
  const double k = 1.7;
  for (std::size_t n = 0; n < c.size(); ++n) scaled[n] = c[n] / std::pow(k, static_cast<double>(n));
  auto a = aberth_roots(c).roots;
  for (auto& z : a) z *= k;
  EXPECT_LT(matched_distance(a, aberth_roots(scaled).roots), 1e-10);
}

TEST(ZerosCsv, Header) {
  std::ostringstream os;
  write_zeros_csv_header(os);
  write_zeros_csv_rows(os, 0, find_zeros_disk(poly({-1, 1}), 2));
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "trial_id,re,im,modulus,multiplicity,method");
  EXPECT_NE(os.str().find("rootfinder"), std::string::npos);
}
