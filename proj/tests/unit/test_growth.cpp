#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "randfun/growth.hpp"

using namespace randfun;

namespace {

// Independent S(r), n(r), m(r) by direct enumeration with lgamma.
struct Direct {
  double S = 0;
  std::int64_t n = 0, m = 0;
};
Direct gef_direct(double r) {
  Direct d;
  for (int k = 0; k < 400; ++k) {
    const double t = -0.5 * std::lgamma(k + 1.0) + k * std::log(r);
    if (t >= 0) {
      d.S += 2 * t;
      ++d.n;
      d.m += 4 * k;
    }
  }
  return d;
}

}  // namespace

TEST(Sigma, GefClosedForm) {
  const auto gef = CoefficientSequence::gef();
  EXPECT_NEAR(sigma(gef, 1), std::exp(0.5), 1e-12);
  EXPECT_NEAR(sigma(gef, 2), std::exp(2.0), 1e-10);
  for (double r : {0.3, 1.7, 5.0, 9.0}) EXPECT_NEAR(log_sigma2(gef, r), r * r, 1e-10 * std::max(1.0, r * r));
}

TEST(Sigma, ConstantSeries) {
  const auto one = CoefficientSequence::explicit_list({1});
  for (double r : {0.1, 1.0, 30.0}) EXPECT_DOUBLE_EQ(sigma(one, r), 1.0);
}

TEST(Sigma, RejectsNonEntire) {
  const auto disk = CoefficientSequence::unit_disk(0.5);
  EXPECT_NEAR(log_sigma2(disk, 0.5), std::log(-std::log(1 - 0.25) / 0.25), 1e-12);  // sum r^{2n}/(n+1)
  try {
    sigma(disk, 1.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonEntireSequence);
  }
}

TEST(SLogDeriv, Examples) {
  EXPECT_NEAR(s_log_deriv(CoefficientSequence::gef(), 2), 4, 1e-12);
  EXPECT_DOUBLE_EQ(s_log_deriv(CoefficientSequence::explicit_list({1}), 5), 0);
  EXPECT_NEAR(s_log_deriv(CoefficientSequence::explicit_list({0, 1}, true), 3), 1, 1e-15);
}

TEST(SLogDeriv, MatchesFiniteDifference) {
  for (const auto& seq : {CoefficientSequence::gef(), CoefficientSequence::gamma_type(0.5),
                          CoefficientSequence::gauss_squared(0.3)}) {
    for (double r : {0.7, 2.0, 6.0}) {
      const double h = 1e-5;
      const double fd = (std::log(sigma(seq, r * std::exp(h))) - std::log(sigma(seq, r * std::exp(-h)))) / (2 * h);
      EXPECT_NEAR(s_log_deriv(seq, r), fd, 1e-6 * std::max(1.0, fd));
    }
  }
}

TEST(BN, Examples) {
  const auto gef = CoefficientSequence::gef();
  EXPECT_NEAR(b_n(gef, 3, 2), -std::log(6.0) / 6 + std::log(2.0), 1e-14);
  EXPECT_NEAR(b_n(gef, 3, 2), 0.3945206023552695, 1e-14);
  EXPECT_EQ(b_n(CoefficientSequence::lacunary(), 3, 10), -INFINITY);
  // a_2 = 1/sqrt 2, so b_2 = 0 at r = 2^{1/4}
  EXPECT_NEAR(b_n(gef, 2, std::pow(2.0, 0.25)), 0, 1e-15);
  try {
    b_n(gef, 0, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidIndex);
  }
}

TEST(GrowthProfile, GefAtTwo) {
  const auto g = growth_profile(CoefficientSequence::gef(), 2);
  EXPECT_EQ(g.n_count, 9);
  EXPECT_EQ(g.m_weight, 144);
  EXPECT_NEAR(g.S, 13.747129301577303, 1e-12);
  EXPECT_EQ(g.N_set, (std::vector<std::int64_t>{0, 1, 2, 3, 4, 5, 6, 7, 8}));
  EXPECT_NEAR(g.delta, std::pow(144.0, -0.25), 1e-15);
}

TEST(GrowthProfile, AgreesWithDirectEnumeration) {
  const auto gef = CoefficientSequence::gef();
  for (double r : {1.5, 3.0, 4.5, 7.0, 11.0}) {
    const auto g = growth_profile(gef, r);
    const auto d = gef_direct(r);
    EXPECT_EQ(g.n_count, d.n) << r;
    EXPECT_EQ(g.m_weight, d.m) << r;
    EXPECT_NEAR(g.S, d.S, 1e-9 * std::max(1.0, d.S)) << r;
  }
}

TEST(GrowthProfile, SmallAndConstant) {
  const auto g = growth_profile(CoefficientSequence::gef(), 1);
  EXPECT_DOUBLE_EQ(g.S, 0);
  EXPECT_EQ(g.N_set, (std::vector<std::int64_t>{0, 1}));
  EXPECT_EQ(g.n_count, 2);
  const auto c = growth_profile(CoefficientSequence::explicit_list({1}), 7);
  EXPECT_DOUBLE_EQ(c.S, 0);
  EXPECT_EQ(c.n_count, 1);
  EXPECT_EQ(c.m_weight, 0);
}

TEST(GrowthProfile, HoleBlocksClosedForm) {
  // r = e^{a + t} with t < a^2 - a: only block 1 (j <= k_1) and a_0 contribute,
  // each j in block 1 with log(a_j r^j) = j t.
  const double a = 1.5, b = 1.2, t = 0.1;
  const auto seq = CoefficientSequence::hole_blocks(a, b, 3);
  const double k1 = std::floor(std::exp(b));
  EXPECT_NEAR(S_of_r(seq, std::exp(a + t)), t * k1 * (k1 + 1), 1e-12);
  EXPECT_NEAR(S_of_r(seq, std::exp(a)), 0, 1e-12);
}

TEST(GrowthProfile, SMonotoneInR) {
  const auto gef = CoefficientSequence::gef();
  double prev = -1;
  for (double r = 0.5; r < 12; r += 0.37) {
    const double S = S_of_r(gef, r);
    EXPECT_GE(S, prev);
    prev = S;
  }
}

TEST(NDeltaSet, Examples) {
  const auto gef = CoefficientSequence::gef();
  EXPECT_EQ(N_delta_set(gef, 2, 0), (std::vector<std::int64_t>{0, 1, 2, 3, 4, 5, 6, 7, 8}));
  const auto wide = N_delta_set(gef, 2, 1);
  for (std::int64_t k = 0; k <= 8; ++k) EXPECT_TRUE(std::binary_search(wide.begin(), wide.end(), k));
}

TEST(NDeltaSet, LacunaryAtE) {
  // enumeration oracle over j <= 64: a_j = exp(-2^k k) at j = 2^k, a_0 = 0
  std::vector<std::int64_t> expect;
  for (int k = 0; (1 << k) <= 64; ++k) {
    const double j = 1 << k;
    if (-j * k / j + 1.0 >= 0) expect.push_back(1 << k);
  }
  EXPECT_EQ(expect, (std::vector<std::int64_t>{1, 2}));
  EXPECT_EQ(N_delta_set(CoefficientSequence::lacunary(), std::exp(1.0), 0), expect);
}

TEST(NDeltaSet, MonotoneInDelta) {
  const auto gef = CoefficientSequence::gef();
  std::size_t prev = 0;
  for (double d : {0.0, 0.05, 0.2, 1.0, 3.0}) {
    const auto s = N_delta_set(gef, 3, d);
    EXPECT_GE(s.size(), prev);
    prev = s.size();
  }
}

TEST(EdelmanKostlan, Examples) {
  const auto gef = CoefficientSequence::gef();
  EXPECT_NEAR(edelman_kostlan(gef, 2), 4, 1e-10);
  EXPECT_NEAR(edelman_kostlan(gef, 1), 1, 1e-12);
  EXPECT_DOUBLE_EQ(edelman_kostlan(CoefficientSequence::explicit_list({1}), 3), 0);
}

TEST(SBoundsCheck, Examples) {
  const auto c = S_bounds_check(CoefficientSequence::gef(), 2);
  EXPECT_TRUE(c.lower_ok);
  EXPECT_NEAR(c.lower_bound, std::pow(144.0, 0.75) / 8, 1e-12);
  EXPECT_TRUE(std::isfinite(c.scaling_gap));
  // rescaled S by enumeration with d = 2
  double S2 = 0;
  for (int k = 0; k < 100; ++k) S2 += 2 * std::max(0.0, std::log(2.0) - 0.5 * std::lgamma(k + 1.0) + k * std::log(2.0));
  EXPECT_NEAR(c.S_rescaled, S2, 1e-10);
  const auto b = S_bounds_check(CoefficientSequence::explicit_list({1, 1}), 1);
  EXPECT_EQ(b.m_weight, 4);
  EXPECT_FALSE(b.lower_ok);
  try {
    S_bounds_check(CoefficientSequence::explicit_list({1}), 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewDominantTerms);
  }
}

TEST(HaymanWindow, MatchesEnumeration) {
  // m(r e^{+-delta}) by direct enumeration with eta = 1/4
  auto m_direct = [](double r) {
    std::int64_t m = 0;
    for (int k = 1; k < 5000; ++k) {
      if (-0.5 * std::lgamma(k + 1.0) + k * std::log(r) >= 0) m += 4 * k;
    }
    return static_cast<double>(m);
  };
  const auto gef = CoefficientSequence::gef();
  for (double r : {2.0, 5.0, 10.0, 20.0, 30.0}) {
    const double m = m_direct(r), d = std::pow(m, -0.25);
    const bool expect = m_direct(r * std::exp(-d)) > 0.75 * m && m_direct(r * std::exp(d)) < 1.25 * m;
    EXPECT_EQ(hayman_window(gef, r), expect) << r;
  }
  // at r = 2 the window is wide (delta = 144^{-1/4}) and m drops to 40 below it
  EXPECT_EQ(m_direct(2 * std::exp(-std::pow(144.0, -0.25))), 40);
  EXPECT_FALSE(hayman_window(gef, 2));
  EXPECT_TRUE(hayman_window(gef, 30));
}

TEST(HaymanWindow, Examples) {
  EXPECT_TRUE(hayman_window(CoefficientSequence::explicit_list({1}), 5));
  const auto lac = CoefficientSequence::lacunary();
  const double dk = std::log(2.0) / 16;
  bool some_false = false;
  for (int i = 0; i <= 20; ++i) some_false |= !hayman_window(lac, std::exp(6 - dk + 0.1 * dk * i));
  EXPECT_TRUE(some_false);
}

TEST(Growth, InvalidRadius) {
  EXPECT_THROW(sigma(CoefficientSequence::gef(), -1), Error);
  EXPECT_THROW(growth_profile(CoefficientSequence::gef(), 0), Error);
}
