#include <gtest/gtest.h>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <random>
#include <vector>

#include "bacs/law.hpp"
#include "bacs/oracle.hpp"
#include "bacs/wasserstein.hpp"

using namespace bacs;

namespace {

double grid_search_max(const TrueLaw& law, double mu, double c, int points = 100000) {
  const auto r = betting_interval(mu, c);
  double best = r.lower;
  double best_val = -INFINITY;
  for (int k = 0; k <= points; ++k) {
    const double l = r.lower + (r.upper - r.lower) * k / points;
    const double v = oracle_growth(law, l, mu);
    if (v > best_val) {
      best_val = v;
      best = l;
    }
  }
  return best;
}

}  // namespace

TEST(OracleGrowth, Examples) {
  EXPECT_EQ(oracle_growth(TrueLaw::bernoulli(0.5), 0.0, 0.3), 0.0);
  EXPECT_NEAR(oracle_growth(TrueLaw::bernoulli(0.1), -1.6, 0.5),
              0.1 * std::log(0.2) + 0.9 * std::log(1.8), 1e-15);
  EXPECT_NEAR(oracle_growth(TrueLaw::bernoulli(0.1), -1.6, 0.5), 0.368064, 1e-6);
}

TEST(OracleGrowth, BetaMatchesMonteCarlo) {
  const auto law = TrueLaw::beta(2.0, 2.0);
  Rng rng(2024);
  const int n = 10000000;
  double s = 0.0;
  double s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = std::log1p(0.5 * (law.sample(rng) - 0.25));
    s += v;
    s2 += v * v;
  }
  const double mc = s / n;
  const double se = std::sqrt((s2 / n - mc * mc) / n);
  EXPECT_NEAR(oracle_growth(law, 0.5, 0.25), mc, 3.0 * se);
}

TEST(OracleLambda, Examples) {
  auto s = oracle_lambda(TrueLaw::bernoulli(0.5), 0.25, 0.95);
  EXPECT_NEAR(s.lambda, 4.0 / 3.0, 1e-9);
  EXPECT_FALSE(s.at_boundary);
  EXPECT_NEAR(s.lambda, grid_search_max(TrueLaw::bernoulli(0.5), 0.25, 0.95), 1e-4);

  EXPECT_NEAR(oracle_lambda(TrueLaw::bernoulli(0.5), 0.5, 0.95).lambda, 0.0, 1e-12);

  s = oracle_lambda(TrueLaw::bernoulli(0.99), 0.5, 0.95);
  EXPECT_DOUBLE_EQ(s.lambda, 1.9);
  EXPECT_TRUE(s.at_boundary);
  EXPECT_NEAR(grid_search_max(TrueLaw::bernoulli(0.99), 0.5, 0.95), 1.9, 1e-12);
}

TEST(OracleLambda, BernoulliClosedFormOnGrid) {
  for (double p : {0.1, 0.5, 0.9}) {
    const auto law = TrueLaw::bernoulli(p);
    for (int k = 1; k <= 99; ++k) {
      const double mu = k / 100.0;
      EXPECT_NEAR(oracle_lambda(law, mu, 0.95).lambda, bernoulli_oracle_lambda(p, mu, 0.95), 1e-9)
          << "p=" << p << " mu=" << mu;
    }
  }
  EXPECT_DOUBLE_EQ(bernoulli_oracle_lambda(0.5, 0.25, 0.95), 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(bernoulli_oracle_lambda(0.99, 0.5, 0.95), 1.9);
  EXPECT_DOUBLE_EQ(bernoulli_oracle_lambda(0.0, 0.5, 0.95), -1.9);
}

TEST(OracleLambda, ContinuousLawsAgreeWithGridSearch) {
  const auto mix = TrueLaw::beta_mixture({{5, 15, 0.25}, {15, 5, 0.75}});
  for (const auto& law : {TrueLaw::beta(0.5, 0.5), TrueLaw::beta(10, 30), mix}) {
    for (double mu : {0.1, 0.4, 0.8}) {
      const auto s = oracle_lambda(law, mu, 0.95);
      const auto r = betting_interval(mu, 0.95);
      EXPECT_NEAR(s.lambda, grid_search_max(law, mu, 0.95), 2e-4 * (r.upper - r.lower))
          << law.describe() << " mu=" << mu;
    }
  }
}

TEST(OracleStream, ConstantStreamAtTruthKeepsWealth) {
  BettingConfig cfg;
  cfg.grid_size = 10;
  const auto law = TrueLaw::finite_atoms({{0.5, 1.0}});
  const std::vector<double> xs(100, 0.5);
  const auto reports = oracle_cs_stream(law, xs, cfg);
  for (const auto& r : reports) EXPECT_TRUE(r.running.contains(0.5));
  // Direct replay of the wealth at mu = 0.5.
  const CandidateGrid grid(10);
  const auto lambdas = oracle_lambdas(law, grid, cfg.c);
  EXPECT_EQ(lambdas[4], 0.0);
}

TEST(OracleStream, NestedWidths) {
  BettingConfig cfg;
  cfg.grid_size = 200;
  const auto law = TrueLaw::bernoulli(0.5);
  Rng rng(9);
  const auto xs = law.sample(rng, 500);
  const auto reports = oracle_cs_stream(law, xs, cfg);
  ASSERT_EQ(reports.size(), 500u);
  for (std::size_t i = 1; i < reports.size(); ++i) {
    EXPECT_LE(reports[i].running.width(), reports[i - 1].running.width());
    EXPECT_TRUE(reports[i].running.subset_of(reports[i - 1].running));
  }
}

TEST(OracleStream, GrowthRateFollowsLawOfLargeNumbers) {
  const auto law = TrueLaw::bernoulli(0.5);
  const double mu = 0.1;
  const double lambda = oracle_lambda(law, mu, 0.95).lambda;
  const double m = oracle_growth(law, lambda, mu);
  Rng rng(12);
  double log_w = 0.0;
  const int n = 5000;
  for (int i = 0; i < n; ++i) log_w = wealth_step(log_w, lambda, law.sample(rng), mu);
  EXPECT_NEAR(log_w / n, m, 0.05);
}

TEST(Wasserstein, Examples) {
  const auto d0 = PredictiveDistribution::from_atoms({{0.0, 1.0}});
  const auto d1 = PredictiveDistribution::from_atoms({{1.0, 1.0}});
  const auto half = PredictiveDistribution::from_atoms({{0.5, 1.0}});
  const auto coin = PredictiveDistribution::from_atoms({{0.0, 0.5}, {1.0, 0.5}});
  EXPECT_DOUBLE_EQ(wasserstein1(d0, d1), 1.0);
  EXPECT_DOUBLE_EQ(wasserstein1(coin, coin), 0.0);
  EXPECT_DOUBLE_EQ(wasserstein1(coin, half), 0.5);
  EXPECT_THROW(wasserstein1(PredictiveDistribution::abstain(), coin), std::invalid_argument);
}

TEST(Wasserstein, BetaAgainstQuadrature) {
  using boost::math::beta_distribution;
  const std::vector<std::pair<double, double>> shapes{{0.5, 0.5}, {10, 30}, {2, 2}, {1, 1}};
  for (auto [a1, b1] : shapes) {
    for (auto [a2, b2] : shapes) {
      const beta_distribution<double> p(a1, b1);
      const beta_distribution<double> q(a2, b2);
      const double ref = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
          [&](double t) { return std::abs(boost::math::cdf(p, t) - boost::math::cdf(q, t)); }, 0.0, 1.0,
          15, 1e-12);
      const double got = wasserstein1(TrueLaw::beta(a1, b1), TrueLaw::beta(a2, b2));
      EXPECT_NEAR(got, ref, 1e-5) << a1 << "," << b1 << " vs " << a2 << "," << b2;
    }
  }
  // Against a point mass at zero the distance is the mean.
  const auto d0 = PredictiveDistribution::from_atoms({{0.0, 1.0}});
  EXPECT_NEAR(wasserstein1(d0, TrueLaw::beta(10, 30)), 0.25, 1e-6);
}

TEST(Wasserstein, SymmetryAndTriangle) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto random_pred = [&] {
    std::vector<Atom> atoms;
    for (int i = 0; i < 5; ++i) atoms.push_back({u(rng), 0.2});
    const BetaComponent b{0.3 + 5 * u(rng), 0.3 + 5 * u(rng), 1.0};
    return PredictiveDistribution::mix(0.5, PredictiveDistribution::from_atoms(atoms), 0.5,
                                       PredictiveDistribution::from_betas({&b, 1}));
  };
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = random_pred();
    const auto q = random_pred();
    const auto r = random_pred();
    EXPECT_NEAR(wasserstein1(p, q), wasserstein1(q, p), 1e-12);
    EXPECT_LE(wasserstein1(p, r), wasserstein1(p, q) + wasserstein1(q, r) + 1e-12);
  }
}

TEST(Constants, LipschitzAndSeparation) {
  EXPECT_NEAR(lipschitz_const(0.5, 0.95), 38.0, 1e-12);
  EXPECT_NEAR(lipschitz_const(0.25, 0.95), 76.0, 1e-12);
  EXPECT_NEAR(lipschitz_const(0.5, 0.5), 2.0, 1e-12);
  EXPECT_DOUBLE_EQ(separation_rate(1.0), 0.5);
  EXPECT_DOUBLE_EQ(separation_rate(0.2), 0.2 * 0.2 / 2);
  EXPECT_LT(separation_rate(1e-8), 1e-15);
  EXPECT_GT(separation_rate(1e-8), 0.0);
  EXPECT_THROW(separation_rate(0.0), std::invalid_argument);
  EXPECT_THROW(separation_rate(1.5), std::invalid_argument);
}

TEST(TrueLaw, SamplingMoments) {
  const auto mix = TrueLaw::beta_mixture({{5, 15, 0.25}, {15, 5, 0.75}});
  EXPECT_DOUBLE_EQ(mix.mean(), 0.625);
  for (const auto& law : {TrueLaw::bernoulli(0.1), TrueLaw::beta(0.5, 0.5), mix,
                          TrueLaw::finite_atoms({{0.2, 0.3}, {0.9, 0.7}})}) {
    Rng rng(1);
    const auto xs = law.sample(rng, 200000);
    double m = 0.0;
    for (double x : xs) {
      ASSERT_GE(x, 0.0);
      ASSERT_LE(x, 1.0);
      m += x;
    }
    EXPECT_NEAR(m / xs.size(), law.mean(), 5 * 0.5 / std::sqrt(xs.size())) << law.describe();
  }
  EXPECT_THROW(TrueLaw::beta_mixture({{1, 1, 0.5}, {2, 2, 0.4}}), std::invalid_argument);
  EXPECT_THROW(TrueLaw::bernoulli(1.5), std::invalid_argument);
  EXPECT_THROW(TrueLaw::beta(0.0, 1.0), std::invalid_argument);
}

TEST(TrueLaw, DeriveSeed) {
  EXPECT_EQ(derive_seed(5, 3), derive_seed(5, 3));
  EXPECT_NE(derive_seed(5, 3), derive_seed(5, 4));
  EXPECT_NE(derive_seed(5, 3), derive_seed(6, 3));
  Rng a(derive_seed(1, 0));
  Rng b(derive_seed(1, 0));
  EXPECT_EQ(TrueLaw::beta(2, 3).sample(a, 10), TrueLaw::beta(2, 3).sample(b, 10));
}
