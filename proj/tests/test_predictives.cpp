#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "bacs/beta_posterior.hpp"
#include "bacs/lambda_solver.hpp"
#include "bacs/law.hpp"
#include "bacs/predictives.hpp"

using namespace bacs;

TEST(EmpiricalPredictive, AtomsAndSentinel) {
  const std::vector<double> h{0.2, 0.8};
  const auto p = empirical_predictive(h);
  ASSERT_EQ(p.atoms().size(), 2u);
  EXPECT_DOUBLE_EQ(p.atoms()[0].location, 0.2);
  EXPECT_DOUBLE_EQ(p.atoms()[0].weight, 0.5);
  EXPECT_DOUBLE_EQ(p.atoms()[1].location, 0.8);
  EXPECT_DOUBLE_EQ(p.atoms()[1].weight, 0.5);

  EXPECT_TRUE(empirical_predictive(std::vector<double>{}).is_abstain());
  EXPECT_TRUE(empirical_predictive(std::vector<double>{0.4}).is_abstain());
  EXPECT_EQ(solve_lambda(empirical_predictive(std::vector<double>{}), 0.3, 0.95).lambda, 0.0);
}

TEST(EmpiricalPredictive, DuplicatesMatchSeparateAtoms) {
  const std::vector<double> h{0.5, 0.5, 0.5};
  const auto merged = empirical_predictive(h);
  ASSERT_EQ(merged.atoms().size(), 1u);
  EXPECT_DOUBLE_EQ(merged.atoms()[0].weight, 1.0);
  const auto split = PredictiveDistribution::from_atoms({{0.5, 1.0 / 3}, {0.5, 1.0 / 3}, {0.5, 1.0 / 3}});
  for (double mu : {0.2, 0.5, 0.7}) {
    EXPECT_EQ(solve_lambda(merged, mu, 0.95).lambda, solve_lambda(split, mu, 0.95).lambda);
  }
}

TEST(BetaPosterior, SymmetricPairStaysEqual) {
  BetaPosterior post({{0.3, 2.0, 0.0}, {0.7, 2.0, 0.0}}, BetaWorkingPrior{});
  post.update(0.5);
  const auto w = post.normalized_weights();
  EXPECT_NEAR(w[0], 0.5, 1e-15);
  EXPECT_NEAR(w[1], 0.5, 1e-15);
}

TEST(BetaPosterior, UpdateMatchesDirectDensityProduct) {
  BetaPosterior post({{0.2, 5.0, 0.0}, {0.5, 3.0, 0.0}, {0.8, 10.0, 0.0}}, BetaWorkingPrior{});
  const std::vector<double> xs{0.3, 0.45, 0.9, 0.12};
  std::vector<double> logw(3, 0.0);
  const double shapes[3][2] = {{1.0, 4.0}, {1.5, 1.5}, {8.0, 2.0}};
  for (double x : xs) {
    post.update(x);
    for (int k = 0; k < 3; ++k) {
      const double a = shapes[k][0];
      const double b = shapes[k][1];
      logw[k] += (a - 1) * std::log(x) + (b - 1) * std::log(1 - x) + std::lgamma(a + b) -
                 std::lgamma(a) - std::lgamma(b);
    }
  }
  double top = std::max({logw[0], logw[1], logw[2]});
  double z = 0.0;
  for (double l : logw) z += std::exp(l - top);
  const auto w = post.normalized_weights();
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(w[k], std::exp(logw[k] - top) / z, 1e-12);
}

TEST(BetaPosterior, EndpointObservationsAreClamped) {
  auto post = BetaPosterior::from_prior_grid(BetaWorkingPrior{}, 10, 5);
  post.update(0.0);
  post.update(1.0);
  post.update(0.5);
  EXPECT_EQ(post.clamp_count(), 2u);
  for (double w : post.normalized_weights()) EXPECT_TRUE(std::isfinite(w));
  EXPECT_THROW(post.update(1.5), std::invalid_argument);
}

TEST(BetaPosterior, ConcentratesNearTrueMean) {
  const auto law = TrueLaw::beta(10.0, 30.0);
  // Estimate the spread of the posterior mean over independent streams.
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng(derive_seed(77, s));
    auto post = BetaPosterior::from_prior_grid(BetaWorkingPrior{});
    for (double x : law.sample(rng, 50)) post.update(x);
    worst = std::max(worst, std::abs(post.posterior_mean_rho() - 0.25));
  }
  EXPECT_LT(worst, 0.05);
}

TEST(BetaPosteriorPredictive, Components) {
  BetaPosterior one({{0.5, 4.0, 0.0}}, BetaWorkingPrior{});
  auto comps = beta_posterior_predictive(one).beta_components();
  ASSERT_EQ(comps.size(), 1u);
  EXPECT_DOUBLE_EQ(comps[0].a, 2.0);
  EXPECT_DOUBLE_EQ(comps[0].b, 2.0);
  EXPECT_DOUBLE_EQ(comps[0].weight, 1.0);

  BetaPosterior two({{0.2, 4.0, 0.0}, {0.6, 5.0, 0.0}}, BetaWorkingPrior{});
  comps = beta_posterior_predictive(two).beta_components();
  ASSERT_EQ(comps.size(), 2u);
  EXPECT_NEAR(comps[0].weight, 0.5, 1e-15);
  EXPECT_NEAR(comps[1].weight, 0.5, 1e-15);

  two.update(0.3);
  const auto pred = beta_posterior_predictive(two);
  EXPECT_NEAR(pred.mean(), two.posterior_mean_rho(), 1e-14);
  EXPECT_NO_THROW(pred.validate());
}

TEST(BetaPosteriorPredictive, PruningBarelyMovesTheBet) {
  const auto law = TrueLaw::beta(2.0, 6.0);
  Rng rng(3);
  auto post = BetaPosterior::from_prior_grid(BetaWorkingPrior{});
  for (double x : law.sample(rng, 100)) post.update(x);
  const auto full = beta_posterior_predictive(post);
  const auto pruned = beta_posterior_predictive(post, 1e-15);
  for (double mu : {0.1, 0.25, 0.5, 0.8}) {
    EXPECT_NEAR(solve_lambda(full, mu, 0.95).lambda, solve_lambda(pruned, mu, 0.95).lambda, 1e-9);
  }
}

TEST(PriorGrid, ReproducesPriorMoments) {
  for (const BetaWorkingPrior prior : {BetaWorkingPrior{{2.0, 3.0}, {1.5, 1.0}},
                                       BetaWorkingPrior{{50.0, 450.0}, {1.0, 100.0}},
                                       BetaWorkingPrior{{1.0, 1.0}, {2.0, 0.1}}}) {
    const auto post = BetaPosterior::from_prior_grid(prior);
    EXPECT_LE(post.particles().size(), 1000u);
    const auto w = post.normalized_weights();
    double m_rho = 0.0;
    double m_nu = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      m_rho += w[k] * post.particles()[k].rho;
      m_nu += w[k] * post.particles()[k].nu;
    }
    EXPECT_NEAR(m_rho, prior.rho.mean(), 0.02 * prior.rho.mean());
    const double nu_mean = prior.nu.shape / prior.nu.rate;
    EXPECT_NEAR(m_nu, nu_mean, 0.1 * nu_mean);
  }
}

TEST(PriorGrid, PosteriorCanLeaveAMisplacedPrior) {
  // Prior mass sits near 0.5; data come from a law with mean 0.1.
  const BetaWorkingPrior prior{{250.0, 250.0}, {7.5, 1.0}};
  auto post = BetaPosterior::from_prior_grid(prior);
  Rng rng(6);
  for (double x : TrueLaw::beta(2.0, 18.0).sample(rng, 2000)) post.update(x);
  // Conjugate intuition: 500 prior pseudo-observations against 2000 real ones.
  EXPECT_LT(post.posterior_mean_rho(), 0.3);
}

TEST(MdpPredictive, MixtureWeights) {
  BetaPosterior one({{0.5, 4.0, 0.0}}, BetaWorkingPrior{});
  const auto param = beta_posterior_predictive(one);
  std::vector<double> h(50);
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = (i % 2) ? 0.9 : 0.1;
  const auto p = mdp_predictive(param, h, 50.0);
  double atom_mass = 0.0;
  for (const auto& a : p.atoms()) atom_mass += a.weight;
  double beta_mass = 0.0;
  for (const auto& b : p.beta_components()) beta_mass += b.weight;
  EXPECT_NEAR(atom_mass, 0.5, 1e-15);
  EXPECT_NEAR(beta_mass, 0.5, 1e-15);

  const auto empty = mdp_predictive(param, std::vector<double>{}, 50.0);
  EXPECT_TRUE(empty.atoms().empty());
  EXPECT_EQ(empty.beta_components().size(), 1u);
  EXPECT_DOUBLE_EQ(empty.mean(), param.mean());

  EXPECT_THROW(MdpConfig{-1.0}.validate(), std::invalid_argument);
}

TEST(MdpPredictive, KappaZeroIsEmpirical) {
  BetaPosterior one({{0.5, 4.0, 0.0}}, BetaWorkingPrior{});
  const auto param = beta_posterior_predictive(one);
  const std::vector<double> h{0.1, 0.4, 0.4, 0.95};
  const auto mdp = mdp_predictive(param, h, 0.0);
  const auto emp = empirical_predictive(h);
  ASSERT_EQ(mdp.atoms().size(), emp.atoms().size());
  for (std::size_t i = 0; i < emp.atoms().size(); ++i) {
    EXPECT_EQ(mdp.atoms()[i].location, emp.atoms()[i].location);
    EXPECT_EQ(mdp.atoms()[i].weight, emp.atoms()[i].weight);
  }
  EXPECT_TRUE(mdp.beta_blocks().empty());
  EXPECT_TRUE(mdp_predictive(param, std::vector<double>{}, 0.0).is_abstain());
}
