#include "usd/sim.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "gtest/gtest.h"
#include "usd/trine.hpp"

using namespace usd;

namespace {

StateEnsemble orthonormal(std::size_t n) {
  std::vector<PureState> s;
  for (std::size_t k = 0; k < n; ++k) s.push_back(PureState::basis(n, k));
  return StateEnsemble(std::move(s));
}

void expect_within_sigma(const TrialStats& s, double p, double k = 4.0) {
  EXPECT_LE(std::abs(s.success_rate() - p), k * binomial_sigma(p, s.n_trials()) + 1e-15)
      << "rate " << s.success_rate() << " vs " << p;
}

}  // namespace

TEST(outcome, indexing) {
  EXPECT_TRUE(DiscriminationOutcome::inconclusive().is_inconclusive());
  EXPECT_EQ(DiscriminationOutcome::identified(2).index(), 2u);
  EXPECT_THROW(DiscriminationOutcome::identified(0), ValidationError);
  EXPECT_THROW((void)DiscriminationOutcome::inconclusive().index(), std::logic_error);
}

TEST(trial_stats, bookkeeping) {
  TrialStats s(3);
  s.record(0, DiscriminationOutcome::identified(1));
  s.record(1, DiscriminationOutcome::inconclusive());
  s.record(2, DiscriminationOutcome::identified(1));
  EXPECT_EQ(s.n_trials(), 3u);
  EXPECT_EQ(s.success_count(), 1u);
  EXPECT_EQ(s.inconclusive_count(), 1u);
  EXPECT_EQ(s.error_count(), 1u);
  EXPECT_EQ(s.prepared_count(2), 1u);
  EXPECT_NEAR(s.success_rate() + s.inconclusive_rate() + s.error_rate(), 1.0, 1e-15);

  const nlohmann::json j = s;
  EXPECT_EQ(j.at("counts").size(), 4u);
  EXPECT_EQ(j.at("error_count"), 1);
}

TEST(born, inverse_cdf_ordering) {
  const std::vector<double> p{0.25, 0.0, 0.5, 0.25};
  EXPECT_EQ(outcome_from_uniform(p, 0.0), DiscriminationOutcome::identified(1));
  EXPECT_EQ(outcome_from_uniform(p, 0.2499), DiscriminationOutcome::identified(1));
  EXPECT_EQ(outcome_from_uniform(p, 0.25), DiscriminationOutcome::identified(3));
  EXPECT_EQ(outcome_from_uniform(p, 0.7499), DiscriminationOutcome::identified(3));
  EXPECT_TRUE(outcome_from_uniform(p, 0.75).is_inconclusive());
  EXPECT_TRUE(outcome_from_uniform(p, 0.9999999).is_inconclusive());
}

TEST(born, invalid_povm_rejected) {
  const StateEnsemble e = multitrine_representation(2);
  Povm m = usd_povm(e, 0.5);
  m.inconclusive *= 0.9;  // probabilities no longer sum to 1
  EXPECT_THROW(born_probabilities(m, e[0]), InvalidPovmError);

  const Povm over = usd_povm(e, 0.8);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(over.inconclusive);
  ASSERT_LT(eig.eigenvalues()(0), -1e-6);
  const PureState worst(Vector(eig.eigenvectors().col(0)));
  EXPECT_THROW(born_probabilities(over, worst), InvalidPovmError);
}

TEST(sample_outcome, projective_on_eigenstate_is_deterministic) {
  const StateEnsemble e = orthonormal(3);
  const Povm m = usd_povm(e, 1.0);
  Rng rng(1);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_outcome(m, e[1], rng), DiscriminationOutcome::identified(2));
}

TEST(sample_outcome, two_copy_trine_probabilities) {
  const StateEnsemble e = multitrine_representation(2);
  const Povm m = collective_povm(2);
  const auto p = born_probabilities(m, e[0]);
  ASSERT_EQ(p.size(), 4u);
  EXPECT_NEAR(p[0], 0.75, 1e-12);
  EXPECT_NEAR(p[1], 0.0, 1e-12);
  EXPECT_NEAR(p[2], 0.0, 1e-12);
  EXPECT_NEAR(p[3], 0.25, 1e-12);

  Rng rng(2);
  int identified = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const auto o = sample_outcome(m, e[0], rng);
    if (!o.is_inconclusive()) {
      ASSERT_EQ(o.index(), 1u);
      ++identified;
    }
  }
  EXPECT_LE(std::abs(identified / static_cast<double>(n) - 0.75), 4.0 * binomial_sigma(0.75, n));
}

TEST(sample_outcome, orthogonal_lift_never_inconclusive) {
  const StateEnsemble e = lifted_trine(kOrthogonalLift);
  const Povm m = usd_povm(e, max_uniform_success(e));
  Rng rng(3);
  for (int i = 0; i < 3000; ++i) {
    const std::size_t j = static_cast<std::size_t>(i % 3);
    EXPECT_EQ(sample_outcome(m, e[j], rng), DiscriminationOutcome::identified(j + 1));
  }
}

TEST(run_trials, orthonormal_projective) {
  const StateEnsemble e = orthonormal(4);
  const TrialStats s = run_trials(e, usd_povm(e, 1.0), 10'000, {.seed = 5});
  EXPECT_EQ(s.n_trials(), 10'000u);
  EXPECT_EQ(s.success_count(), 10'000u);
  EXPECT_EQ(s.error_count(), 0u);
}

TEST(run_trials, two_copy_trine_optimum) {
  const TrialStats s = run_trials(multitrine_representation(2), collective_povm(2), 1'000'000, {.seed = 7});
  EXPECT_EQ(s.error_count(), 0u);
  expect_within_sigma(s, 0.75);
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_LE(std::abs(s.prepared_count(j) / 1e6 - 1.0 / 3.0), 4.0 * binomial_sigma(1.0 / 3.0, 1'000'000));
  }
}

TEST(run_trials, four_copy_collective_optimum) {
  const TrialStats s = run_trials(multitrine_representation(4), collective_povm(4), 1'000'000, {.seed = 8});
  EXPECT_EQ(s.error_count(), 0u);
  expect_within_sigma(s, 15.0 / 16.0);
}

TEST(run_trials, respects_priors) {
  const StateEnsemble e(orthonormal(2).states(), {0.9, 0.1});
  const TrialStats s = run_trials(e, usd_povm(e, 1.0), 200'000, {.seed = 9});
  EXPECT_LE(std::abs(s.prepared_count(0) / 2e5 - 0.9), 4.0 * binomial_sigma(0.9, 200'000));
}

TEST(run_trials, deterministic_for_seed_and_thread_count) {
  const StateEnsemble e = multitrine_representation(3);
  const Povm m = collective_povm(3);
  const std::uint64_t n = 3 * kTrialBatchSize + 123;
  const TrialStats one = run_trials(e, m, n, {.seed = 42, .threads = 1});
  const TrialStats again = run_trials(e, m, n, {.seed = 42, .threads = 1});
  const TrialStats four = run_trials(e, m, n, {.seed = 42, .threads = 4});
  EXPECT_EQ(one, again);
  EXPECT_EQ(one, four);
  EXPECT_EQ(one.n_trials(), n);
  const TrialStats other = run_trials(e, m, n, {.seed = 43, .threads = 1});
  EXPECT_NE(one, other);
}

TEST(run_trials, propagates_invalid_povm) {
  const StateEnsemble e = multitrine_representation(2);
  Povm m = usd_povm(e, 0.5);
  m.inconclusive *= 0.5;
  EXPECT_THROW(run_trials(e, m, 10, {}), InvalidPovmError);
  EXPECT_THROW(run_trials(e, usd_povm(e, 0.5), 0, {}), ValidationError);
}

TEST(pairwise, analytic_matches_collective_for_even_copies) {
  for (int c = 2; c <= 28; c += 2) {
    EXPECT_NEAR(pairwise_success_analytic(c), p_max_multitrine(c), 1e-12) << "C=" << c;
  }
  EXPECT_NEAR(pairwise_success_analytic(6), 63.0 / 64.0, 1e-15);
  EXPECT_NEAR(pairwise_success_analytic(7), 63.0 / 64.0, 1e-15);
}

TEST(pairwise, two_copies) {
  const TrialStats s = pairwise_strategy(2, 200'000, {.seed = 11});
  EXPECT_EQ(s.error_count(), 0u);
  expect_within_sigma(s, 0.75);
}

TEST(pairwise, four_copies) {
  const TrialStats s = pairwise_strategy(4, 1'000'000, {.seed = 12});
  EXPECT_EQ(s.error_count(), 0u);
  expect_within_sigma(s, 15.0 / 16.0);
}

TEST(pairwise, six_copies) {
  const TrialStats s = pairwise_strategy(6, 400'000, {.seed = 13});
  EXPECT_EQ(s.error_count(), 0u);
  expect_within_sigma(s, 63.0 / 64.0);
}

TEST(pairwise, early_exit_has_same_distribution) {
  // Both modes should land within sampling noise of each other and of the analytic value.
  const std::uint64_t n = 500'000;
  const TrialStats full = pairwise_strategy(4, n, {.seed = 21}, PairwiseMode::NonAdaptive);
  const TrialStats early = pairwise_strategy(4, n, {.seed = 22}, PairwiseMode::EarlyExit);
  const double p = 15.0 / 16.0;
  expect_within_sigma(full, p);
  expect_within_sigma(early, p);
  EXPECT_LE(std::abs(full.success_rate() - early.success_rate()), 4.0 * std::sqrt(2.0) * binomial_sigma(p, n));
  for (std::size_t j = 0; j < 3; ++j) {
    const double a = static_cast<double>(full.count(j, j)) / static_cast<double>(full.prepared_count(j));
    const double b = static_cast<double>(early.count(j, j)) / static_cast<double>(early.prepared_count(j));
    EXPECT_LE(std::abs(a - b), 4.0 * std::sqrt(2.0) * binomial_sigma(p, n / 3));
  }
}

TEST(pairwise, rejects_odd_or_small) {
  EXPECT_THROW(pairwise_strategy(3, 10, {}), ValidationError);
  EXPECT_THROW(pairwise_strategy(0, 10, {}), ValidationError);
}

TEST(strategy_report, odd_copies_discard_one) {
  const StrategyReport r = strategy_report(3, 100'000, {.seed = 31});
  EXPECT_EQ(r.pairwise_copies, 2);
  EXPECT_DOUBLE_EQ(r.collective_analytic, 0.75);
  EXPECT_DOUBLE_EQ(r.pairwise_analytic, 0.75);
  EXPECT_EQ(r.single_copy_baseline, 0.0);
  EXPECT_EQ(r.collective.error_count(), 0u);
  EXPECT_EQ(r.pairwise.error_count(), 0u);
  expect_within_sigma(r.collective, 0.75);
  expect_within_sigma(r.pairwise, 0.75);
}

TEST(strategy_report, two_and_eight_copies) {
  const StrategyReport two = strategy_report(2, 100'000, {.seed = 32});
  EXPECT_DOUBLE_EQ(two.collective_analytic, 0.75);
  EXPECT_DOUBLE_EQ(two.pairwise_analytic, 0.75);

  const StrategyReport eight = strategy_report(8, 100'000, {.seed = 33});
  EXPECT_NEAR(eight.collective_analytic, 255.0 / 256.0, 1e-15);
  EXPECT_NEAR(eight.pairwise_analytic, 255.0 / 256.0, 1e-15);
  expect_within_sigma(eight.collective, 255.0 / 256.0);
  expect_within_sigma(eight.pairwise, 255.0 / 256.0);

  const nlohmann::json j = eight;
  EXPECT_EQ(j.at("pairwise_copies"), 8);
  EXPECT_EQ(j.at("collective").at("stats").at("error_count"), 0);
}
