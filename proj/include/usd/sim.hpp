#pragma once

// Monte Carlo discrimination experiments. Trials are split into fixed-size
// batches; batch b draws from its own generator seeded by (seed, stream, b),
// so results depend only on the seed, never on the thread count.

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "usd/corelin.hpp"
#include "usd/symusd.hpp"

namespace usd {

inline constexpr std::uint64_t kTrialBatchSize = std::uint64_t{1} << 16;
/// Residual below which Born probabilities are treated as rounding noise.
inline constexpr double kProbabilityDust = 1e-9;

class DiscriminationOutcome {
 public:
  /// index is 1-based.
  static DiscriminationOutcome identified(std::size_t index);
  static DiscriminationOutcome inconclusive() { return DiscriminationOutcome(std::nullopt); }

  bool is_inconclusive() const { return !index_; }
  std::size_t index() const;

  friend bool operator==(const DiscriminationOutcome&, const DiscriminationOutcome&) = default;

 private:
  explicit DiscriminationOutcome(std::optional<std::size_t> index) : index_(index) {}
  std::optional<std::size_t> index_;
};

/// Outcome counts indexed by (outcome row, prepared state). Rows 0..N-1 are
/// "identified as state row+1", row N is inconclusive.
class TrialStats {
 public:
  explicit TrialStats(std::size_t n_states);

  std::size_t n_states() const { return n_states_; }
  std::uint64_t n_trials() const { return n_trials_; }
  std::uint64_t count(std::size_t outcome_row, std::size_t prepared) const {
    return counts_[outcome_row * n_states_ + prepared];
  }
  void record(std::size_t prepared, const DiscriminationOutcome& outcome);
  void merge(const TrialStats& other);

  std::uint64_t prepared_count(std::size_t prepared) const;
  std::uint64_t success_count() const;
  std::uint64_t inconclusive_count() const;
  std::uint64_t error_count() const;

  double success_rate() const;
  double inconclusive_rate() const;
  double error_rate() const;

  friend bool operator==(const TrialStats&, const TrialStats&) = default;

 private:
  std::size_t n_states_;
  std::uint64_t n_trials_ = 0;
  std::vector<std::uint64_t> counts_;
};

/// {n_trials, counts, success_rate, inconclusive_rate, error_count}
void to_json(nlohmann::json& j, const TrialStats& s);

/// Born probabilities (identified 1..N, then inconclusive). Entries within
/// kProbabilityDust below zero are clipped and the vector renormalized;
/// anything worse throws InvalidPovmError.
std::vector<double> born_probabilities(const Povm& m, const PureState& s);

/// Inverse-CDF draw over the fixed outcome ordering; u in [0, 1).
DiscriminationOutcome outcome_from_uniform(std::span<const double> probabilities, double u);

/// Uniform double in [0, 1) from the top 53 bits of one engine output.
double uniform01(Rng& rng);

DiscriminationOutcome sample_outcome(const Povm& m, const PureState& s, Rng& rng);

/// Generator for one batch of one stream.
Rng batch_rng(std::uint64_t seed, std::uint32_t stream, std::uint64_t batch);

struct SimOptions {
  std::uint64_t seed = 0;
  std::uint32_t stream = 0;
  unsigned threads = 0;  ///< 0 = hardware concurrency
};

/// n trials: prepared state drawn from the priors, outcome sampled from m.
TrialStats run_trials(const StateEnsemble& e, const Povm& m, std::uint64_t n, const SimOptions& opts);

/// Optimal POVM on the dimension-3 representation of C trine copies.
Povm collective_povm(int copies);

/// 1 - (1 - P_2)^(floor(C/2)): success of optimal measurements on disjoint pairs.
double pairwise_success_analytic(int copies);

enum class PairwiseMode {
  NonAdaptive,  ///< measure every pair, require all identifications to agree
  EarlyExit,    ///< stop at the first conclusive pair
};

/// Each trial prepares a trine index and runs C/2 independent optimal 2-copy
/// measurements; it succeeds iff some pair identifies. Conflicting
/// identifications throw InvariantViolation. Requires even C >= 2.
TrialStats pairwise_strategy(int copies, std::uint64_t n, const SimOptions& opts,
                             PairwiseMode mode = PairwiseMode::NonAdaptive);

struct StrategyReport {
  int copies;
  int pairwise_copies;  ///< copies actually used by the pairwise strategy (odd C drops one)
  double collective_analytic;
  double pairwise_analytic;
  double single_copy_baseline;
  TrialStats collective;
  TrialStats pairwise;
};

void to_json(nlohmann::json& j, const StrategyReport& r);

/// Collective optimum versus pairwise measurements at C copies.
StrategyReport strategy_report(int copies, std::uint64_t n, const SimOptions& opts);

/// sqrt(p (1 - p) / n)
double binomial_sigma(double p, std::uint64_t n);

}  // namespace usd
