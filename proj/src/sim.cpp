#include "usd/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "usd/trine.hpp"

namespace usd {

DiscriminationOutcome DiscriminationOutcome::identified(std::size_t index) {
  if (index < 1) throw ValidationError("DiscriminationOutcome: index is 1-based");
  return DiscriminationOutcome(index);
}

std::size_t DiscriminationOutcome::index() const {
  if (!index_) throw std::logic_error("DiscriminationOutcome: inconclusive outcome has no index");
  return *index_;
}

TrialStats::TrialStats(std::size_t n_states) : n_states_(n_states), counts_((n_states + 1) * n_states, 0) {
  if (n_states < 1) throw ValidationError("TrialStats: need at least one state");
}

void TrialStats::record(std::size_t prepared, const DiscriminationOutcome& outcome) {
  if (prepared >= n_states_) throw ValidationError("TrialStats: prepared index out of range");
  const std::size_t row = outcome.is_inconclusive() ? n_states_ : outcome.index() - 1;
  if (row > n_states_) throw ValidationError("TrialStats: outcome index out of range");
  ++counts_[row * n_states_ + prepared];
  ++n_trials_;
}

void TrialStats::merge(const TrialStats& other) {
  if (other.n_states_ != n_states_) throw ValidationError("TrialStats::merge: state counts differ");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  n_trials_ += other.n_trials_;
}

std::uint64_t TrialStats::prepared_count(std::size_t prepared) const {
  std::uint64_t total = 0;
  for (std::size_t row = 0; row <= n_states_; ++row) total += count(row, prepared);
  return total;
}

std::uint64_t TrialStats::success_count() const {
  std::uint64_t total = 0;
  for (std::size_t j = 0; j < n_states_; ++j) total += count(j, j);
  return total;
}

std::uint64_t TrialStats::inconclusive_count() const {
  std::uint64_t total = 0;
  for (std::size_t j = 0; j < n_states_; ++j) total += count(n_states_, j);
  return total;
}

std::uint64_t TrialStats::error_count() const { return n_trials_ - success_count() - inconclusive_count(); }

double TrialStats::success_rate() const {
  return n_trials_ == 0 ? 0.0 : static_cast<double>(success_count()) / static_cast<double>(n_trials_);
}

double TrialStats::inconclusive_rate() const {
  return n_trials_ == 0 ? 0.0 : static_cast<double>(inconclusive_count()) / static_cast<double>(n_trials_);
}

double TrialStats::error_rate() const {
  return n_trials_ == 0 ? 0.0 : static_cast<double>(error_count()) / static_cast<double>(n_trials_);
}

void to_json(nlohmann::json& j, const TrialStats& s) {
  nlohmann::json counts = nlohmann::json::array();
  for (std::size_t row = 0; row <= s.n_states(); ++row) {
    nlohmann::json line = nlohmann::json::array();
    for (std::size_t col = 0; col < s.n_states(); ++col) line.push_back(s.count(row, col));
    counts.push_back(std::move(line));
  }
  j = nlohmann::json{{"n_trials", s.n_trials()},
                     {"counts", std::move(counts)},
                     {"success_rate", s.success_rate()},
                     {"inconclusive_rate", s.inconclusive_rate()},
                     {"error_count", s.error_count()}};
}

std::vector<double> born_probabilities(const Povm& m, const PureState& s) {
  if (m.dim() != s.dim()) throw ValidationError("born_probabilities: POVM and state dimensions differ");
  const Vector& psi = s.amplitudes();
  std::vector<double> probs;
  probs.reserve(m.outcomes() + 1);
  for (const auto& el : m.identify) probs.push_back(psi.dot(el * psi).real());
  probs.push_back(psi.dot(m.inconclusive * psi).real());

  double total = 0.0;
  for (double& p : probs) {
    if (p < -kProbabilityDust) throw InvalidPovmError("born_probabilities: negative outcome probability");
    p = std::clamp(p, 0.0, 1.0);
    total += p;
  }
  if (std::abs(total - 1.0) >= kProbabilityDust) {
    throw InvalidPovmError("born_probabilities: probabilities sum to " + std::to_string(total));
  }
  for (double& p : probs) p /= total;
  return probs;
}

DiscriminationOutcome outcome_from_uniform(std::span<const double> probabilities, double u) {
  double cumulative = 0.0;
  const std::size_t last = probabilities.size() - 1;
  for (std::size_t i = 0; i < last; ++i) {
    cumulative += probabilities[i];
    if (u < cumulative) return DiscriminationOutcome::identified(i + 1);
  }
  return DiscriminationOutcome::inconclusive();
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

DiscriminationOutcome sample_outcome(const Povm& m, const PureState& s, Rng& rng) {
  const auto probs = born_probabilities(m, s);
  return outcome_from_uniform(probs, uniform01(rng));
}

Rng batch_rng(std::uint64_t seed, std::uint32_t stream, std::uint64_t batch) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream,
                    static_cast<std::uint32_t>(batch), static_cast<std::uint32_t>(batch >> 32)};
  return Rng(seq);
}

namespace {

std::size_t draw_index(std::span<const double> weights, double u) {
  double cumulative = 0.0;
  for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
    cumulative += weights[i];
    if (u < cumulative) return i;
  }
  return weights.size() - 1;
}

// Runs batch_fn(b, stats_b) for every batch, then merges in batch order.
template <typename BatchFn>
TrialStats run_batches(std::size_t n_states, std::uint64_t n, unsigned threads, BatchFn batch_fn) {
  const std::uint64_t batches = (n + kTrialBatchSize - 1) / kTrialBatchSize;
  std::vector<TrialStats> partial(batches, TrialStats(n_states));

  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(batches, 1)));

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto work = [&] {
    for (std::uint64_t b = next++; b < batches; b = next++) {
      try {
        const std::uint64_t begin = b * kTrialBatchSize;
        batch_fn(b, std::min(kTrialBatchSize, n - begin), partial[b]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = batches;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  TrialStats total(n_states);
  for (const auto& p : partial) total.merge(p);
  return total;
}

}  // namespace

TrialStats run_trials(const StateEnsemble& e, const Povm& m, std::uint64_t n, const SimOptions& opts) {
  if (n < 1) throw ValidationError("run_trials: need at least one trial");
  if (m.outcomes() != e.size()) throw ValidationError("run_trials: POVM outcome count does not match ensemble");
  std::vector<std::vector<double>> table;
  for (const auto& s : e.states()) table.push_back(born_probabilities(m, s));
  const std::vector<double>& priors = e.priors();

  return run_batches(e.size(), n, opts.threads, [&](std::uint64_t b, std::uint64_t count, TrialStats& stats) {
    Rng rng = batch_rng(opts.seed, opts.stream, b);
    for (std::uint64_t t = 0; t < count; ++t) {
      const std::size_t prepared = draw_index(priors, uniform01(rng));
      stats.record(prepared, outcome_from_uniform(table[prepared], uniform01(rng)));
    }
  });
}

Povm collective_povm(int copies) { return usd_povm(multitrine_representation(copies), p_max_multitrine(copies)); }

double pairwise_success_analytic(int copies) {
  if (copies < 2) throw ValidationError("pairwise_success_analytic: at least two copies are needed");
  const int pairs = copies / 2;
  return 1.0 - std::pow(1.0 - p_max_multitrine(2), pairs);
}

TrialStats pairwise_strategy(int copies, std::uint64_t n, const SimOptions& opts, PairwiseMode mode) {
  if (copies < 2 || copies % 2 != 0) throw ValidationError("pairwise_strategy: copies must be even and at least 2");
  if (n < 1) throw ValidationError("pairwise_strategy: need at least one trial");
  const StateEnsemble pair_states = multitrine_representation(2);
  const Povm pair_povm = collective_povm(2);
  std::vector<std::vector<double>> table;
  for (const auto& s : pair_states.states()) table.push_back(born_probabilities(pair_povm, s));
  const std::vector<double>& priors = pair_states.priors();
  const int pairs = copies / 2;

  return run_batches(pair_states.size(), n, opts.threads, [&](std::uint64_t b, std::uint64_t count, TrialStats& stats) {
    Rng rng = batch_rng(opts.seed, opts.stream, b);
    for (std::uint64_t t = 0; t < count; ++t) {
      const std::size_t prepared = draw_index(priors, uniform01(rng));
      auto result = DiscriminationOutcome::inconclusive();
      for (int p = 0; p < pairs; ++p) {
        const auto outcome = outcome_from_uniform(table[prepared], uniform01(rng));
        if (outcome.is_inconclusive()) continue;
        if (result.is_inconclusive()) {
          result = outcome;
          if (mode == PairwiseMode::EarlyExit) break;
        } else if (!(outcome == result)) {
          throw InvariantViolation("pairwise_strategy: pairs identified different states");
        }
      }
      stats.record(prepared, result);
    }
  });
}

StrategyReport strategy_report(int copies, std::uint64_t n, const SimOptions& opts) {
  if (copies < 2) throw ValidationError("strategy_report: at least two copies are needed");
  const int used = copies - copies % 2;
  SimOptions collective_opts = opts;
  SimOptions pairwise_opts = opts;
  pairwise_opts.stream = opts.stream + 1;
  return StrategyReport{copies,
                        used,
                        p_max_multitrine(copies),
                        pairwise_success_analytic(used),
                        0.0,
                        run_trials(multitrine_representation(copies), collective_povm(copies), n, collective_opts),
                        pairwise_strategy(used, n, pairwise_opts)};
}

void to_json(nlohmann::json& j, const StrategyReport& r) {
  j = nlohmann::json{{"C", r.copies},
                     {"pairwise_copies", r.pairwise_copies},
                     {"single_copy_baseline", r.single_copy_baseline},
                     {"collective", {{"analytic_success", r.collective_analytic}, {"stats", r.collective}}},
                     {"pairwise", {{"analytic_success", r.pairwise_analytic}, {"stats", r.pairwise}}}};
}

double binomial_sigma(double p, std::uint64_t n) { return std::sqrt(p * (1.0 - p) / static_cast<double>(n)); }

}  // namespace usd
