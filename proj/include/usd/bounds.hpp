#pragma once

// How many pure states spanning a D-dimensional space can be unambiguously
// discriminated when C copies are available: the necessary and sufficient
// copy-number bounds, a three-way verdict, and randomized constructions that
// show each bound is tight.

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "usd/corelin.hpp"

namespace usd {

/// Required margin for two witness states to count as distinct: |<a|b>| <= 1 - 1e-8.
inline constexpr double kDistinctMargin = 1e-8;

enum class Verdict { Impossible, Guaranteed, Indeterminate };

std::string_view to_string(Verdict v);

struct FeasibilityVerdict {
  Verdict verdict;
  std::uint64_t necessary_max;
  std::uint64_t sufficient_max;
  std::uint64_t n;
  std::uint64_t copies;
  std::uint64_t dim;
};

void to_json(nlohmann::json& j, const FeasibilityVerdict& v);

/// binomial(C + D - 1, C); more states than this always have dependent C-fold copies.
std::uint64_t necessary_max(std::uint64_t copies, std::uint64_t dim);

/// C + D - 1; any this many distinct states have independent C-fold copies.
std::uint64_t sufficient_max(std::uint64_t copies, std::uint64_t dim);

FeasibilityVerdict classify(std::uint64_t n, std::uint64_t copies, std::uint64_t dim);

/// Supplies candidate states of the requested dimension.
using StateSource = std::function<PureState(std::size_t dim)>;

/// sym_dim(C, D) states in dimension D whose C-fold powers are linearly
/// independent, grown greedily from Haar-random candidates. Throws
/// WitnessError after max_rejections consecutive useless candidates.
StateEnsemble achievability_witness(int copies, int dim, Rng& rng, int max_rejections = 1000);
StateEnsemble achievability_witness(int copies, int dim, const StateSource& draw, int max_rejections = 1000);

/// C + D distinct states in dimension D whose C-fold powers are linearly
/// dependent: D random independent states plus C random superpositions of
/// the last two of them. Superposition coefficients are drawn as qubit states.
StateEnsemble dependence_witness(int copies, int dim, Rng& rng, int max_retries = 1000);
StateEnsemble dependence_witness(int copies, int dim, const StateSource& draw, int max_retries = 1000);

/// Which precondition of the tensor-extension check a caller violated.
enum class LemmaPremise {
  CardinalityMismatch,
  EmptyFamily,
  PhisDependent,
  ChisNotDistinct,
  ChiNotDistinct,
  DimensionMismatch,
};

std::string_view to_string(LemmaPremise p);

class LemmaPremiseError : public ValidationError {
 public:
  explicit LemmaPremiseError(LemmaPremise premise);
  LemmaPremise premise() const { return premise_; }

 private:
  LemmaPremise premise_;
};

/// Linear independence of {phi_k (x) chi_k} together with phi (x) chi, given
/// {phi_k} independent, {chi_k} pairwise distinct and chi distinct from every
/// chi_k. Under those premises the answer is always true.
bool lemma_check(std::span<const PureState> phis, std::span<const PureState> chis, const PureState& phi,
                 const PureState& chi);

/// Walks the inductive chain S^r = {psi_j^{(x)r} : j = 1..D+r-1}, r = 1..C,
/// over N = C + D - 1 distinct states whose first D are linearly independent.
/// Each step is checked with lemma_check; returns the rank of S^C.
/// Throws LemmaPremiseError when a step's premises fail.
std::size_t induction_chain_rank(const StateEnsemble& e, int copies);

}  // namespace usd
