#include "usd/bounds.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace usd {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Impossible: return "Impossible";
    case Verdict::Guaranteed: return "Guaranteed";
    case Verdict::Indeterminate: return "Indeterminate";
  }
  return "?";
}

void to_json(nlohmann::json& j, const FeasibilityVerdict& v) {
  j = nlohmann::json{{"verdict", to_string(v.verdict)},
                     {"necessary_max", v.necessary_max},
                     {"sufficient_max", v.sufficient_max},
                     {"N", v.n},
                     {"C", v.copies},
                     {"D", v.dim}};
}

std::uint64_t necessary_max(std::uint64_t copies, std::uint64_t dim) { return sym_dim(copies, dim); }

std::uint64_t sufficient_max(std::uint64_t copies, std::uint64_t dim) {
  if (copies < 1 || dim < 1) throw ValidationError("sufficient_max: copies and dim must be at least 1");
  if (copies > std::numeric_limits<std::uint64_t>::max() - (dim - 1)) {
    throw std::overflow_error("sufficient_max: C + D - 1 exceeds 64 bits");
  }
  if (dim == 1) return 1;  // a one-dimensional space holds a single distinct state
  return copies + dim - 1;
}

FeasibilityVerdict classify(std::uint64_t n, std::uint64_t copies, std::uint64_t dim) {
  if (n < 1) throw ValidationError("classify: N must be at least 1");
  FeasibilityVerdict out{Verdict::Indeterminate, necessary_max(copies, dim), sufficient_max(copies, dim), n, copies,
                         dim};
  if (n > out.necessary_max) {
    out.verdict = Verdict::Impossible;
  } else if (n <= out.sufficient_max) {
    out.verdict = Verdict::Guaranteed;
  }
  return out;
}

namespace {

bool distinct_from_all(const PureState& s, std::span<const PureState> others) {
  for (const auto& o : others) {
    if (std::abs(s.overlap(o)) > 1.0 - kDistinctMargin) return false;
  }
  return true;
}

std::vector<PureState> powers_of(std::span<const PureState> states, int copies) {
  std::vector<PureState> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(tensor_power(s, copies));
  return out;
}

void require_tensor_fits(int copies, int dim) {
  if (copies < 1 || dim < 1) throw ValidationError("witness: copies and dim must be at least 1");
  if (std::pow(static_cast<double>(dim), copies) > static_cast<double>(kMaxTensorEntries)) {
    throw ValidationError("witness: D^C exceeds the tensor cap");
  }
}

StateSource haar_source(Rng& rng) {
  return [&rng](std::size_t dim) { return haar_random_state(dim, rng); };
}

}  // namespace

StateEnsemble achievability_witness(int copies, int dim, Rng& rng, int max_rejections) {
  return achievability_witness(copies, dim, haar_source(rng), max_rejections);
}

StateEnsemble dependence_witness(int copies, int dim, Rng& rng, int max_retries) {
  return dependence_witness(copies, dim, haar_source(rng), max_retries);
}

StateEnsemble achievability_witness(int copies, int dim, const StateSource& draw, int max_rejections) {
  require_tensor_fits(copies, dim);
  const std::size_t target = sym_dim(static_cast<std::uint64_t>(copies), static_cast<std::uint64_t>(dim));

  std::vector<PureState> states;
  std::vector<PureState> powers;
  int rejections = 0;
  while (states.size() < target) {
    PureState candidate = draw(static_cast<std::size_t>(dim));
    bool accepted = false;
    if (distinct_from_all(candidate, states)) {
      powers.push_back(tensor_power(candidate, copies));
      if (li_rank(powers) == powers.size()) {
        states.push_back(std::move(candidate));
        accepted = true;
      } else {
        powers.pop_back();
      }
    }
    if (accepted) {
      rejections = 0;
    } else if (++rejections >= max_rejections) {
      throw WitnessError("achievability_witness: no rank-increasing candidate after " +
                         std::to_string(max_rejections) + " draws");
    }
  }
  if (li_rank(powers) != target) throw InvariantViolation("achievability_witness: final rank check failed");
  return StateEnsemble(std::move(states));
}

StateEnsemble dependence_witness(int copies, int dim, const StateSource& draw, int max_retries) {
  require_tensor_fits(copies, dim);
  if (dim < 2) throw ValidationError("dependence_witness: D must be at least 2");

  for (int attempt = 0; attempt < max_retries; ++attempt) {
    std::vector<PureState> states;
    for (int j = 0; j < dim; ++j) states.push_back(draw(static_cast<std::size_t>(dim)));
    if (!is_linearly_independent(states) || !StateEnsemble(states).is_distinct(kDistinctMargin)) continue;

    const Vector a_vec = states[static_cast<std::size_t>(dim) - 2].amplitudes();
    const Vector b_vec = states[static_cast<std::size_t>(dim) - 1].amplitudes();
    int misses = 0;
    while (states.size() < static_cast<std::size_t>(copies + dim) && misses < max_retries) {
      const PureState coeffs = draw(2);
      PureState candidate = PureState::normalized(coeffs[0] * a_vec + coeffs[1] * b_vec);
      if (distinct_from_all(candidate, states)) {
        states.push_back(std::move(candidate));
      } else {
        ++misses;
      }
    }
    if (states.size() != static_cast<std::size_t>(copies + dim)) continue;

    if (li_rank(powers_of(states, copies)) < states.size()) return StateEnsemble(std::move(states));
  }
  throw WitnessError("dependence_witness: construction failed after " + std::to_string(max_retries) + " attempts");
}

std::string_view to_string(LemmaPremise p) {
  switch (p) {
    case LemmaPremise::CardinalityMismatch: return "phis and chis differ in cardinality";
    case LemmaPremise::EmptyFamily: return "phis and chis are empty";
    case LemmaPremise::PhisDependent: return "phis are linearly dependent";
    case LemmaPremise::ChisNotDistinct: return "chis are not pairwise distinct";
    case LemmaPremise::ChiNotDistinct: return "chi coincides with some chi_k";
    case LemmaPremise::DimensionMismatch: return "states within a family differ in dimension";
  }
  return "?";
}

LemmaPremiseError::LemmaPremiseError(LemmaPremise premise)
    : ValidationError("lemma_check: " + std::string(to_string(premise))), premise_(premise) {}

bool lemma_check(std::span<const PureState> phis, std::span<const PureState> chis, const PureState& phi,
                 const PureState& chi) {
  if (phis.size() != chis.size()) throw LemmaPremiseError(LemmaPremise::CardinalityMismatch);
  if (phis.empty()) throw LemmaPremiseError(LemmaPremise::EmptyFamily);
  for (const auto& p : phis) {
    if (p.dim() != phi.dim()) throw LemmaPremiseError(LemmaPremise::DimensionMismatch);
  }
  for (const auto& c : chis) {
    if (c.dim() != chi.dim()) throw LemmaPremiseError(LemmaPremise::DimensionMismatch);
  }
  if (!is_linearly_independent(phis)) throw LemmaPremiseError(LemmaPremise::PhisDependent);
  for (std::size_t j = 0; j < chis.size(); ++j) {
    for (std::size_t k = j + 1; k < chis.size(); ++k) {
      if (std::abs(chis[j].overlap(chis[k])) >= 1.0) throw LemmaPremiseError(LemmaPremise::ChisNotDistinct);
    }
  }
  for (const auto& c : chis) {
    if (std::abs(c.overlap(chi)) >= 1.0) throw LemmaPremiseError(LemmaPremise::ChiNotDistinct);
  }

  std::vector<PureState> products;
  products.reserve(phis.size() + 1);
  for (std::size_t k = 0; k < phis.size(); ++k) products.push_back(tensor_product(phis[k], chis[k]));
  products.push_back(tensor_product(phi, chi));
  return is_linearly_independent(products);
}

std::size_t induction_chain_rank(const StateEnsemble& e, int copies) {
  if (copies < 1) throw ValidationError("induction_chain_rank: copies must be at least 1");
  const std::size_t dim = e.dim();
  if (e.size() != static_cast<std::size_t>(copies) + dim - 1) {
    throw ValidationError("induction_chain_rank: need exactly C + D - 1 states");
  }
  const auto& psi = e.states();
  std::vector<PureState> level(psi.begin(), psi.begin() + static_cast<std::ptrdiff_t>(dim));
  if (!is_linearly_independent(level)) throw LemmaPremiseError(LemmaPremise::PhisDependent);

  for (int r = 2; r <= copies; ++r) {
    // level holds S^{r-1} = {psi_j^{(x)(r-1)} : j < D + r - 2}
    const std::size_t count = dim + static_cast<std::size_t>(r) - 2;
    const std::span<const PureState> chis(psi.data(), count);
    const PureState& chi = psi[count];
    const PureState phi = tensor_power(chi, r - 1);
    if (!lemma_check(level, chis, phi, chi)) {
      throw InvariantViolation("induction_chain_rank: extension lost independence at r = " + std::to_string(r));
    }
    std::vector<PureState> next;
    next.reserve(count + 1);
    for (std::size_t k = 0; k < count; ++k) next.push_back(tensor_product(level[k], chis[k]));
    next.push_back(tensor_product(phi, chi));
    level = std::move(next);
  }
  return li_rank(level);
}

}  // namespace usd
