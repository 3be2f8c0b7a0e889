#pragma once

// Dense complex linear algebra on pure states: tensor powers, Gram matrices,
// numerical rank, symmetric-subspace dimension and reciprocal (dual) bases.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "usd/errors.hpp"

namespace usd {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Random engine used everywhere a caller supplies randomness.
using Rng = std::mt19937_64;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kRankTolerance = 1e-10;
inline constexpr double kPsdTolerance = 1e-10;
/// Largest amplitude count a dense tensor power may have.
inline constexpr std::size_t kMaxTensorEntries = std::size_t{1} << 24;

/// Unit-norm complex amplitude vector.
class PureState {
 public:
  /// Throws ValidationError unless the vector is nonempty with norm 1 within 1e-12.
  explicit PureState(Vector amplitudes);

  /// Rescales a nonzero vector to unit norm.
  static PureState normalized(Vector v);
  static PureState basis(std::size_t dim, std::size_t index);

  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
  const Vector& amplitudes() const { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }

  /// <this|other>
  Complex overlap(const PureState& other) const;

 private:
  Vector amplitudes_;
};

/// N pure states of a common dimension together with prior probabilities.
class StateEnsemble {
 public:
  /// Uniform priors.
  explicit StateEnsemble(std::vector<PureState> states);
  StateEnsemble(std::vector<PureState> states, std::vector<double> priors);

  std::size_t size() const { return states_.size(); }
  std::size_t dim() const { return states_.front().dim(); }
  const std::vector<PureState>& states() const { return states_; }
  const std::vector<double>& priors() const { return priors_; }
  const PureState& operator[](std::size_t j) const { return states_[j]; }

  /// True iff |<psi_j'|psi_j>| <= 1 - margin for every pair j != j'.
  /// margin = 0 gives the strict test |overlap| < 1.
  bool is_distinct(double margin = 0.0) const;

  /// dim x N matrix whose columns are the amplitude vectors.
  Matrix columns() const;

 private:
  std::vector<PureState> states_;
  std::vector<double> priors_;
};

/// Matrix of pairwise overlaps, entry (j,k) = <psi_j|psi_k>.
class GramMatrix {
 public:
  explicit GramMatrix(Matrix entries);

  std::size_t size() const { return static_cast<std::size_t>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }
  Complex operator()(std::size_t j, std::size_t k) const {
    return entries_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
  }

  /// Ascending real eigenvalues.
  Eigen::VectorXd eigenvalues() const;
  double min_eigenvalue() const { return eigenvalues()(0); }

 private:
  Matrix entries_;
};

PureState tensor_product(const PureState& a, const PureState& b);

/// C-fold tensor power. Amplitude at multi-index (i_1..i_C) is the product of
/// single-copy amplitudes, with i_1 the most significant digit.
/// Throws ValidationError if copies < 1 or dim^copies > kMaxTensorEntries.
PureState tensor_power(const PureState& s, int copies);
StateEnsemble tensor_power(const StateEnsemble& e, int copies);

GramMatrix gram(std::span<const PureState> states);
GramMatrix gram(const StateEnsemble& e);

/// Number of singular values of the stacked amplitude matrix exceeding
/// tol times the largest one.
std::size_t li_rank(std::span<const PureState> states, double tol = kRankTolerance);
bool is_linearly_independent(std::span<const PureState> states, double tol = kRankTolerance);

/// Number of Gram eigenvalues exceeding tol times the largest one.
std::size_t gram_rank(const GramMatrix& g, double tol = kRankTolerance);

/// Dimension of the symmetric subspace of (C^dim)^{(x)copies}:
/// binomial(copies + dim - 1, copies). Throws std::overflow_error rather than wrapping.
std::uint64_t sym_dim(std::uint64_t copies, std::uint64_t dim);

struct ReciprocalState {
  Vector vector;          ///< unit norm, lies in span of the input states
  Complex normalization;  ///< <reciprocal_k|psi_k>, nonzero
};

/// Dual basis within the span of a linearly independent set:
/// <reciprocal_k'|psi_k> = normalization_k delta_kk'.
/// Throws LinearDependenceError on a dependent set.
std::vector<ReciprocalState> reciprocal_states(std::span<const PureState> states,
                                               double tol = kRankTolerance);

/// Haar-random state on the unit sphere of C^dim.
PureState haar_random_state(std::size_t dim, Rng& rng);

void to_json(nlohmann::json& j, const PureState& s);
/// Inverse of to_json; validates normalization.
PureState state_from_json(const nlohmann::json& j);

}  // namespace usd

namespace nlohmann {
template <>
struct adl_serializer<usd::PureState> {
  static usd::PureState from_json(const json& j) { return usd::state_from_json(j); }
  static void to_json(json& j, const usd::PureState& s) { usd::to_json(j, s); }
};
}  // namespace nlohmann
