#pragma once

// Optimal unambiguous discrimination of equiprobable symmetric states,
// explicit zero-error POVMs built from reciprocal states, and a bisection
// oracle for the largest uniform success probability.

#include <vector>

#include <json.hpp>

#include "usd/corelin.hpp"

namespace usd {

/// States psi_j = sum_k c_k exp(2 pi i j k / N) |u_k>, j = 1..N.
class SymmetricEnsemble {
 public:
  /// Standard basis for u_k.
  explicit SymmetricEnsemble(std::vector<Complex> coefficients);
  /// Throws ValidationError on zero coefficients, non-normalized c, or a non-orthonormal basis.
  SymmetricEnsemble(std::vector<Complex> coefficients, std::vector<PureState> basis);

  std::size_t size() const { return coefficients_.size(); }
  const std::vector<Complex>& coefficients() const { return coefficients_; }
  const std::vector<PureState>& basis() const { return basis_; }

  /// The realized states, uniform priors.
  StateEnsemble states() const;

 private:
  std::vector<Complex> coefficients_;
  std::vector<PureState> basis_;
};

StateEnsemble symmetric_from_coefficients(std::vector<Complex> c, std::vector<PureState> basis);
StateEnsemble symmetric_from_coefficients(std::vector<Complex> c);

/// N * min_k |c_k|^2.
double p_max_symmetric(std::span<const Complex> c);

/// Gram entries depend only on (k - j) mod N, within tol.
bool is_circulant_gram(const GramMatrix& g, double tol = 1e-10);

/// One Hermitian element per identification outcome plus the inconclusive element.
struct Povm {
  std::vector<Matrix> identify;  ///< E_1..E_N
  Matrix inconclusive;           ///< E_0

  std::size_t outcomes() const { return identify.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(inconclusive.rows()); }
};

/// E_j = p_j |r_j><r_j| / |<r_j|psi_j>|^2 from the reciprocal states r_j, and
/// E_0 = I - sum_j E_j. Zero error holds by construction; E_0 >= 0 does not
/// and must be checked by the caller.
Povm usd_povm(const StateEnsemble& e, std::span<const double> success);
Povm usd_povm(const StateEnsemble& e, double success);

struct PovmReport {
  std::vector<double> min_eigenvalues;  ///< E_1..E_N then E_0
  double completeness_residual = 0.0;   ///< max |sum E - I|
  Eigen::MatrixXd outcome_probabilities;  ///< (j, k) = <psi_k|E_j|psi_k>, rows E_1..E_N
  double max_error = 0.0;                 ///< largest |<psi_k|E_j|psi_k>| over j != k
  std::vector<double> success;            ///< <psi_j|E_j|psi_j>
  double average_success = 0.0;           ///< prior-weighted
  bool psd_ok = false;
  bool complete_ok = false;
  bool zero_error_ok = false;

  bool passed() const { return psd_ok && complete_ok && zero_error_ok; }
};

void to_json(nlohmann::json& j, const PovmReport& r);

/// Structural checks at tolerance tol: min eigenvalue >= -tol, completeness
/// residual <= tol, every off-diagonal outcome probability below tol.
PovmReport verify_povm(const Povm& m, const StateEnsemble& e, double tol = kPsdTolerance);

/// Smallest eigenvalue of E_0 when every state gets success probability p.
double inconclusive_min_eigenvalue(const StateEnsemble& e, double p);

/// Largest p with usd_povm(e, p) feasible (E_0 min eigenvalue >= -1e-10),
/// found by bisection on [0, 1] to within tol.
double max_uniform_success(const StateEnsemble& e, double tol = 1e-8);

}  // namespace usd
