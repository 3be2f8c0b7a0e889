#include "usd/symusd.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace usd {

namespace {

std::vector<PureState> standard_basis(std::size_t n) {
  std::vector<PureState> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(PureState::basis(n, k));
  return out;
}

double min_hermitian_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

}  // namespace

SymmetricEnsemble::SymmetricEnsemble(std::vector<Complex> coefficients)
    : SymmetricEnsemble(coefficients, standard_basis(coefficients.size())) {}

SymmetricEnsemble::SymmetricEnsemble(std::vector<Complex> coefficients, std::vector<PureState> basis)
    : coefficients_(std::move(coefficients)), basis_(std::move(basis)) {
  if (coefficients_.empty()) throw ValidationError("SymmetricEnsemble: no coefficients");
  if (basis_.size() != coefficients_.size()) throw ValidationError("SymmetricEnsemble: need one basis state per coefficient");
  double total = 0.0;
  for (const auto& c : coefficients_) {
    if (c == Complex(0.0, 0.0)) throw ValidationError("SymmetricEnsemble: coefficients must be nonzero");
    total += std::norm(c);
  }
  if (std::abs(total - 1.0) > kNormTolerance) throw ValidationError("SymmetricEnsemble: sum |c_k|^2 must equal 1");
  const GramMatrix g = gram(basis_);
  const Matrix residual = g.entries() - Matrix::Identity(g.entries().rows(), g.entries().cols());
  if (residual.cwiseAbs().maxCoeff() > 1e-10) throw ValidationError("SymmetricEnsemble: basis is not orthonormal");
}

StateEnsemble SymmetricEnsemble::states() const {
  const std::size_t n = size();
  std::vector<PureState> out;
  out.reserve(n);
  for (std::size_t j = 1; j <= n; ++j) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(basis_.front().dim()));
    for (std::size_t k = 0; k < n; ++k) {
      // reduce j*k mod N before scaling so the phase is exact at multiples of 2 pi
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / static_cast<double>(n);
      v += coefficients_[k] * std::polar(1.0, angle) * basis_[k].amplitudes();
    }
    out.push_back(PureState::normalized(std::move(v)));
  }
  return StateEnsemble(std::move(out));
}

StateEnsemble symmetric_from_coefficients(std::vector<Complex> c, std::vector<PureState> basis) {
  return SymmetricEnsemble(std::move(c), std::move(basis)).states();
}

StateEnsemble symmetric_from_coefficients(std::vector<Complex> c) { return SymmetricEnsemble(std::move(c)).states(); }

double p_max_symmetric(std::span<const Complex> c) {
  if (c.empty()) throw ValidationError("p_max_symmetric: no coefficients");
  double smallest = std::norm(c.front());
  double total = 0.0;
  for (const auto& ck : c) {
    smallest = std::min(smallest, std::norm(ck));
    total += std::norm(ck);
  }
  if (std::abs(total - 1.0) > kNormTolerance) throw ValidationError("p_max_symmetric: sum |c_k|^2 must equal 1");
  if (!(smallest > 0.0)) throw ValidationError("p_max_symmetric: coefficients must be nonzero");
  return static_cast<double>(c.size()) * smallest;
}

bool is_circulant_gram(const GramMatrix& g, double tol) {
  const std::size_t n = g.size();
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      if (std::abs(g(j, k) - g(0, (k + n - j) % n)) > tol) return false;
    }
  }
  return true;
}

Povm usd_povm(const StateEnsemble& e, std::span<const double> success) {
  if (success.size() != e.size()) throw ValidationError("usd_povm: one success probability per state required");
  for (double p : success) {
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("usd_povm: success probabilities must lie in [0, 1]");
  }
  const auto duals = reciprocal_states(e.states());
  const auto d = static_cast<Eigen::Index>(e.dim());

  Povm m;
  m.inconclusive = Matrix::Identity(d, d);
  for (std::size_t j = 0; j < duals.size(); ++j) {
    const auto& r = duals[j];
    Matrix element = (success[j] / std::norm(r.normalization)) * (r.vector * r.vector.adjoint());
    element = 0.5 * (element + element.adjoint()).eval();
    m.inconclusive -= element;
    m.identify.push_back(std::move(element));
  }
  m.inconclusive = 0.5 * (m.inconclusive + m.inconclusive.adjoint()).eval();
  return m;
}

Povm usd_povm(const StateEnsemble& e, double success) {
  const std::vector<double> p(e.size(), success);
  return usd_povm(e, p);
}

PovmReport verify_povm(const Povm& m, const StateEnsemble& e, double tol) {
  if (m.dim() != e.dim()) throw ValidationError("verify_povm: POVM and ensemble dimensions differ");
  if (m.outcomes() != e.size()) throw ValidationError("verify_povm: POVM needs one identification outcome per state");
  const auto d = static_cast<Eigen::Index>(e.dim());
  const std::size_t n = e.size();

  PovmReport r;
  Matrix total = m.inconclusive;
  for (const auto& el : m.identify) {
    r.min_eigenvalues.push_back(min_hermitian_eigenvalue(el));
    total += el;
  }
  r.min_eigenvalues.push_back(min_hermitian_eigenvalue(m.inconclusive));
  r.completeness_residual = (total - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();

  r.outcome_probabilities = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      const Vector& psi = e[k].amplitudes();
      const double p = psi.dot(m.identify[j] * psi).real();
      r.outcome_probabilities(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = p;
      if (j != k) r.max_error = std::max(r.max_error, std::abs(p));
    }
    r.success.push_back(r.outcome_probabilities(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)));
    r.average_success += e.priors()[j] * r.success.back();
  }

  r.psd_ok = std::all_of(r.min_eigenvalues.begin(), r.min_eigenvalues.end(), [&](double v) { return v >= -tol; });
  r.complete_ok = r.completeness_residual <= tol;
  r.zero_error_ok = r.max_error < tol;
  return r;
}

void to_json(nlohmann::json& j, const PovmReport& r) {
  nlohmann::json probs = nlohmann::json::array();
  for (Eigen::Index row = 0; row < r.outcome_probabilities.rows(); ++row) {
    nlohmann::json line = nlohmann::json::array();
    for (Eigen::Index col = 0; col < r.outcome_probabilities.cols(); ++col) line.push_back(r.outcome_probabilities(row, col));
    probs.push_back(std::move(line));
  }
  j = nlohmann::json{{"min_eigenvalues", r.min_eigenvalues},
                     {"completeness_residual", r.completeness_residual},
                     {"outcome_probabilities", std::move(probs)},
                     {"max_error", r.max_error},
                     {"success", r.success},
                     {"average_success", r.average_success},
                     {"psd_ok", r.psd_ok},
                     {"complete_ok", r.complete_ok},
                     {"zero_error_ok", r.zero_error_ok},
                     {"passed", r.passed()}};
}

double inconclusive_min_eigenvalue(const StateEnsemble& e, double p) {
  return min_hermitian_eigenvalue(usd_povm(e, p).inconclusive);
}

double max_uniform_success(const StateEnsemble& e, double tol) {
  if (!(tol > 0.0)) throw ValidationError("max_uniform_success: tolerance must be positive");
  for (double prior : e.priors()) {
    if (std::abs(prior - 1.0 / static_cast<double>(e.size())) > kNormTolerance) {
      throw ValidationError("max_uniform_success: priors must be uniform");
    }
  }
  if (!is_linearly_independent(e.states())) {
    throw LinearDependenceError("max_uniform_success: ensemble is linearly dependent");
  }
  const auto feasible = [&](double p) { return inconclusive_min_eigenvalue(e, p) >= -kPsdTolerance; };

  if (feasible(1.0)) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace usd
