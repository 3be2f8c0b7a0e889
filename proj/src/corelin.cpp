#include "usd/corelin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace usd {

namespace {

void require_common_dim(std::span<const PureState> states, const char* what) {
  if (states.empty()) throw ValidationError(std::string(what) + ": empty state list");
  for (const auto& s : states) {
    if (s.dim() != states.front().dim()) {
      throw ValidationError(std::string(what) + ": states differ in dimension");
    }
  }
}

Matrix stack(std::span<const PureState> states) {
  Matrix m(static_cast<Eigen::Index>(states.front().dim()), static_cast<Eigen::Index>(states.size()));
  for (std::size_t k = 0; k < states.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = states[k].amplitudes();
  return m;
}

}  // namespace

PureState::PureState(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw ValidationError("PureState: dimension must be at least 1");
  const double norm = amplitudes_.norm();
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > kNormTolerance) {
    throw ValidationError("PureState: amplitudes not normalized (norm " + std::to_string(norm) + ")");
  }
}

PureState PureState::normalized(Vector v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw ValidationError("PureState: cannot normalize zero vector");
  return PureState(v / norm);
}

PureState PureState::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw ValidationError("PureState::basis: index out of range");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(std::move(v));
}

Complex PureState::overlap(const PureState& other) const {
  if (other.dim() != dim()) throw ValidationError("overlap: dimension mismatch");
  return amplitudes_.dot(other.amplitudes_);  // Eigen's dot conjugates the left operand
}

StateEnsemble::StateEnsemble(std::vector<PureState> states)
    : StateEnsemble(states, std::vector<double>(states.size(), states.empty() ? 0.0 : 1.0 / states.size())) {}

StateEnsemble::StateEnsemble(std::vector<PureState> states, std::vector<double> priors)
    : states_(std::move(states)), priors_(std::move(priors)) {
  require_common_dim(states_, "StateEnsemble");
  if (priors_.size() != states_.size()) throw ValidationError("StateEnsemble: one prior per state required");
  double total = 0.0;
  for (double p : priors_) {
    if (!(p >= 0.0)) throw ValidationError("StateEnsemble: priors must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > kNormTolerance) throw ValidationError("StateEnsemble: priors must sum to 1");
}

bool StateEnsemble::is_distinct(double margin) const {
  for (std::size_t j = 0; j < size(); ++j) {
    for (std::size_t k = j + 1; k < size(); ++k) {
      const double mag = std::abs(states_[j].overlap(states_[k]));
      if (margin > 0.0 ? mag > 1.0 - margin : mag >= 1.0) return false;
    }
  }
  return true;
}

Matrix StateEnsemble::columns() const { return stack(states_); }

GramMatrix::GramMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) throw ValidationError("GramMatrix: must be square");
}

Eigen::VectorXd GramMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(entries_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

PureState tensor_product(const PureState& a, const PureState& b) {
  if (a.dim() > kMaxTensorEntries / b.dim()) throw ValidationError("tensor_product: result exceeds tensor cap");
  const auto db = static_cast<Eigen::Index>(b.dim());
  Vector out(static_cast<Eigen::Index>(a.dim()) * db);
  for (Eigen::Index i = 0; i < a.amplitudes().size(); ++i) {
    out.segment(i * db, db) = a.amplitudes()(i) * b.amplitudes();
  }
  return PureState::normalized(std::move(out));
}

PureState tensor_power(const PureState& s, int copies) {
  if (copies < 1) throw ValidationError("tensor_power: copies must be at least 1");
  std::size_t entries = 1;
  for (int c = 0; c < copies; ++c) {
    if (entries > kMaxTensorEntries / s.dim()) {
      throw ValidationError("tensor_power: dim^C exceeds 2^24 amplitudes");
    }
    entries *= s.dim();
  }
  PureState out = s;
  for (int c = 1; c < copies; ++c) out = tensor_product(out, s);
  return out;
}

StateEnsemble tensor_power(const StateEnsemble& e, int copies) {
  std::vector<PureState> powered;
  powered.reserve(e.size());
  for (const auto& s : e.states()) powered.push_back(tensor_power(s, copies));
  return StateEnsemble(std::move(powered), e.priors());
}

GramMatrix gram(std::span<const PureState> states) {
  require_common_dim(states, "gram");
  const Matrix m = stack(states);
  Matrix g = m.adjoint() * m;
  // exact Hermitian symmetry and unit diagonal
  for (Eigen::Index j = 0; j < g.rows(); ++j) {
    g(j, j) = 1.0;
    for (Eigen::Index k = j + 1; k < g.cols(); ++k) g(k, j) = std::conj(g(j, k));
  }
  return GramMatrix(std::move(g));
}

GramMatrix gram(const StateEnsemble& e) { return gram(std::span<const PureState>(e.states())); }

std::size_t li_rank(std::span<const PureState> states, double tol) {
  if (!(tol > 0.0)) throw ValidationError("li_rank: tolerance must be positive");
  require_common_dim(states, "li_rank");
  Eigen::JacobiSVD<Matrix> svd(stack(states));
  const auto& sv = svd.singularValues();
  const double cutoff = tol * sv(0);
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++rank;
  }
  return rank;
}

bool is_linearly_independent(std::span<const PureState> states, double tol) {
  return li_rank(states, tol) == states.size();
}

std::size_t gram_rank(const GramMatrix& g, double tol) {
  if (!(tol > 0.0)) throw ValidationError("gram_rank: tolerance must be positive");
  const Eigen::VectorXd ev = g.eigenvalues();
  const double cutoff = tol * ev(ev.size() - 1);
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > cutoff) ++rank;
  }
  return rank;
}

std::uint64_t sym_dim(std::uint64_t copies, std::uint64_t dim) {
  if (copies < 1 || dim < 1) throw ValidationError("sym_dim: copies and dim must be at least 1");
  // binomial(copies + dim - 1, k) with k the smaller of copies and dim - 1;
  // each partial product is itself a binomial coefficient, so division is exact.
  if (copies > std::numeric_limits<std::uint64_t>::max() - (dim - 1)) {
    throw std::overflow_error("sym_dim: copies + dim - 1 exceeds 64 bits");
  }
  const std::uint64_t k = std::min(copies, dim - 1);
  const std::uint64_t top = copies + dim - 1 - k;
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    const std::uint64_t factor = top + i;
    const std::uint64_t g = std::gcd(result, i);
    const std::uint64_t reduced = result / g;
    const std::uint64_t divisor = i / g;  // divides factor exactly
    std::uint64_t next = 0;
    if (__builtin_mul_overflow(reduced, factor / divisor, &next)) {
      throw std::overflow_error("sym_dim: binomial coefficient exceeds 64 bits");
    }
    result = next;
  }
  return result;
}

std::vector<ReciprocalState> reciprocal_states(std::span<const PureState> states, double tol) {
  if (!is_linearly_independent(states, tol)) {
    throw LinearDependenceError("reciprocal_states: input states are linearly dependent");
  }
  const GramMatrix g = gram(states);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(g.entries());
  const Eigen::VectorXd& ev = solver.eigenvalues();
  if (!(ev(0) > tol * ev(ev.size() - 1))) {
    throw LinearDependenceError("reciprocal_states: Gram matrix singular beyond tolerance");
  }
  const Matrix g_inv = solver.eigenvectors() * ev.cwiseInverse().asDiagonal() * solver.eigenvectors().adjoint();
  // Columns of Psi G^{-1} lie in span{psi} and satisfy (Psi G^{-1})^dagger Psi = I.
  const Matrix dual = stack(states) * g_inv;

  std::vector<ReciprocalState> out;
  out.reserve(states.size());
  for (Eigen::Index k = 0; k < dual.cols(); ++k) {
    const double norm = dual.col(k).norm();
    out.push_back({dual.col(k) / norm, Complex(1.0 / norm, 0.0)});
  }
  return out;
}

PureState haar_random_state(std::size_t dim, Rng& rng) {
  if (dim < 1) throw ValidationError("haar_random_state: dim must be at least 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  return PureState::normalized(std::move(v));
}

void to_json(nlohmann::json& j, const PureState& s) {
  nlohmann::json amps = nlohmann::json::array();
  for (Eigen::Index i = 0; i < s.amplitudes().size(); ++i) {
    amps.push_back({s.amplitudes()(i).real(), s.amplitudes()(i).imag()});
  }
  j = nlohmann::json{{"dim", s.dim()}, {"amplitudes", std::move(amps)}};
}

PureState state_from_json(const nlohmann::json& j) {
  const auto dim = j.at("dim").get<std::size_t>();
  const auto& amps = j.at("amplitudes");
  if (!amps.is_array() || amps.size() != dim) throw ValidationError("state JSON: amplitude count does not match dim");
  Vector v(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    const auto& a = amps.at(i);
    if (!a.is_array() || a.size() != 2) throw ValidationError("state JSON: amplitudes must be [re, im] pairs");
    v(static_cast<Eigen::Index>(i)) = Complex(a.at(0).get<double>(), a.at(1).get<double>());
  }
  return PureState(std::move(v));
}

}  // namespace usd
