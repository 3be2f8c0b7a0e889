#include "usd/trine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace usd {

namespace {

constexpr double kSqrt3 = std::numbers::sqrt3;

void require_lift(double lambda, const char* what) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw ValidationError(std::string(what) + ": lift parameter must lie in [0, 1]");
  }
}

// Planar trine components (x, y).
std::array<std::array<double, 2>, 3> trine_xy() {
  return {{{0.0, 1.0}, {kSqrt3 / 2.0, -0.5}, {-kSqrt3 / 2.0, -0.5}}};
}

Vector vec(std::initializer_list<Complex> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (const auto& c : values) v(i++) = c;
  return v;
}

}  // namespace

LiftedTrineParams lifted_trine_params(double lambda) {
  require_lift(lambda, "lifted_trine_params");
  const double side = std::sqrt((1.0 - lambda * lambda) / 2.0);
  return {lambda, {lambda, side, side}, p_max_lifted(lambda)};
}

MultiTrineParams multitrine_params(int copies) {
  if (copies < 1) throw ValidationError("multitrine_params: copies must be at least 1");
  return {copies, lift_closed_form(copies), copies == 1 ? 0.0 : p_max_multitrine(copies)};
}

StateEnsemble trine_states() {
  std::vector<PureState> states;
  for (const auto& [x, y] : trine_xy()) states.emplace_back(vec({x, y}));
  return StateEnsemble(std::move(states));
}

StateEnsemble lifted_trine(double lambda) {
  require_lift(lambda, "lifted_trine");
  const double planar = std::sqrt(1.0 - lambda * lambda);
  std::vector<PureState> states;
  for (const auto& [x, y] : trine_xy()) states.push_back(PureState::normalized(vec({planar * x, planar * y, lambda})));
  return StateEnsemble(std::move(states));
}

std::array<PureState, 3> lifted_trine_u_basis() {
  using namespace std::complex_literals;
  const Complex plus = std::polar(1.0 / std::numbers::sqrt2, 5.0 * std::numbers::pi / 6.0);
  const Complex minus = std::polar(1.0 / std::numbers::sqrt2, -5.0 * std::numbers::pi / 6.0);
  return {PureState(vec({0.0, 0.0, 1.0})), PureState::normalized(vec({plus, plus * 1i, 0.0})),
          PureState::normalized(vec({minus, -minus * 1i, 0.0}))};
}

std::array<Complex, 3> extract_u_coefficients(const StateEnsemble& lifted) {
  if (lifted.size() != 3 || lifted.dim() != 3) throw ValidationError("extract_u_coefficients: expected a lifted trine");
  const auto u = lifted_trine_u_basis();
  // j = 3 carries unit phases on every term
  const PureState& t3 = lifted[2];
  return {u[0].overlap(t3), u[1].overlap(t3), u[2].overlap(t3)};
}

TauDoubling tau_doubling(double lambda) {
  require_lift(lambda, "tau_doubling");
  if (lambda == 1.0) throw ValidationError("tau_doubling: lambda = 1 is degenerate");

  // Product index is 2 * a + b with a over (x, y, z) and b over (x, y).
  enum : Eigen::Index { XX = 0, XY = 1, YX = 2, YY = 3, ZX = 4, ZY = 5 };
  const double scale = std::sqrt(2.0 / (1.0 + lambda * lambda));
  const double half_planar = std::sqrt(1.0 - lambda * lambda) / 2.0;

  Vector x = Vector::Zero(6);
  x(ZX) = scale * lambda;
  x(XY) = -scale * half_planar;
  x(YX) = -scale * half_planar;
  Vector y = Vector::Zero(6);
  y(ZY) = scale * lambda;
  y(XX) = -scale * half_planar;
  y(YY) = scale * half_planar;
  Vector z = Vector::Zero(6);
  z(XX) = 1.0 / std::numbers::sqrt2;
  z(YY) = 1.0 / std::numbers::sqrt2;

  const StateEnsemble lifted = lifted_trine(lambda);
  const StateEnsemble planar = trine_states();
  std::vector<PureState> taus;
  for (std::size_t j = 0; j < 3; ++j) taus.push_back(tensor_product(lifted[j], planar[j]));

  TauDoubling out{StateEnsemble(std::move(taus)), PureState(x), PureState(y), PureState(z),
                  std::sqrt((1.0 - lambda * lambda) / 2.0)};

  const std::array<const PureState*, 3> xyz{&out.x, &out.y, &out.z};
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) {
      if (std::abs(xyz[a]->overlap(*xyz[b]) - (a == b ? 1.0 : 0.0)) > 1e-10) {
        throw InvariantViolation("tau_doubling: X, Y, Z not orthonormal");
      }
    }
  }
  const double lift = out.lift;
  const double side = std::sqrt(1.0 - lift * lift);
  // tau_j = L |Z> + sqrt(1 - L^2) (planar trine in the (X, Y) plane)
  const auto xy = trine_xy();
  for (std::size_t j = 0; j < 3; ++j) {
    const Vector expected = lift * z + side * (xy[j][0] * x + xy[j][1] * y);
    if ((out.taus[j].amplitudes() - expected).cwiseAbs().maxCoeff() > 1e-10) {
      throw InvariantViolation("tau_doubling: tau_" + std::to_string(j + 1) + " does not match its lifted form");
    }
  }
  return out;
}

double lift_closed_form(int copies) {
  if (copies < 1) throw ValidationError("lift_closed_form: copies must be at least 1");
  const double alternating = std::pow(-0.5, copies - 1);
  return std::sqrt((1.0 - alternating) / 3.0);
}

double lift_recurrence_step(double previous) {
  require_lift(previous, "lift_recurrence_step");
  return std::sqrt((1.0 - previous * previous) / 2.0);
}

double p_max_lifted(double lambda) {
  require_lift(lambda, "p_max_lifted");
  const double sq = lambda * lambda;
  return 3.0 * std::min(sq, (1.0 - sq) / 2.0);
}

double p_max_multitrine(int copies) {
  if (copies < 2) throw ValidationError("p_max_multitrine: at least two copies are needed");
  const int exponent = copies % 2 == 0 ? copies : copies - 1;
  return 1.0 - std::ldexp(1.0, -exponent);
}

StateEnsemble multitrine_representation(int copies) { return lifted_trine(lift_closed_form(copies)); }

}  // namespace usd
