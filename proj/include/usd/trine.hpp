#pragma once

// Trine and lifted trine states, the doubling construction that shows
// C-copy trines are again lifted trines, and their optimal unambiguous
// discrimination probabilities.
//
// Basis conventions: qubit |x> = e_0, |y> = e_1; the lifted space adds |z> = e_2.

#include <array>
#include <cmath>

#include "usd/corelin.hpp"

namespace usd {

/// Lift parameter at which the three lifted trines are mutually orthogonal.
inline const double kOrthogonalLift = 1.0 / std::sqrt(3.0);

struct LiftedTrineParams {
  double lambda;
  std::array<double, 3> coefficients;  ///< (c_0, c_1, c_2) in the u basis
  double p_max;
};

/// Throws ValidationError unless lambda is in [0, 1].
LiftedTrineParams lifted_trine_params(double lambda);

struct MultiTrineParams {
  int copies;
  double lift;   ///< L_C
  double p_max;  ///< 0 for a single copy
};

MultiTrineParams multitrine_params(int copies);

/// The coplanar trine t_1, t_2, t_3 as qubit states, uniform priors.
StateEnsemble trine_states();

/// T_j(lambda) = lambda |z> + sqrt(1 - lambda^2) |t_j> in dimension 3.
StateEnsemble lifted_trine(double lambda);

/// Orthonormal u_0, u_1, u_2 (with the e^{+-5 pi i / 6} phase factors) in which
/// every lifted trine has the symmetric form sum_k c_k e^{2 pi i j k / 3} |u_k>.
std::array<PureState, 3> lifted_trine_u_basis();

/// <u_k|T_3(lambda)>, which reproduces (c_0, c_1, c_2) literally.
std::array<Complex, 3> extract_u_coefficients(const StateEnsemble& lifted);

struct TauDoubling {
  StateEnsemble taus;  ///< T_j(lambda) (x) t_j, dimension 6
  PureState x;         ///< |X>
  PureState y;         ///< |Y>
  PureState z;         ///< |Z>
  double lift;         ///< L = sqrt((1 - lambda^2) / 2)
};

/// Builds tau_j and the orthonormal X, Y, Z in which tau_j is a lifted trine
/// with lift L. Verifies orthonormality and the expansion of every tau_j
/// within 1e-10 (InvariantViolation otherwise). lambda = 1 is rejected.
TauDoubling tau_doubling(double lambda);

/// L_C = sqrt((1 - (-1/2)^(C-1)) / 3).
double lift_closed_form(int copies);

/// sqrt((1 - L^2) / 2).
double lift_recurrence_step(double previous);

/// 3 min(lambda^2, (1 - lambda^2) / 2).
double p_max_lifted(double lambda);

/// 1 - 2^-C for even C, 1 - 2^-(C-1) for odd C. Throws for C < 2.
double p_max_multitrine(int copies);

/// lifted_trine(L_C): a dimension-3 ensemble with the same Gram matrix as {t_j^{(x)C}}.
StateEnsemble multitrine_representation(int copies);

}  // namespace usd
