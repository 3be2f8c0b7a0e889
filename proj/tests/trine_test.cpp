#include "usd/trine.hpp"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"
#include "test_util.hpp"
#include "usd/symusd.hpp"

using namespace usd;

namespace {

double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST(trine_states, overlaps_rank_and_norm) {
  const StateEnsemble t = trine_states();
  ASSERT_EQ(t.size(), 3u);
  ASSERT_EQ(t.dim(), 2u);
  const auto oracle = oracle::trine_oracle();
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_NEAR(t[j].amplitudes().norm(), 1.0, 1e-15);
    EXPECT_NEAR(t[j][0].real(), oracle[j](0), 1e-15);
    EXPECT_NEAR(t[j][1].real(), oracle[j](1), 1e-15);
    for (std::size_t k = j + 1; k < 3; ++k) EXPECT_NEAR(t[j].overlap(t[k]).real(), -0.5, 1e-15);
    EXPECT_DOUBLE_EQ(t.priors()[j], 1.0 / 3.0);
  }
  EXPECT_EQ(li_rank(t.states()), 2u);
}

TEST(lifted_trine, special_lifts) {
  const StateEnsemble flat = lifted_trine(0.0);
  EXPECT_EQ(flat.dim(), 3u);
  EXPECT_EQ(li_rank(flat.states()), 2u);

  const Matrix g = gram(lifted_trine(kOrthogonalLift)).entries();
  EXPECT_LT(max_abs_diff(g, Matrix::Identity(3, 3)), 1e-15);

  const StateEnsemble top = lifted_trine(1.0);
  EXPECT_EQ(li_rank(top.states()), 1u);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(top[j].amplitudes(), PureState::basis(3, 2).amplitudes());
}

TEST(lifted_trine, independent_strictly_inside_the_interval) {
  for (int i = 1; i < 50; ++i) {
    EXPECT_TRUE(is_linearly_independent(lifted_trine(i / 50.0).states())) << "lambda=" << i / 50.0;
  }
}

TEST(lifted_trine, rejects_out_of_range) {
  EXPECT_THROW(lifted_trine(-0.1), ValidationError);
  EXPECT_THROW(lifted_trine(1.01), ValidationError);
  EXPECT_THROW(lifted_trine(std::nan("")), ValidationError);
}

TEST(lifted_trine, u_basis_is_orthonormal_and_reproduces_coefficients) {
  const auto u = lifted_trine_u_basis();
  const Matrix g = gram(std::vector<PureState>(u.begin(), u.end())).entries();
  EXPECT_LT(max_abs_diff(g, Matrix::Identity(3, 3)), 1e-15);

  for (double lambda : {0.0, 0.3, kOrthogonalLift, 0.8}) {
    const auto params = lifted_trine_params(lambda);
    const auto c = extract_u_coefficients(lifted_trine(lambda));
    for (std::size_t k = 0; k < 3; ++k) {
      EXPECT_NEAR(c[k].real(), params.coefficients[k], 1e-15) << "lambda=" << lambda << " k=" << k;
      EXPECT_NEAR(c[k].imag(), 0.0, 1e-15);
    }
    // every state, not only T_3, carries the symmetric phases
    const StateEnsemble e = lifted_trine(lambda);
    for (std::size_t j = 1; j <= 3; ++j) {
      for (std::size_t k = 0; k < 3; ++k) {
        const Complex expected = params.coefficients[k] * std::polar(1.0, 2.0 * std::numbers::pi * j * k / 3.0);
        EXPECT_NEAR(std::abs(u[k].overlap(e[j - 1]) - expected), 0.0, 1e-14);
      }
    }
  }
}

TEST(lifted_trine_params, invariants) {
  for (int i = 0; i <= 20; ++i) {
    const double lambda = i / 20.0;
    const auto p = lifted_trine_params(lambda);
    const double total = p.coefficients[0] * p.coefficients[0] + p.coefficients[1] * p.coefficients[1] +
                         p.coefficients[2] * p.coefficients[2];
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_EQ(p.coefficients[1], p.coefficients[2]);
    EXPECT_EQ(p.coefficients[0], lambda);
  }
  EXPECT_NEAR(lifted_trine_params(kOrthogonalLift).p_max, 1.0, 1e-15);
}

TEST(tau_doubling, flat_lift_gives_two_trine_copies) {
  const TauDoubling d = tau_doubling(0.0);
  EXPECT_NEAR(d.lift, 1.0 / std::numbers::sqrt2, 1e-15);
  const StateEnsemble planar = trine_states();
  // T_j(0) (x) t_j with T_j(0) = t_j embedded: compare on the (x, y) (x) (x, y) block
  for (std::size_t j = 0; j < 3; ++j) {
    const Vector two = tensor_power(planar[j], 2).amplitudes();
    const Vector& tau = d.taus[j].amplitudes();
    EXPECT_LT((tau.head(4) - two).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT(tau.tail(2).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(tau_doubling, lift_values) {
  EXPECT_NEAR(tau_doubling(1.0 / std::numbers::sqrt2).lift, 0.5, 1e-15);
  EXPECT_THROW(tau_doubling(1.0), ValidationError);
}

TEST(tau_doubling, gram_matches_lifted_trine_of_new_lift) {
  for (int i = 0; i < 20; ++i) {
    const double lambda = i / 20.0;
    const TauDoubling d = tau_doubling(lambda);
    EXPECT_LT(max_abs_diff(gram(d.taus).entries(), gram(lifted_trine(d.lift)).entries()), 1e-12) << "lambda=" << lambda;
  }
}

TEST(tau_doubling, expansion_in_xyz_matches_lifted_form) {
  // Independent re-check of the coefficients the constructor verifies internally.
  for (int i = 0; i < 20; ++i) {
    const double lambda = i / 20.0;
    const TauDoubling d = tau_doubling(lambda);
    const double lift = d.lift;
    const double side = std::sqrt(1.0 - lift * lift);
    const std::array<std::array<double, 3>, 3> expected{{
        {0.0, side, lift},
        {side * std::sqrt(3.0) / 2.0, -side / 2.0, lift},
        {-side * std::sqrt(3.0) / 2.0, -side / 2.0, lift},
    }};
    for (std::size_t j = 0; j < 3; ++j) {
      const Complex cx = d.x.overlap(d.taus[j]);
      const Complex cy = d.y.overlap(d.taus[j]);
      const Complex cz = d.z.overlap(d.taus[j]);
      EXPECT_NEAR(std::abs(cx - expected[j][0]), 0.0, 1e-10);
      EXPECT_NEAR(std::abs(cy - expected[j][1]), 0.0, 1e-10);
      EXPECT_NEAR(std::abs(cz - expected[j][2]), 0.0, 1e-10);
      EXPECT_NEAR(std::norm(cx) + std::norm(cy) + std::norm(cz), 1.0, 1e-12);
    }
  }
}

TEST(lift, closed_form_values) {
  EXPECT_EQ(lift_closed_form(1), 0.0);
  EXPECT_NEAR(lift_closed_form(2), 1.0 / std::numbers::sqrt2, 1e-15);
  // four recurrence steps from zero, written out by hand
  double l = 0.0;
  for (int i = 0; i < 4; ++i) l = std::sqrt((1.0 - l * l) / 2.0);
  EXPECT_NEAR(l, std::sqrt(5.0 / 16.0), 1e-15);
  EXPECT_NEAR(lift_closed_form(5), std::sqrt(5.0 / 16.0), 1e-15);
  EXPECT_THROW(lift_closed_form(0), ValidationError);
}

TEST(lift, recurrence_values) {
  EXPECT_NEAR(lift_recurrence_step(0.0), 1.0 / std::numbers::sqrt2, 1e-15);
  EXPECT_NEAR(lift_recurrence_step(kOrthogonalLift), kOrthogonalLift, 1e-15);
  EXPECT_EQ(lift_recurrence_step(1.0), 0.0);
  EXPECT_THROW(lift_recurrence_step(1.5), ValidationError);
}

TEST(lift, recurrence_matches_closed_form_and_converges) {
  double l = 0.0;
  for (int c = 1; c <= 30; ++c) {
    EXPECT_NEAR(l, lift_closed_form(c), 1e-12) << "C=" << c;
    if (c < 30) l = lift_recurrence_step(l);
  }
  EXPECT_LT(std::abs(lift_closed_form(30) - kOrthogonalLift), 1e-8);
}

TEST(p_max_lifted, curve_values) {
  EXPECT_EQ(p_max_lifted(0.0), 0.0);
  EXPECT_EQ(p_max_lifted(1.0), 0.0);
  EXPECT_NEAR(p_max_lifted(kOrthogonalLift), 1.0, 1e-15);
  EXPECT_NEAR(p_max_lifted(0.4), 0.48, 1e-15);
  EXPECT_NEAR(p_max_lifted(0.9), 0.285, 1e-15);
  EXPECT_NEAR(max_uniform_success(lifted_trine(0.4)), 0.48, 1e-6);
}

TEST(p_max_lifted, piecewise_branches) {
  for (int i = 0; i <= 100; ++i) {
    const double lambda = i / 100.0;
    const double expected = lambda <= kOrthogonalLift ? 3.0 * lambda * lambda : 1.5 * (1.0 - lambda * lambda);
    EXPECT_NEAR(p_max_lifted(lambda), expected, 1e-15);
  }
}

TEST(p_max_multitrine, values) {
  EXPECT_DOUBLE_EQ(p_max_multitrine(2), 0.75);
  EXPECT_DOUBLE_EQ(p_max_multitrine(3), 0.75);
  EXPECT_DOUBLE_EQ(p_max_multitrine(4), 15.0 / 16.0);
  EXPECT_DOUBLE_EQ(p_max_multitrine(4), 1.0 - 0.25 * 0.25);
  EXPECT_THROW(p_max_multitrine(1), ValidationError);
  EXPECT_EQ(multitrine_params(1).p_max, 0.0);
}

TEST(p_max_multitrine, chain_identity) {
  for (int c = 2; c <= 30; ++c) {
    const double l = lift_closed_form(c);
    const double next = lift_closed_form(c + 1);
    const double a = 3.0 * std::min(l * l, (1.0 - l * l) / 2.0);
    const double b = 3.0 * std::min(l * l, next * next);
    EXPECT_NEAR(a, p_max_multitrine(c), 1e-12) << "C=" << c;
    EXPECT_NEAR(b, p_max_multitrine(c), 1e-12) << "C=" << c;
    EXPECT_NEAR(p_max_lifted(l), p_max_multitrine(c), 1e-12) << "C=" << c;
  }
}

TEST(p_max_multitrine, plateau_after_even_copies) {
  for (int c = 2; c <= 28; c += 2) {
    EXPECT_EQ(p_max_multitrine(c), p_max_multitrine(c + 1)) << "C=" << c;
    EXPECT_LT(p_max_multitrine(c + 1), p_max_multitrine(c + 2)) << "C=" << c + 1;
  }
}

TEST(multitrine_representation, gram_matches_true_tensor_powers) {
  const StateEnsemble t = trine_states();
  for (int c = 1; c <= 8; ++c) {
    const Matrix full = gram(tensor_power(t, c)).entries();
    const Matrix rep = gram(multitrine_representation(c)).entries();
    EXPECT_LT(max_abs_diff(full, rep), 1e-10) << "C=" << c;
    EXPECT_NEAR(rep(0, 1).real(), std::pow(-0.5, c), 1e-12);
  }
}

TEST(multitrine_representation, small_cases) {
  EXPECT_NEAR(gram(multitrine_representation(1))(0, 1).real(), -0.5, 1e-15);
  EXPECT_NEAR(gram(multitrine_representation(2))(0, 1).real(), 0.25, 1e-15);
  // lambda = 1/2: lambda^2 - (1 - lambda^2)/2 = -1/8
  EXPECT_NEAR(lift_closed_form(3), 0.5, 1e-15);
  EXPECT_NEAR(gram(multitrine_representation(3))(0, 1).real(), -0.125, 1e-15);
}
