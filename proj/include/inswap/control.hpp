// Ergodic and finite-horizon optimal control of reversible chains with
// relative-entropy running cost: stationary Bellman equation, optimally
// controlled rates, and the Monte Carlo representation check.
#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "inswap/generator.hpp"

namespace inswap {

// Solution of the stationary Bellman equation
//   0 = sum_z r(y,z) (1 - e^{-(W(z)-W(y))}) - gamma + h(y),
// with W normalized so that sum_x mu(x) e^{-2W(x)} = 1. nu = mu e^{-2W} is
// the optimally controlled stationary law and attains
//   gamma = min_nu { J(nu) + <h, nu> }.
struct ErgodicSolution {
  double gamma = 0.0;
  Eigen::VectorXd W;
  Eigen::VectorXd nu;
  double bellman_residual = 0.0;
};

// Solves the equation through the equivalent symmetric eigenproblem in
// V = e^{-W} (smallest eigenvalue, positive eigenvector), refined by
// Rayleigh-quotient iteration. Requires a connected, reversible generator.
ErgodicSolution solve_ergodic(const Generator& gen, const Eigen::VectorXd& h);

// Optimally controlled rates u(y,z) = r(y,z) e^{-(W(z)-W(y))}; the returned
// generator carries nu as its stationary law.
Generator controlled_rates(const Generator& gen, const ErgodicSolution& sol);

// Max-norm residual of the first-order condition for theta = nu/mu:
//   theta(x) = (sum_y r(x,y) sqrt(theta(y)))^2 / (q(x) + h(x) - gamma)^2.
double fixed_point_residual(const Generator& gen, const Eigen::VectorXd& h,
                            const ErgodicSolution& sol);

// Backward-in-time value function W^T(t,x) = -log E_x[exp(-int_t^T h)] on a
// uniform grid; row k holds time t_k = k T / steps, the final row is zero.
struct FiniteHorizonSolution {
  Eigen::VectorXd times;
  Eigen::MatrixXd W;

  double at(double t, Eigen::Index x) const;  // nearest grid node
};

// Integrates the linear backward equation with an exact uniformized
// propagator per step; V stays positive for any step count.
FiniteHorizonSolution solve_finite_horizon(const Generator& gen,
                                           const Eigen::VectorXd& h, double T,
                                           int steps);

// Monte Carlo check of -log E[e^{-int_0^T h}] against W^T(0, y0).
struct RepresentationCheck {
  double w_ode = 0.0;
  double w_mc = 0.0;
  double se_log = 0.0;  // standard error of w_mc on the log scale
  int replicas = 0;
};

RepresentationCheck verify_representation(const Generator& gen,
                                          const Eigen::VectorXd& h, double T,
                                          std::int64_t y0, int replicas,
                                          std::uint64_t seed);

}  // namespace inswap
