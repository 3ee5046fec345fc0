// Rate minimization under a linear statistic constraint via Lagrangian
// scalarization: bracketing bisection on the multiplier around the ergodic
// control solver, plus the asymmetry/constraint sweep for the rate tables.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "inswap/generator.hpp"
#include "inswap/model.hpp"
#include "inswap/product.hpp"

namespace inswap {

struct ConstraintOptions {
  double tol = 1e-6;     // accepted |<g,nu> - target|
  int max_iter = 200;    // bisection iterations after bracketing
  double lambda0 = 1.0;  // first bracket probe
};

// Minimizer of J(nu) subject to <g, nu> = target. rate is J(nu*), reported
// separately from the scalarized objective gamma = J + lambda <g, nu>.
struct ConstrainedResult {
  double lambda = 0.0;
  double rate = 0.0;
  double achieved = 0.0;
  double gamma = 0.0;
  Eigen::VectorXd nu;
  Eigen::VectorXd W;
  double bellman_residual = 0.0;
  Eigen::VectorXd image;   // association-weighted image M(nu*): product chains
  double image_gap = 0.0;  // tv(image, product stationary law)
};

// Core solver on an arbitrary reversible generator. The map
// lambda -> <g, nu_lambda> is nonincreasing; this is asserted on every
// evaluation and a violation aborts with a diagnostic.
ConstrainedResult min_rate_with_constraint(const Generator& gen,
                                           const Eigen::VectorXd& g,
                                           double target,
                                           const ConstraintOptions& opts = {});

// Pins the association weight of the identity permutation:
// <rho, nu> = w1. Uniform targets are feasible at the unconstrained optimum.
ConstrainedResult min_rate_given_association(const ProductChain& chain,
                                             double w1,
                                             const ConstraintOptions& opts = {});

// Linear field whose pairing <g, nu> equals the mass the image M(nu) puts on
// the half-space {x >= region_lo} in the first coordinate:
// g(x) = rho(x) 1{x_1 >= lo} + rho(x^R) 1{x_2 >= lo}. K = 2 chains.
Eigen::VectorXd mass_constraint_field(const ProductChain& chain,
                                      double region_lo = 0.0);

// Pins <g, nu> = target for the field above. K = 2 chains.
ConstrainedResult min_rate_given_mass(const ProductChain& chain, double target,
                                      const ConstraintOptions& opts = {},
                                      double region_lo = 0.0);

// Single-temperature variant: nu([region_lo, inf)) = target.
ConstrainedResult min_rate_given_mass_single(const SingleTempChain& chain,
                                             double target,
                                             const ConstraintOptions& opts = {},
                                             double region_lo = 0.0);

struct TableRequest {
  Grid grid;
  std::vector<double> taus{0.1, 0.5};
  std::vector<double> alphas{1.0, 0.97, 0.95, 0.90, 0.85};
  std::vector<double> deltas{0.05, 0.10, 0.15, 0.20};
  ConstraintOptions opts;
  double region_lo = 0.0;
  int jobs = 1;
};

// kappa per asymmetry, the constrained rate over the (alpha, delta) grid,
// and rates normalized to the first (reference) asymmetry column.
struct TableData {
  std::vector<double> alphas, deltas, kappa;
  Eigen::MatrixXd rate;        // deltas.size() x alphas.size()
  Eigen::MatrixXd normalized;  // same shape; column of alphas[0] is 1
};

TableData table_experiments(const TableRequest& req);

}  // namespace inswap
