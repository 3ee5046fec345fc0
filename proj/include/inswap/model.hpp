// One-dimensional energy landscapes discretized to birth-death chains with
// Metropolis jump rates and Gibbs stationary laws.
#pragma once

#include <Eigen/Dense>

#include "inswap/generator.hpp"

namespace inswap {

// Equispaced grid on [lo, hi] with n >= 2 points, nearest-neighbor moves.
struct Grid {
  double lo = -1.5;
  double hi = 1.5;
  int n = 12;

  double spacing() const { return (hi - lo) / (n - 1); }
  Eigen::VectorXd points() const;
};

// Quartic double well with minima at x = -1 (depth 0, all alpha) and
// x = alpha (depth varying with alpha), barrier of height 1 at the origin.
// alpha = 1 is the symmetric well.
double double_well_potential(double x, double alpha);
Eigen::VectorXd double_well_potential(const Eigen::VectorXd& x, double alpha);

// Gibbs law mu(x) ∝ exp(-V(x)/tau). V is shifted by its minimum before
// exponentiation, so small tau stays well scaled.
Eigen::VectorXd gibbs_measure(const Eigen::VectorXd& V, double tau);

// Metropolis rates on the path graph: r(x,y) = exp(-max(V(y)-V(x),0)/tau)
// for |x-y| adjacent, zero otherwise. Reversible with respect to the Gibbs
// law by construction.
Generator metropolis_generator(const Eigen::VectorXd& V, double tau);

// A single-temperature chain bundles the landscape with its Gibbs law.
struct SingleTempChain {
  Grid grid;
  Eigen::VectorXd V;
  double tau = 1.0;
  Eigen::VectorXd mu;
  Generator gen;
};

SingleTempChain make_chain(const Grid& grid, const Eigen::VectorXd& V,
                           double tau);
SingleTempChain make_chain(const Grid& grid, double alpha, double tau);

// Probability mass on grid points with x >= lo (default: the right well;
// the threshold itself is counted when it is a grid point).
double mass_right(const Grid& grid, const Eigen::VectorXd& probs,
                  double lo = 0.0);

}  // namespace inswap
