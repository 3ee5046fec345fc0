// Empirical-measure rate function for reversible chains, the symmetrizing
// map between product-space measures and association-weighted images, and
// the rate for weighted empirical measures.
#pragma once

#include <Eigen/Dense>

#include "inswap/generator.hpp"
#include "inswap/product.hpp"

namespace inswap {

// Rate function for the empirical measure of a reversible chain:
//   J(nu) = sum_x q(x) theta(x) mu(x) - sum_{x != y} sqrt(theta(x) theta(y))
//           r(x,y) mu(x),  theta = nu/mu.
// Zero entries of nu contribute nothing; J(mu) evaluates to exactly zero.
double rate_J(const Generator& gen, const Eigen::VectorXd& nu);

// Association-weighted image (M nu)(x) = rho(x) sum_sigma nu(x^sigma).
// Maps the symmetrized stationary law to the product stationary law.
Eigen::VectorXd map_M(const ProductChain& chain, const Eigen::VectorXd& nu);

// Association weights of a measure: w[s] = <rho^sigma_s, nu>.
Eigen::VectorXd association_of(const ProductChain& chain,
                               const Eigen::VectorXd& nu);

// The symmetric preimage of gamma under M, nu(x) = gamma(x) / (K! rho(x)).
// Exists only when the likelihood ratio gamma/mu is permutation invariant;
// the discrepancy is reported instead of silently projecting.
struct SymmetricPreimage {
  bool feasible = false;
  double discrepancy = 0.0;  // max relative spread of gamma/mu over orbits
  Eigen::VectorXd nu;
};

SymmetricPreimage symmetric_preimage(const ProductChain& chain,
                                     const Eigen::VectorXd& gamma,
                                     double tol = 1e-9);

// Rate for the weighted empirical measure: evaluates the uncoupled-chain
// rate function at gamma when gamma/mu is permutation invariant, +infinity
// otherwise. Coincides with rate_J at the symmetric preimage.
double rate_I_weighted(const ProductChain& chain, const Eigen::VectorXd& gamma,
                       double tol = 1e-9);

}  // namespace inswap
