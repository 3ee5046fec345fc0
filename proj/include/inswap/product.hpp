// K tempered copies of a landscape chain on the product state space,
// with the swap-coupled and infinite-swapping-limit generators.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "inswap/generator.hpp"
#include "inswap/model.hpp"

namespace inswap {

// Product chain over S^K for one potential V on a shared grid and K
// temperatures. States are flattened row-major: component 0 varies slowest.
// Permutations of {0..K-1} are enumerated lexicographically (identity
// first); sigma acts on states by (x^sigma)[sigma(j)] = x[j], i.e. the
// component in slot j moves to slot sigma(j).
struct ProductChain {
  Grid grid;
  Eigen::VectorXd V;
  std::vector<double> taus;
  std::vector<Eigen::VectorXd> marginals;   // Gibbs law per temperature
  std::vector<Generator> components;        // 1-D Metropolis chain per temperature
  int K = 0;
  int N = 0;
  std::int64_t states = 0;                  // N^K
  std::vector<std::vector<int>> perms;      // all K! permutations
  std::vector<std::vector<int>> inv_perms;

  std::int64_t flat(const std::vector<int>& tuple) const;
  void unflat(std::int64_t f, std::vector<int>& tuple) const;
  std::vector<int> unflat(std::int64_t f) const;

  // Flat index of x^sigma for permutation index s.
  std::int64_t permuted_flat(std::int64_t f, int s) const;

  // rho weights over all K! permutations at state x:
  // rho_s(x) = mu(x^sigma_s) / sum_s' mu(x^sigma_s'), computed from energies
  // so the marginal normalizers cancel.
  Eigen::VectorXd rho_weights(std::int64_t f) const;

  // Weight of the identity permutation, mu(x) / sum_sigma mu(x^sigma).
  double rho(std::int64_t f) const;

  // Metropolis acceptance for swapping the two components (K = 2 only):
  // b(x1,x2) = min(1, mu(x2,x1)/mu(x1,x2)).
  double swap_acceptance(std::int64_t f) const;

  Eigen::VectorXd product_measure() const;      // mu = ⊗_k mu_k
  Eigen::VectorXd symmetrized_measure() const;  // mubar = avg over permutations

  // U(x) = -log sum_sigma exp(-sum_k V(x^sigma_k)/tau_k).
  Eigen::VectorXd implied_potential() const;

  // Independent tempered copies; stationary law is the product measure.
  Generator uncoupled() const;

  // Swap-coupled generator at swap intensity a (K = 2 only): uncoupled moves
  // plus jumps (x1,x2) -> (x2,x1) at rate a * b(x1,x2). Stationary law is
  // still the product measure for every a >= 0.
  Generator swap_coupled(double a) const;

  // Infinite-swapping limit: single-component moves at rho-mixed rates,
  //   rate(x -> x with x_i := y_i) = sum_sigma rho(x^sigma) * r_{sigma(i)}(x_i, y_i).
  // Reversible with respect to the symmetrized measure.
  Generator ins() const;
};

ProductChain make_product_chain(const Grid& grid, const Eigen::VectorXd& V,
                                std::vector<double> taus);
ProductChain make_product_chain(const Grid& grid, double alpha,
                                std::vector<double> taus);

// Pushforward of a measure by the permutation action:
// out(x) = nu(x^sigma_s).
Eigen::VectorXd permute_measure(const ProductChain& chain,
                                const Eigen::VectorXd& nu, int s);

}  // namespace inswap
