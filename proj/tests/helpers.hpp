// Shared test fixtures: small hand-built chains and randomized reversible
// instances with controlled conditioning.
#pragma once

#include <vector>

#include "inswap/generator.hpp"
#include "inswap/model.hpp"
#include "inswap/product.hpp"
#include "inswap/rng.hpp"

namespace inswap::testing {

// Two states, unit rates both ways, uniform stationary law.
inline Generator two_state_unit() {
  SparseRates rates(2, 2);
  rates.insert(0, 1) = 1.0;
  rates.insert(1, 0) = 1.0;
  rates.makeCompressed();
  return make_generator(std::move(rates), Eigen::VectorXd::Constant(2, 0.5));
}

// Random connected reversible generator: a path backbone plus random chords,
// symmetric fluxes c(x,y) in [0.5, 2], stationary weights in [0.2, 1.2].
// Rates r(x,y) = c(x,y) / mu(x) satisfy detailed balance exactly.
inline Generator random_reversible(int n, SplitMix64& rng) {
  Eigen::VectorXd mu(n);
  for (int i = 0; i < n; ++i) mu[i] = 0.2 + rng.uniform01();
  mu /= mu.sum();

  std::vector<Eigen::Triplet<double>> trips;
  auto add_edge = [&](int x, int y) {
    const double c = 0.5 + 1.5 * rng.uniform01();
    trips.emplace_back(x, y, c / mu[x]);
    trips.emplace_back(y, x, c / mu[y]);
  };
  for (int i = 0; i + 1 < n; ++i) add_edge(i, i + 1);
  for (int x = 0; x < n; ++x) {
    for (int y = x + 2; y < n; ++y) {
      if (rng.uniform01() < 0.3 / n) add_edge(x, y);
    }
  }
  SparseRates rates(n, n);
  rates.setFromTriplets(trips.begin(), trips.end());
  rates.makeCompressed();
  return make_generator(std::move(rates), std::move(mu));
}

// Strictly interior probability vector with bounded dynamic range.
inline Eigen::VectorXd random_interior_measure(Eigen::Index n,
                                               SplitMix64& rng) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = 0.05 + rng.uniform01();
  return v / v.sum();
}

// Small symmetric-well product chain used across suites.
inline ProductChain desk_product_chain(int n = 6, double alpha = 1.0,
                                       std::vector<double> taus = {0.1, 0.5}) {
  return make_product_chain(Grid{-1.5, 1.5, n}, alpha, std::move(taus));
}

}  // namespace inswap::testing
