#include "inswap/product.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace inswap {

namespace {

constexpr std::int64_t kMaxStates = 1'000'000;

std::vector<std::vector<int>> all_permutations(int K) {
  std::vector<int> p(static_cast<std::size_t>(K));
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace

std::int64_t ProductChain::flat(const std::vector<int>& tuple) const {
  std::int64_t f = 0;
  for (int k = 0; k < K; ++k) f = f * N + tuple[static_cast<std::size_t>(k)];
  return f;
}

void ProductChain::unflat(std::int64_t f, std::vector<int>& tuple) const {
  tuple.resize(static_cast<std::size_t>(K));
  for (int k = K - 1; k >= 0; --k) {
    tuple[static_cast<std::size_t>(k)] = static_cast<int>(f % N);
    f /= N;
  }
}

std::vector<int> ProductChain::unflat(std::int64_t f) const {
  std::vector<int> tuple;
  unflat(f, tuple);
  return tuple;
}

std::int64_t ProductChain::permuted_flat(std::int64_t f, int s) const {
  const std::vector<int>& p = perms[static_cast<std::size_t>(s)];
  std::vector<int> in = unflat(f);
  std::vector<int> out(in.size());
  for (int j = 0; j < K; ++j)
    out[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] =
        in[static_cast<std::size_t>(j)];
  return flat(out);
}

Eigen::VectorXd ProductChain::rho_weights(std::int64_t f) const {
  std::vector<int> t = unflat(f);
  const auto nperm = static_cast<Eigen::Index>(perms.size());
  Eigen::VectorXd energy(nperm);
  for (Eigen::Index s = 0; s < nperm; ++s) {
    const std::vector<int>& p = perms[static_cast<std::size_t>(s)];
    double e = 0.0;
    for (int j = 0; j < K; ++j)
      e += V[t[static_cast<std::size_t>(j)]] /
           taus[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])];
    energy[s] = e;
  }
  double emin = energy.minCoeff();
  Eigen::VectorXd w = (emin - energy.array()).exp();
  return w / w.sum();
}

double ProductChain::rho(std::int64_t f) const { return rho_weights(f)[0]; }

double ProductChain::swap_acceptance(std::int64_t f) const {
  if (K != 2)
    throw std::invalid_argument("swap_acceptance is defined for K = 2");
  std::vector<int> t = unflat(f);
  double dv = V[t[0]] - V[t[1]];
  double ratio = std::exp(dv * (1.0 / taus[0] - 1.0 / taus[1]));
  return std::min(1.0, ratio);
}

Eigen::VectorXd ProductChain::product_measure() const {
  Eigen::VectorXd out = Eigen::VectorXd::Ones(1);
  for (int k = 0; k < K; ++k) {
    const Eigen::VectorXd& m = marginals[static_cast<std::size_t>(k)];
    Eigen::VectorXd next(out.size() * N);
    for (Eigen::Index i = 0; i < out.size(); ++i)
      for (int j = 0; j < N; ++j) next[i * N + j] = out[i] * m[j];
    out.swap(next);
  }
  return out;
}

Eigen::VectorXd ProductChain::symmetrized_measure() const {
  Eigen::VectorXd mu = product_measure();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(states);
  for (int s = 0; s < static_cast<int>(perms.size()); ++s)
    out += permute_measure(*this, mu, s);
  return out / static_cast<double>(perms.size());
}

Eigen::VectorXd ProductChain::implied_potential() const {
  Eigen::VectorXd out(states);
  std::vector<int> t;
  for (std::int64_t f = 0; f < states; ++f) {
    unflat(f, t);
    const auto nperm = static_cast<Eigen::Index>(perms.size());
    Eigen::VectorXd energy(nperm);
    for (Eigen::Index s = 0; s < nperm; ++s) {
      const std::vector<int>& p = perms[static_cast<std::size_t>(s)];
      double e = 0.0;
      for (int j = 0; j < K; ++j)
        e += V[t[static_cast<std::size_t>(j)]] /
             taus[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])];
      energy[s] = e;
    }
    double emin = energy.minCoeff();
    out[f] = emin - std::log((emin - energy.array()).exp().sum());
  }
  return out;
}

Generator ProductChain::uncoupled() const {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(states) * static_cast<std::size_t>(2 * K));
  std::vector<int> t;
  for (std::int64_t f = 0; f < states; ++f) {
    unflat(f, t);
    for (int i = 0; i < K; ++i) {
      std::int64_t stride = 1;
      for (int k = i + 1; k < K; ++k) stride *= N;
      const Generator& comp = components[static_cast<std::size_t>(i)];
      for (SparseRates::InnerIterator it(comp.rates, t[static_cast<std::size_t>(i)]);
           it; ++it) {
        std::int64_t g = f + (it.col() - t[static_cast<std::size_t>(i)]) * stride;
        trips.emplace_back(static_cast<int>(f), static_cast<int>(g), it.value());
      }
    }
  }
  SparseRates rates(states, states);
  rates.setFromTriplets(trips.begin(), trips.end());
  return make_generator(std::move(rates), product_measure());
}

Generator ProductChain::swap_coupled(double a) const {
  if (K != 2)
    throw std::invalid_argument("swap coupling is defined for K = 2");
  if (!(a >= 0.0)) throw std::invalid_argument("swap intensity must be >= 0");
  Generator base = uncoupled();
  std::vector<Eigen::Triplet<double>> trips;
  for (Eigen::Index i = 0; i < base.rates.outerSize(); ++i)
    for (SparseRates::InnerIterator it(base.rates, i); it; ++it)
      trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                         it.value());
  if (a > 0.0) {
    for (std::int64_t f = 0; f < states; ++f) {
      std::int64_t g = permuted_flat(f, 1);
      if (g == f) continue;
      trips.emplace_back(static_cast<int>(f), static_cast<int>(g),
                         a * swap_acceptance(f));
    }
  }
  SparseRates rates(states, states);
  rates.setFromTriplets(trips.begin(), trips.end());
  return make_generator(std::move(rates), product_measure());
}

Generator ProductChain::ins() const {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(states) * static_cast<std::size_t>(2 * K));
  std::vector<int> t;
  for (std::int64_t f = 0; f < states; ++f) {
    unflat(f, t);
    Eigen::VectorXd w = rho_weights(f);
    for (int i = 0; i < K; ++i) {
      std::int64_t stride = 1;
      for (int k = i + 1; k < K; ++k) stride *= N;
      int xi = t[static_cast<std::size_t>(i)];
      for (int yi : {xi - 1, xi + 1}) {
        if (yi < 0 || yi >= N) continue;
        double rate = 0.0;
        for (int s = 0; s < static_cast<int>(perms.size()); ++s) {
          int temp = perms[static_cast<std::size_t>(s)][static_cast<std::size_t>(i)];
          rate += w[s] *
                  components[static_cast<std::size_t>(temp)].rates.coeff(xi, yi);
        }
        std::int64_t g = f + static_cast<std::int64_t>(yi - xi) * stride;
        trips.emplace_back(static_cast<int>(f), static_cast<int>(g), rate);
      }
    }
  }
  SparseRates rates(states, states);
  rates.setFromTriplets(trips.begin(), trips.end());
  return make_generator(std::move(rates), symmetrized_measure());
}

ProductChain make_product_chain(const Grid& grid, const Eigen::VectorXd& V,
                                std::vector<double> taus) {
  if (V.size() != grid.n)
    throw std::invalid_argument("potential size does not match grid");
  if (taus.empty() || taus.size() > 6)
    throw std::invalid_argument("need between 1 and 6 temperatures");
  for (double tau : taus)
    if (!(tau > 0.0))
      throw std::invalid_argument("temperatures must be positive");
  ProductChain chain;
  chain.grid = grid;
  chain.V = V;
  chain.taus = std::move(taus);
  chain.K = static_cast<int>(chain.taus.size());
  chain.N = grid.n;
  chain.states = 1;
  for (int k = 0; k < chain.K; ++k) {
    chain.states *= chain.N;
    if (chain.states > kMaxStates)
      throw std::invalid_argument("product space exceeds the size guard");
  }
  for (double tau : chain.taus) {
    chain.marginals.push_back(gibbs_measure(V, tau));
    chain.components.push_back(metropolis_generator(V, tau));
  }
  chain.perms = all_permutations(chain.K);
  chain.inv_perms.resize(chain.perms.size());
  for (std::size_t s = 0; s < chain.perms.size(); ++s) {
    std::vector<int> inv(static_cast<std::size_t>(chain.K));
    for (int j = 0; j < chain.K; ++j)
      inv[static_cast<std::size_t>(chain.perms[s][static_cast<std::size_t>(j)])] = j;
    chain.inv_perms[s] = std::move(inv);
  }
  return chain;
}

ProductChain make_product_chain(const Grid& grid, double alpha,
                                std::vector<double> taus) {
  return make_product_chain(grid, double_well_potential(grid.points(), alpha),
                            std::move(taus));
}

Eigen::VectorXd permute_measure(const ProductChain& chain,
                                const Eigen::VectorXd& nu, int s) {
  Eigen::VectorXd out(nu.size());
  for (std::int64_t f = 0; f < chain.states; ++f)
    out[f] = nu[chain.permuted_flat(f, s)];
  return out;
}

}  // namespace inswap
