#include "inswap/model.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace inswap {

Eigen::VectorXd Grid::points() const {
  if (n < 2) throw std::invalid_argument("grid needs at least 2 points");
  if (!(lo < hi)) throw std::invalid_argument("grid needs lo < hi");
  return Eigen::VectorXd::LinSpaced(n, lo, hi);
}

double double_well_potential(double x, double alpha) {
  double x2 = x * x;
  return (3.0 * x2 * x2 - 4.0 * (alpha - 1.0) * x2 * x - 6.0 * alpha * x2) /
             (2.0 * alpha + 1.0) +
         1.0;
}

Eigen::VectorXd double_well_potential(const Eigen::VectorXd& x, double alpha) {
  return x.unaryExpr(
      [alpha](double v) { return double_well_potential(v, alpha); });
}

Eigen::VectorXd gibbs_measure(const Eigen::VectorXd& V, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("temperature must be positive");
  double vmin = V.minCoeff();
  Eigen::VectorXd w = ((vmin - V.array()) / tau).exp();
  return w / w.sum();
}

Generator make_generator(SparseRates rates, Eigen::VectorXd stationary) {
  Generator gen;
  gen.rates = std::move(rates);
  gen.rates.makeCompressed();
  gen.stationary = std::move(stationary);
  gen.exit = Eigen::VectorXd::Zero(gen.rates.rows());
  for (Eigen::Index i = 0; i < gen.rates.outerSize(); ++i) {
    double q = 0.0;
    for (SparseRates::InnerIterator it(gen.rates, i); it; ++it) q += it.value();
    gen.exit[i] = q;
  }
  return gen;
}

Generator metropolis_generator(const Eigen::VectorXd& V, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("temperature must be positive");
  const Eigen::Index n = V.size();
  if (n < 2) throw std::invalid_argument("need at least 2 states");
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(2 * n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j : {i - 1, i + 1}) {
      if (j < 0 || j >= n) continue;
      double up = std::max(V[j] - V[i], 0.0);
      trips.emplace_back(static_cast<int>(i), static_cast<int>(j),
                         std::exp(-up / tau));
    }
  }
  SparseRates rates(n, n);
  rates.setFromTriplets(trips.begin(), trips.end());
  return make_generator(std::move(rates), gibbs_measure(V, tau));
}

SingleTempChain make_chain(const Grid& grid, const Eigen::VectorXd& V,
                           double tau) {
  if (V.size() != grid.n)
    throw std::invalid_argument("potential size does not match grid");
  SingleTempChain chain;
  chain.grid = grid;
  chain.V = V;
  chain.tau = tau;
  chain.mu = gibbs_measure(V, tau);
  chain.gen = metropolis_generator(V, tau);
  return chain;
}

SingleTempChain make_chain(const Grid& grid, double alpha, double tau) {
  return make_chain(grid, double_well_potential(grid.points(), alpha), tau);
}

double mass_right(const Grid& grid, const Eigen::VectorXd& probs, double lo) {
  if (probs.size() != grid.n)
    throw std::invalid_argument("measure size does not match grid");
  Eigen::VectorXd x = grid.points();
  double m = 0.0;
  for (int i = 0; i < grid.n; ++i)
    if (x[i] >= lo) m += probs[i];
  return m;
}

double reversibility_gap(const Generator& gen) {
  const Eigen::VectorXd& mu = gen.stationary;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < gen.rates.outerSize(); ++i) {
    for (SparseRates::InnerIterator it(gen.rates, i); it; ++it) {
      double fwd = mu[it.row()] * it.value();
      double bwd = mu[it.col()] * gen.rates.coeff(it.col(), it.row());
      double scale = std::max({fwd, bwd, 1e-300});
      worst = std::max(worst, std::abs(fwd - bwd) / scale);
    }
  }
  return worst;
}

bool is_connected(const Generator& gen) {
  const Eigen::Index n = gen.size();
  if (n == 0) return true;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<Eigen::Index> stack{0};
  seen[0] = 1;
  Eigen::Index found = 1;
  while (!stack.empty()) {
    Eigen::Index i = stack.back();
    stack.pop_back();
    for (SparseRates::InnerIterator it(gen.rates, i); it; ++it) {
      Eigen::Index j = it.col();
      if (!seen[static_cast<std::size_t>(j)]) {
        seen[static_cast<std::size_t>(j)] = 1;
        ++found;
        stack.push_back(j);
      }
    }
  }
  return found == n;
}

double tv_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("tv_distance: size mismatch");
  return 0.5 * (a - b).cwiseAbs().sum();
}

Eigen::VectorXd normalized(const Eigen::VectorXd& w) {
  double s = w.sum();
  if (!(s > 0.0)) throw std::invalid_argument("cannot normalize zero mass");
  return w / s;
}

}  // namespace inswap
