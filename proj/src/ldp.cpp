#include "inswap/ldp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace inswap {

double rate_J(const Generator& gen, const Eigen::VectorXd& nu) {
  if (nu.size() != gen.size())
    throw std::invalid_argument("measure size does not match generator");
  if ((nu.array() < 0.0).any())
    throw std::invalid_argument("measure must be nonnegative");
  const Eigen::VectorXd& mu = gen.stationary;
  Eigen::VectorXd theta = nu.cwiseQuotient(mu);
  Eigen::VectorXd s = theta.cwiseSqrt();
  double J = 0.0;
  for (Eigen::Index x = 0; x < gen.size(); ++x) {
    double cross = 0.0;
    for (SparseRates::InnerIterator it(gen.rates, x); it; ++it)
      cross += it.value() * s[it.col()];
    J += mu[x] * (gen.exit[x] * theta[x] - s[x] * cross);
  }
  return J;
}

Eigen::VectorXd map_M(const ProductChain& chain, const Eigen::VectorXd& nu) {
  if (nu.size() != chain.states)
    throw std::invalid_argument("measure size does not match chain");
  Eigen::VectorXd out(chain.states);
  for (std::int64_t x = 0; x < chain.states; ++x) {
    double acc = 0.0;
    for (int s = 0; s < static_cast<int>(chain.perms.size()); ++s)
      acc += nu[chain.permuted_flat(x, s)];
    out[x] = chain.rho(x) * acc;
  }
  return out;
}

Eigen::VectorXd association_of(const ProductChain& chain,
                               const Eigen::VectorXd& nu) {
  if (nu.size() != chain.states)
    throw std::invalid_argument("measure size does not match chain");
  Eigen::VectorXd w =
      Eigen::VectorXd::Zero(static_cast<Eigen::Index>(chain.perms.size()));
  for (std::int64_t x = 0; x < chain.states; ++x)
    w += nu[x] * chain.rho_weights(x);
  return w;
}

namespace {

double orbit_discrepancy(const ProductChain& chain,
                         const Eigen::VectorXd& gamma) {
  Eigen::VectorXd mu = chain.product_measure();
  double worst = 0.0;
  for (std::int64_t x = 0; x < chain.states; ++x) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int s = 0; s < static_cast<int>(chain.perms.size()); ++s) {
      std::int64_t xs = chain.permuted_flat(x, s);
      double ratio = gamma[xs] / mu[xs];
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    double spread = (hi - lo) / std::max(hi, 1e-300);
    worst = std::max(worst, spread);
  }
  return worst;
}

}  // namespace

SymmetricPreimage symmetric_preimage(const ProductChain& chain,
                                     const Eigen::VectorXd& gamma,
                                     double tol) {
  if (gamma.size() != chain.states)
    throw std::invalid_argument("measure size does not match chain");
  SymmetricPreimage out;
  out.discrepancy = orbit_discrepancy(chain, gamma);
  out.feasible = out.discrepancy <= tol;
  if (!out.feasible) return out;
  double kfact = static_cast<double>(chain.perms.size());
  out.nu.resize(chain.states);
  for (std::int64_t x = 0; x < chain.states; ++x)
    out.nu[x] = gamma[x] / (kfact * chain.rho(x));
  return out;
}

double rate_I_weighted(const ProductChain& chain, const Eigen::VectorXd& gamma,
                       double tol) {
  if (gamma.size() != chain.states)
    throw std::invalid_argument("measure size does not match chain");
  if (orbit_discrepancy(chain, gamma) > tol)
    return std::numeric_limits<double>::infinity();
  return rate_J(chain.uncoupled(), gamma);
}

}  // namespace inswap
