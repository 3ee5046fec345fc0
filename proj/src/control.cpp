#include "inswap/control.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "inswap/rng.hpp"
#include "inswap/simulate.hpp"

namespace inswap {

namespace {

constexpr Eigen::Index kDenseCutoff = 600;
constexpr double kReversibilityTol = 1e-8;

void validate_input(const Generator& gen, const Eigen::VectorXd& h) {
  if (h.size() != gen.size())
    throw std::invalid_argument("cost size does not match generator");
  if (gen.stationary.size() != gen.size() || (gen.stationary.array() <= 0.0).any())
    throw std::invalid_argument("generator needs a positive stationary law");
  if (reversibility_gap(gen) > kReversibilityTol)
    throw std::invalid_argument(
        "generator is not reversible; the symmetrized eigenproblem requires "
        "detailed balance");
  if (!is_connected(gen))
    throw std::invalid_argument("generator must be connected");
}

struct SymmetricOperator {
  // A = diag(exit + h) - S with S(x,y) = r(x,y) sqrt(mu(x)/mu(y)).
  SparseRates A;
  Eigen::VectorXd diag;
  double scale = 0.0;  // max absolute row sum

  Eigen::VectorXd apply(const Eigen::VectorXd& v) const {
    return A * v;
  }
};

SymmetricOperator build_symmetric(const Generator& gen,
                                  const Eigen::VectorXd& h) {
  const Eigen::Index n = gen.size();
  Eigen::VectorXd sqmu = gen.stationary.cwiseSqrt();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(gen.rates.nonZeros() + n));
  SymmetricOperator op;
  op.diag = gen.exit + h;
  for (Eigen::Index x = 0; x < n; ++x) {
    trips.emplace_back(static_cast<int>(x), static_cast<int>(x), op.diag[x]);
    for (SparseRates::InnerIterator it(gen.rates, x); it; ++it)
      trips.emplace_back(static_cast<int>(x), static_cast<int>(it.col()),
                         -it.value() * sqmu[x] / sqmu[it.col()]);
  }
  op.A.resize(n, n);
  op.A.setFromTriplets(trips.begin(), trips.end());
  op.A.makeCompressed();
  for (Eigen::Index x = 0; x < n; ++x) {
    double row = 0.0;
    for (SparseRates::InnerIterator it(op.A, x); it; ++it)
      row += std::abs(it.value());
    op.scale = std::max(op.scale, row);
  }
  return op;
}

// Smallest eigenpair of the symmetric operator. Dense solve below the
// cutoff; shifted inverse iteration above it. Both are polished with
// Rayleigh-quotient iteration so the Bellman residual reaches roundoff.
void smallest_eigenpair(const SymmetricOperator& op, double& gamma,
                        Eigen::VectorXd& psi) {
  const Eigen::Index n = op.A.rows();
  Eigen::SparseMatrix<double> acol(op.A);
  Eigen::SparseMatrix<double> eye(n, n);
  eye.setIdentity();
  if (n <= kDenseCutoff) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(op.A));
    if (es.info() != Eigen::Success)
      throw std::runtime_error("dense eigensolver failed");
    gamma = es.eigenvalues()[0];
    psi = es.eigenvectors().col(0);
  } else {
    double lam_lo = 0.0;
    for (Eigen::Index x = 0; x < n; ++x) {
      double off = 0.0;
      for (SparseRates::InnerIterator it(op.A, x); it; ++it)
        if (it.col() != x) off += std::abs(it.value());
      lam_lo = std::min(lam_lo, op.diag[x] - off);
    }
    double sigma = lam_lo - 0.01 * (1.0 + std::abs(lam_lo));
    Eigen::SparseMatrix<double> shifted = acol - sigma * eye;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> llt(shifted);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("shifted factorization failed");
    psi = Eigen::VectorXd::Ones(n).normalized();
    double prev = 0.0;
    gamma = 0.0;
    for (int iter = 0; iter < 500; ++iter) {
      psi = llt.solve(psi).normalized();
      gamma = psi.dot(op.apply(psi));
      if (iter > 3 && std::abs(gamma - prev) < 1e-13 * op.scale) break;
      prev = gamma;
    }
  }
  if (psi.sum() < 0.0) psi = -psi;

  // Rayleigh-quotient polish (cubic local convergence).
  Eigen::VectorXd best_psi = psi;
  double best_gamma = psi.dot(op.apply(psi));
  double best_resid = (op.apply(psi) - best_gamma * psi).cwiseAbs().maxCoeff();
  for (int iter = 0; iter < 6; ++iter) {
    double ray = psi.dot(op.apply(psi));
    Eigen::SparseMatrix<double> shifted = acol - ray * eye;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(shifted);
    if (lu.info() != Eigen::Success) break;  // exactly singular: done
    Eigen::VectorXd z = lu.solve(psi);
    if (!z.allFinite()) break;
    psi = z.normalized();
    if (psi.sum() < 0.0) psi = -psi;
    double g = psi.dot(op.apply(psi));
    double resid = (op.apply(psi) - g * psi).cwiseAbs().maxCoeff();
    if (resid < best_resid) {
      best_resid = resid;
      best_gamma = g;
      best_psi = psi;
    }
    if (resid < 1e-15 * op.scale) break;
  }
  psi = best_psi;
  gamma = best_gamma;
}

}  // namespace

ErgodicSolution solve_ergodic(const Generator& gen, const Eigen::VectorXd& h) {
  validate_input(gen, h);
  SymmetricOperator op = build_symmetric(gen, h);
  ErgodicSolution sol;
  Eigen::VectorXd psi;
  smallest_eigenpair(op, sol.gamma, psi);

  double top = psi.maxCoeff();
  if (psi.minCoeff() < -1e-8 * top)
    throw std::runtime_error(
        "ground state is not positive; generator may be ill-conditioned");
  psi = psi.cwiseMax(1e-300);
  psi /= psi.norm();

  Eigen::VectorXd sqmu = gen.stationary.cwiseSqrt();
  Eigen::VectorXd V = psi.cwiseQuotient(sqmu);
  sol.W = -V.array().log();
  sol.nu = psi.cwiseProduct(psi);

  // Residual of the stationary equation as stated, evaluated from W.
  double worst = 0.0;
  for (Eigen::Index y = 0; y < gen.size(); ++y) {
    double r = h[y] - sol.gamma;
    for (SparseRates::InnerIterator it(gen.rates, y); it; ++it)
      r += it.value() * (1.0 - std::exp(sol.W[y] - sol.W[it.col()]));
    worst = std::max(worst, std::abs(r));
  }
  sol.bellman_residual = worst;
  return sol;
}

Generator controlled_rates(const Generator& gen, const ErgodicSolution& sol) {
  if (sol.W.size() != gen.size())
    throw std::invalid_argument("solution size does not match generator");
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(gen.rates.nonZeros()));
  for (Eigen::Index x = 0; x < gen.size(); ++x)
    for (SparseRates::InnerIterator it(gen.rates, x); it; ++it)
      trips.emplace_back(static_cast<int>(x), static_cast<int>(it.col()),
                         it.value() * std::exp(sol.W[x] - sol.W[it.col()]));
  SparseRates rates(gen.size(), gen.size());
  rates.setFromTriplets(trips.begin(), trips.end());
  return make_generator(std::move(rates), sol.nu);
}

double fixed_point_residual(const Generator& gen, const Eigen::VectorXd& h,
                            const ErgodicSolution& sol) {
  Eigen::VectorXd theta = sol.nu.cwiseQuotient(gen.stationary);
  Eigen::VectorXd s = theta.cwiseSqrt();
  double worst = 0.0;
  for (Eigen::Index x = 0; x < gen.size(); ++x) {
    double cross = 0.0;
    for (SparseRates::InnerIterator it(gen.rates, x); it; ++it)
      cross += it.value() * s[it.col()];
    double denom = gen.exit[x] + h[x] - sol.gamma;
    double rhs = (cross * cross) / (denom * denom);
    worst = std::max(worst, std::abs(theta[x] - rhs));
  }
  return worst;
}

double FiniteHorizonSolution::at(double t, Eigen::Index x) const {
  if (times.size() == 0) throw std::logic_error("empty solution");
  double dt = times[1] - times[0];
  auto k = static_cast<Eigen::Index>(std::lround(t / dt));
  k = std::clamp<Eigen::Index>(k, 0, times.size() - 1);
  return W(k, x);
}

FiniteHorizonSolution solve_finite_horizon(const Generator& gen,
                                           const Eigen::VectorXd& h, double T,
                                           int steps) {
  if (h.size() != gen.size())
    throw std::invalid_argument("cost size does not match generator");
  if (!(T > 0.0) || steps < 1)
    throw std::invalid_argument("need T > 0 and steps >= 1");
  const Eigen::Index n = gen.size();
  const double dt = T / steps;

  // Uniformization constant: B = A + cI is elementwise nonnegative for
  // A = L - diag(h), so the series for e^{B dt} has no cancellation and V
  // stays positive for any step size.
  const double c = (gen.exit + h).maxCoeff();
  const Eigen::VectorXd bdiag = (c - gen.exit.array() - h.array()).matrix();
  const int nsub = std::max(1, static_cast<int>(std::ceil(c * dt / 16.0)));
  const double ds = dt / nsub;

  FiniteHorizonSolution out;
  out.times = Eigen::VectorXd::LinSpaced(steps + 1, 0.0, T);
  out.W.resize(steps + 1, n);
  out.W.row(steps).setZero();

  Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
  double logscale = 0.0;
  for (int k = steps; k-- > 0;) {
    for (int sub = 0; sub < nsub; ++sub) {
      Eigen::VectorXd w = v;
      Eigen::VectorXd term = v;
      for (int m = 1; m <= 400; ++m) {
        term = (ds / m) * (gen.rates * term + bdiag.cwiseProduct(term));
        w += term;
        if (term.maxCoeff() <= 1e-18 * w.maxCoeff()) break;
        if (m == 400)
          throw std::runtime_error("propagator series did not converge");
      }
      logscale += -c * ds + std::log(w.maxCoeff());
      v = w / w.maxCoeff();
    }
    if ((v.array() <= 0.0).any())
      throw std::runtime_error("value function lost positivity");
    out.W.row(k) = -(v.array().log() + logscale).matrix().transpose();
  }
  return out;
}

RepresentationCheck verify_representation(const Generator& gen,
                                          const Eigen::VectorXd& h, double T,
                                          std::int64_t y0, int replicas,
                                          std::uint64_t seed) {
  if (replicas < 2) throw std::invalid_argument("need at least 2 replicas");
  int steps = std::clamp(static_cast<int>(std::ceil(4.0 * T)), 16, 4096);
  FiniteHorizonSolution fh = solve_finite_horizon(gen, h, T, steps);

  double sum = 0.0, sumsq = 0.0;
  SimOptions opts;
  opts.initial = y0;
  for (int r = 0; r < replicas; ++r) {
    Trajectory traj = simulate_ctmc(gen, T, SplitMix64::stream(seed, r), opts);
    double integral = 0.0;
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
      double t1 = (i + 1 < traj.times.size()) ? traj.times[i + 1] : T;
      integral += h[traj.states[i]] * (t1 - traj.times[i]);
    }
    double x = std::exp(-integral);
    sum += x;
    sumsq += x * x;
  }
  double mean = sum / replicas;
  double var = std::max(0.0, sumsq / replicas - mean * mean) * replicas /
               (replicas - 1.0);
  RepresentationCheck check;
  check.w_ode = fh.W(0, y0);
  check.w_mc = -std::log(mean);
  check.se_log = std::sqrt(var / replicas) / mean;
  check.replicas = replicas;
  return check;
}

}  // namespace inswap
