#include "inswap/lagrange.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "inswap/control.hpp"
#include "inswap/ldp.hpp"
#include "inswap/parallel.hpp"

namespace inswap {

namespace {

struct Eval {
  double lambda = 0.0;
  double value = 0.0;  // <g, nu_lambda>
  ErgodicSolution sol;
};

class ConstraintMap {
 public:
  ConstraintMap(const Generator& gen, const Eigen::VectorXd& g)
      : gen_(gen), g_(g) {}

  Eval operator()(double lambda) {
    Eval e;
    e.lambda = lambda;
    e.sol = solve_ergodic(gen_, lambda * g_);
    e.value = g_.dot(e.sol.nu);
    check_monotone(e);
    return e;
  }

 private:
  // lambda -> <g, nu_lambda> is nonincreasing; a violation beyond roundoff
  // slack means the inner solver failed and the bisection result is garbage.
  void check_monotone(const Eval& e) {
    const double slack = 1e-9 * (1.0 + std::abs(e.value));
    for (const auto& [lam, val] : history_) {
      const bool bad = (lam < e.lambda && val < e.value - slack) ||
                       (lam > e.lambda && val > e.value + slack);
      if (bad) {
        std::ostringstream msg;
        msg << "constraint map lost monotonicity: value " << val
            << " at lambda " << lam << " vs value " << e.value << " at lambda "
            << e.lambda;
        throw std::runtime_error(msg.str());
      }
    }
    history_.emplace_back(e.lambda, e.value);
  }

  const Generator& gen_;
  const Eigen::VectorXd& g_;
  std::vector<std::pair<double, double>> history_;
};

ConstrainedResult pack(const Generator& gen, Eval e) {
  ConstrainedResult r;
  r.lambda = e.lambda;
  r.achieved = e.value;
  r.gamma = e.sol.gamma;
  r.rate = rate_J(gen, e.sol.nu);
  r.nu = std::move(e.sol.nu);
  r.W = std::move(e.sol.W);
  r.bellman_residual = e.sol.bellman_residual;
  return r;
}

ConstrainedResult unconstrained(const Generator& gen,
                                const Eigen::VectorXd& g) {
  ConstrainedResult r;
  r.achieved = g.dot(gen.stationary);
  r.rate = rate_J(gen, gen.stationary);
  r.nu = gen.stationary;
  r.W = Eigen::VectorXd::Zero(gen.size());
  return r;
}

void attach_image(const ProductChain& chain, ConstrainedResult& r) {
  const Eigen::VectorXd mu = chain.product_measure();
  if (r.lambda == 0.0) {
    // Unconstrained optimum: the image of the symmetrized stationary law is
    // the product law identically, so the gap is zero by construction.
    r.image = mu;
    r.image_gap = 0.0;
    return;
  }
  r.image = map_M(chain, r.nu);
  r.image_gap = tv_distance(r.image, mu);
}

}  // namespace

ConstrainedResult min_rate_with_constraint(const Generator& gen,
                                           const Eigen::VectorXd& g,
                                           double target,
                                           const ConstraintOptions& opts) {
  if (g.size() != gen.size()) {
    throw std::invalid_argument("constraint field size mismatch");
  }
  if (!(opts.tol > 0.0) || opts.max_iter < 1 || !(opts.lambda0 > 0.0)) {
    throw std::invalid_argument("bad constraint options");
  }
  const double g_lo = g.minCoeff();
  const double g_hi = g.maxCoeff();
  if (target < g_lo - opts.tol || target > g_hi + opts.tol) {
    std::ostringstream msg;
    msg << "target " << target << " outside achievable range [" << g_lo << ", "
        << g_hi << "]";
    throw std::invalid_argument(msg.str());
  }

  ConstrainedResult base = unconstrained(gen, g);
  if (std::abs(base.achieved - target) <= opts.tol) {
    return base;
  }
  if (g_hi - g_lo <= opts.tol) {
    throw std::invalid_argument("constraint field is constant; target unreachable");
  }

  ConstraintMap value_at(gen, g);
  // Push value down with lambda > 0, up with lambda < 0.
  const double dir = base.achieved > target ? 1.0 : -1.0;
  double lam_in = 0.0;   // value still on the unconstrained side
  double lam_out = 0.0;  // value past the target
  Eval out_eval;
  bool bracketed = false;
  double probe = opts.lambda0;
  for (int k = 0; k < 70; ++k) {
    out_eval = value_at(dir * probe);
    const bool past = dir > 0 ? out_eval.value <= target : out_eval.value >= target;
    if (std::abs(out_eval.value - target) <= opts.tol) {
      ConstrainedResult r = pack(gen, std::move(out_eval));
      return r;
    }
    if (past) {
      lam_out = dir * probe;
      bracketed = true;
      break;
    }
    lam_in = dir * probe;
    probe *= 2.0;
  }
  if (!bracketed) {
    throw std::runtime_error("constraint bracketing failed: target not reached "
                             "within multiplier range");
  }

  Eval best = std::move(out_eval);
  for (int it = 0; it < opts.max_iter; ++it) {
    const double mid = 0.5 * (lam_in + lam_out);
    Eval e = value_at(mid);
    if (std::abs(e.value - target) < std::abs(best.value - target)) {
      best = e;
    }
    if (std::abs(best.value - target) <= opts.tol) {
      return pack(gen, std::move(best));
    }
    const bool past = dir > 0 ? e.value <= target : e.value >= target;
    (past ? lam_out : lam_in) = mid;
    if (std::abs(lam_out - lam_in) <=
        std::numeric_limits<double>::epsilon() * (1.0 + std::abs(lam_out))) {
      break;
    }
  }
  std::ostringstream msg;
  msg << "constraint bisection did not reach tolerance " << opts.tol
      << "; best |achieved - target| = " << std::abs(best.value - target);
  throw std::runtime_error(msg.str());
}

ConstrainedResult min_rate_given_association(const ProductChain& chain,
                                             double w1,
                                             const ConstraintOptions& opts) {
  const Eigen::Index n = chain.states;
  Eigen::VectorXd g(n);
  for (Eigen::Index x = 0; x < n; ++x) {
    g[x] = chain.rho(x);
  }
  ConstrainedResult r = min_rate_with_constraint(chain.ins(), g, w1, opts);
  attach_image(chain, r);
  return r;
}

Eigen::VectorXd mass_constraint_field(const ProductChain& chain,
                                      double region_lo) {
  if (chain.K != 2) {
    throw std::invalid_argument("mass constraint needs exactly two components");
  }
  const Eigen::VectorXd pts = chain.grid.points();
  Eigen::VectorXd g = Eigen::VectorXd::Zero(chain.states);
  for (Eigen::Index x = 0; x < chain.states; ++x) {
    const auto t = chain.unflat(x);
    if (pts[t[0]] >= region_lo) g[x] += chain.rho(x);
    if (pts[t[1]] >= region_lo) g[x] += chain.rho(chain.permuted_flat(x, 1));
  }
  return g;
}

ConstrainedResult min_rate_given_mass(const ProductChain& chain, double target,
                                      const ConstraintOptions& opts,
                                      double region_lo) {
  const Eigen::VectorXd g = mass_constraint_field(chain, region_lo);
  ConstrainedResult r = min_rate_with_constraint(chain.ins(), g, target, opts);
  attach_image(chain, r);
  return r;
}

ConstrainedResult min_rate_given_mass_single(const SingleTempChain& chain,
                                             double target,
                                             const ConstraintOptions& opts,
                                             double region_lo) {
  const Eigen::VectorXd pts = chain.grid.points();
  Eigen::VectorXd g(pts.size());
  for (Eigen::Index i = 0; i < pts.size(); ++i) {
    g[i] = pts[i] >= region_lo ? 1.0 : 0.0;
  }
  return min_rate_with_constraint(chain.gen, g, target, opts);
}

TableData table_experiments(const TableRequest& req) {
  if (req.alphas.empty() || req.deltas.empty()) {
    throw std::invalid_argument("table request needs alphas and deltas");
  }
  if (req.taus.size() != 2) {
    throw std::invalid_argument("table experiments use exactly two temperatures");
  }
  TableData out;
  out.alphas = req.alphas;
  out.deltas = req.deltas;

  const auto na = static_cast<Eigen::Index>(req.alphas.size());
  const auto nd = static_cast<Eigen::Index>(req.deltas.size());
  std::vector<ProductChain> chains;
  chains.reserve(req.alphas.size());
  std::vector<Generator> gens;
  gens.reserve(req.alphas.size());
  out.kappa.resize(req.alphas.size());
  for (Eigen::Index a = 0; a < na; ++a) {
    chains.push_back(make_product_chain(req.grid, req.alphas[a], req.taus));
    gens.push_back(chains.back().ins());
    out.kappa[a] = mass_right(req.grid, chains.back().marginals[0], req.region_lo);
  }

  std::vector<Eigen::VectorXd> fields;
  fields.reserve(req.alphas.size());
  for (Eigen::Index a = 0; a < na; ++a) {
    fields.push_back(mass_constraint_field(chains[a], req.region_lo));
  }

  out.rate.resize(nd, na);
  parallel_for(nd * na, req.jobs, [&](std::int64_t cell) {
    const Eigen::Index d = cell / na;
    const Eigen::Index a = cell % na;
    const double target = out.kappa[a] * (1.0 - req.deltas[d]);
    try {
      ConstrainedResult r =
          min_rate_with_constraint(gens[a], fields[a], target, req.opts);
      out.rate(d, a) = r.rate;
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "table cell (alpha=" << req.alphas[a] << ", delta=" << req.deltas[d]
          << ") failed: " << e.what();
      throw std::runtime_error(msg.str());
    }
  });

  out.normalized.resize(nd, na);
  for (Eigen::Index d = 0; d < nd; ++d) {
    for (Eigen::Index a = 0; a < na; ++a) {
      out.normalized(d, a) = out.rate(d, a) / out.rate(d, 0);
    }
  }
  return out;
}

}  // namespace inswap
