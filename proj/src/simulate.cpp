#include "inswap/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "inswap/rng.hpp"

namespace inswap {

std::vector<double> geometric_checkpoints(double horizon, int count) {
  std::vector<double> out;
  for (int k = count - 1; k >= 0; --k)
    out.push_back(horizon / static_cast<double>(std::int64_t{1} << k));
  return out;
}

namespace {

// Walks a sparse row and picks the jump target for threshold u in [0, q).
std::int64_t pick_target(const SparseRates& rates, std::int64_t row, double u) {
  double cum = 0.0;
  std::int64_t last = -1;
  for (SparseRates::InnerIterator it(rates, row); it; ++it) {
    cum += it.value();
    last = it.col();
    if (u < cum) return it.col();
  }
  return last;  // threshold landed past the row sum by roundoff
}

}  // namespace

Trajectory simulate_ctmc(const Generator& gen, double horizon,
                         std::uint64_t seed, const SimOptions& opts) {
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (opts.initial < 0 || opts.initial >= gen.size())
    throw std::invalid_argument("initial state out of range");
  SplitMix64 rng(seed);
  Trajectory traj;
  traj.seed = seed;
  traj.horizon = horizon;
  traj.times.push_back(0.0);
  traj.states.push_back(opts.initial);
  std::int64_t y = opts.initial;
  double t = 0.0;
  while (true) {
    double q = gen.exit[y];
    if (!(q > 0.0)) break;  // absorbing: dwell to the horizon
    t += rng.exponential(q);
    if (t >= horizon) break;
    y = pick_target(gen.rates, y, rng.uniform01() * q);
    traj.times.push_back(t);
    traj.states.push_back(y);
  }
  return traj;
}

Eigen::VectorXd occupation_measure(const Trajectory& traj,
                                   Eigen::Index n_states, double t) {
  double total = std::min(t, traj.horizon);
  if (!(total > 0.0)) throw std::invalid_argument("empty time window");
  Eigen::VectorXd occ = Eigen::VectorXd::Zero(n_states);
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    double t0 = traj.times[i];
    double t1 = (i + 1 < traj.times.size()) ? traj.times[i + 1] : total;
    t1 = std::min(t1, total);
    if (t1 <= t0) continue;
    occ[traj.states[i]] += t1 - t0;
  }
  return occ / total;
}

Eigen::VectorXd occupation_measure(const Trajectory& traj,
                                   Eigen::Index n_states) {
  return occupation_measure(traj, n_states, traj.horizon);
}

Eigen::VectorXd beta_from_rho(const ProductChain& chain,
                              const Eigen::VectorXd& rho) {
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(chain.K);
  for (std::size_t s = 0; s < chain.perms.size(); ++s)
    beta[chain.perms[s][0]] += rho[static_cast<Eigen::Index>(s)];
  return beta;
}

namespace {

// Shared accumulator state: raw time-weighted sums plus checkpointing.
struct AccBuilder {
  const ProductChain& chain;
  Eigen::VectorXd nu_raw, eta_raw, rho_raw;
  std::vector<double> cps;
  std::size_t next_cp = 0;
  OccupationAccumulators acc;

  AccBuilder(const ProductChain& c, double horizon,
             const std::vector<double>& checkpoint_times)
      : chain(c),
        nu_raw(Eigen::VectorXd::Zero(c.states)),
        eta_raw(Eigen::VectorXd::Zero(c.states)),
        rho_raw(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(c.perms.size()))),
        cps(checkpoint_times) {
    std::sort(cps.begin(), cps.end());
    acc.horizon = horizon;
  }

  void snapshot(double at) {
    OccupationAccumulators::Snapshot snap;
    snap.time = at;
    snap.nu = nu_raw / at;
    snap.eta = eta_raw / at;
    snap.rho = rho_raw / at;
    snap.beta = beta_from_rho(chain, snap.rho);
    acc.checkpoints.push_back(std::move(snap));
  }

  // Deposits dt of weighted mass via `add`, splitting at checkpoints.
  template <typename AddFn>
  void advance(double t, double dt, const AddFn& add) {
    double end = t + dt;
    while (next_cp < cps.size() && cps[next_cp] <= end) {
      double chunk = cps[next_cp] - t;
      if (chunk > 0.0) add(chunk);
      t = cps[next_cp];
      snapshot(t);
      ++next_cp;
    }
    if (end > t) add(end - t);
  }

  OccupationAccumulators finish() {
    double T = acc.horizon;
    // Checkpoints at (or within roundoff of) the horizon can be missed when
    // the final dwell endpoint t + dt lands one ulp short of T.
    while (next_cp < cps.size() && cps[next_cp] <= T) {
      snapshot(cps[next_cp]);
      ++next_cp;
    }
    acc.nu = nu_raw / T;
    acc.eta = eta_raw / T;
    acc.rho = rho_raw / T;
    acc.beta = beta_from_rho(chain, acc.rho);
    return std::move(acc);
  }
};

}  // namespace

InsRun simulate_ins(const ProductChain& chain, double horizon,
                    std::uint64_t seed, const SimOptions& opts) {
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (opts.initial < 0 || opts.initial >= chain.states)
    throw std::invalid_argument("initial state out of range");
  Generator gen = chain.ins();
  SplitMix64 rng(seed);
  InsRun run;
  run.traj.seed = seed;
  run.traj.horizon = horizon;
  run.traj.times.push_back(0.0);
  run.traj.states.push_back(opts.initial);
  AccBuilder acc(chain, horizon, opts.checkpoint_times);

  std::int64_t y = opts.initial;
  double t = 0.0;
  const int nperm = static_cast<int>(chain.perms.size());
  while (t < horizon) {
    Eigen::VectorXd w = chain.rho_weights(y);
    double q = gen.exit[y];
    double s = (q > 0.0) ? rng.exponential(q)
                         : std::numeric_limits<double>::infinity();
    double dt = std::min(s, horizon - t);
    acc.advance(t, dt, [&](double dd) {
      acc.nu_raw[y] += dd;
      for (int p = 0; p < nperm; ++p) {
        acc.eta_raw[chain.permuted_flat(y, p)] += w[p] * dd;
        acc.rho_raw[p] += w[p] * dd;
      }
    });
    t += s;
    if (!(t < horizon)) break;
    y = pick_target(gen.rates, y, rng.uniform01() * q);
    run.traj.times.push_back(t);
    run.traj.states.push_back(y);
  }
  run.acc = acc.finish();
  return run;
}

PtRun simulate_pt(const ProductChain& chain, double a, double horizon,
                  std::uint64_t seed, const SimOptions& opts) {
  if (chain.K != 2)
    throw std::invalid_argument("swap-coupled simulation is defined for K = 2");
  if (!(a >= 0.0)) throw std::invalid_argument("swap intensity must be >= 0");
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (opts.initial < 0 || opts.initial >= chain.states)
    throw std::invalid_argument("initial state out of range");
  SplitMix64 rng(seed);
  PtRun run;
  run.traj.seed = seed;
  run.traj.horizon = horizon;
  run.traj.times.push_back(0.0);
  run.traj.states.push_back(opts.initial);
  run.traj.perms.push_back(0);
  AccBuilder acc(chain, horizon, opts.checkpoint_times);

  std::vector<int> t_state = chain.unflat(opts.initial);
  std::int64_t f = opts.initial;
  int z = 0;  // current permutation: 0 identity, 1 swapped
  double t = 0.0;
  while (t < horizon) {
    // Component exit rates under the current temperature assignment.
    double q0 = 0.0, q1 = 0.0;
    if (!opts.freeze_positions) {
      q0 = chain.components[chain.perms[z][0]].exit[t_state[0]];
      q1 = chain.components[chain.perms[z][1]].exit[t_state[1]];
    }
    double qc = q0 + q1;
    double total = qc + a;
    double s = (total > 0.0) ? rng.exponential(total)
                             : std::numeric_limits<double>::infinity();
    double dt = std::min(s, horizon - t);
    std::int64_t eta_target = (z == 0) ? f : chain.permuted_flat(f, 1);
    acc.advance(t, dt, [&](double dd) {
      acc.nu_raw[f] += dd;
      acc.eta_raw[eta_target] += dd;
      acc.rho_raw[z] += dd;
    });
    t += s;
    if (!(t < horizon)) break;
    double u = rng.uniform01() * total;
    if (u < qc) {
      // Component move: slot 0 or 1, then direction within the 1-D chain.
      int slot = (u < q0) ? 0 : 1;
      const Generator& comp = chain.components[chain.perms[z][slot]];
      double uu = rng.uniform01() * comp.exit[t_state[slot]];
      int target = static_cast<int>(
          pick_target(comp.rates, t_state[slot], uu));
      t_state[slot] = target;
      f = chain.flat(t_state);
      run.traj.times.push_back(t);
      run.traj.states.push_back(f);
      run.traj.perms.push_back(z);
    } else {
      // Swap attempt. From the swapped assignment the acceptance is
      // evaluated at the position-swapped state.
      double b = (z == 0) ? chain.swap_acceptance(f)
                          : chain.swap_acceptance(chain.permuted_flat(f, 1));
      if (rng.uniform01() < b) {
        z ^= 1;
        run.traj.times.push_back(t);
        run.traj.states.push_back(f);
        run.traj.perms.push_back(z);
      }
    }
  }
  run.acc = acc.finish();
  return run;
}

}  // namespace inswap
