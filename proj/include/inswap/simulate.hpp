// Exact-event simulation of the chains plus holding-time-weighted
// occupation accumulators and association diagnostics.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "inswap/generator.hpp"
#include "inswap/product.hpp"

namespace inswap {

// Embedded jump chain of one run. states[0] is the initial state at time 0;
// times[i] is the i-th transition time. perms is filled only by the
// swap-coupled simulator (current permutation after each event).
struct Trajectory {
  std::uint64_t seed = 0;
  double horizon = 0.0;
  std::vector<double> times;
  std::vector<std::int64_t> states;
  std::vector<int> perms;
};

// Time-weighted measures accumulated along a run, normalized by elapsed
// time. nu is the plain occupation; eta the association-weighted empirical
// measure; rho the occupation over permutations; beta the per-temperature
// association of the first component. Snapshots hold the same fields
// normalized at intermediate times.
struct OccupationAccumulators {
  double horizon = 0.0;
  Eigen::VectorXd nu;
  Eigen::VectorXd eta;
  Eigen::VectorXd rho;
  Eigen::VectorXd beta;

  struct Snapshot {
    double time = 0.0;
    Eigen::VectorXd nu, eta, rho, beta;
  };
  std::vector<Snapshot> checkpoints;
};

struct SimOptions {
  std::int64_t initial = 0;
  // Snapshot times in (0, horizon]; pass geometric_checkpoints() for the
  // default doubling schedule.
  std::vector<double> checkpoint_times;
  // Swap-coupled simulator only: suppress component moves so only the
  // permutation process runs (used to test the swap mechanism in isolation).
  bool freeze_positions = false;
};

// T, T/2, T/4, ... (count times), ascending.
std::vector<double> geometric_checkpoints(double horizon, int count);

// Gillespie simulation of an arbitrary generator.
Trajectory simulate_ctmc(const Generator& gen, double horizon,
                         std::uint64_t seed, const SimOptions& opts = {});

// Occupation measure of a trajectory restricted to [0, min(t, horizon)].
Eigen::VectorXd occupation_measure(const Trajectory& traj,
                                   Eigen::Index n_states, double t);
Eigen::VectorXd occupation_measure(const Trajectory& traj,
                                   Eigen::Index n_states);

struct PtRun {
  Trajectory traj;
  OccupationAccumulators acc;
};

// Temperature-swap representation of the swap-coupled process at intensity a
// (K = 2): positions move under the rate matrices assigned by the current
// permutation; an independent clock of rate a proposes permutation flips
// accepted with the Metropolis swap probability. eta accumulates the
// position-swapped empirical measure, rho the permutation occupation.
PtRun simulate_pt(const ProductChain& chain, double a, double horizon,
                  std::uint64_t seed, const SimOptions& opts = {});

struct InsRun {
  Trajectory traj;
  OccupationAccumulators acc;
};

// Infinite-swapping-limit simulation. eta accumulates the rho-weighted
// empirical measure over all permuted copies of the current state; rho
// accumulates the instantaneous association weights.
InsRun simulate_ins(const ProductChain& chain, double horizon,
                    std::uint64_t seed, const SimOptions& opts = {});

// beta[k] = sum of rho over permutations assigning temperature k to the
// first component.
Eigen::VectorXd beta_from_rho(const ProductChain& chain,
                              const Eigen::VectorXd& rho);

}  // namespace inswap
