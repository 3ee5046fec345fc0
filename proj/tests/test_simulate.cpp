#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "inswap/rng.hpp"
#include "inswap/simulate.hpp"

using namespace inswap;

TEST_SUITE("simulate") {

TEST_CASE("geometric checkpoint schedule doubles up to the horizon") {
  std::vector<double> cps = geometric_checkpoints(80.0, 4);
  REQUIRE(cps.size() == 4);
  CHECK(cps[0] == 10.0);
  CHECK(cps[1] == 20.0);
  CHECK(cps[2] == 40.0);
  CHECK(cps[3] == 80.0);
}

TEST_CASE("unit-rate chain jumps once per unit time on average") {
  Generator gen = testing::two_state_unit();
  const double T = 200.0;
  const int R = 100;
  std::int64_t jumps = 0;
  for (int r = 0; r < R; ++r) {
    Trajectory traj =
        simulate_ctmc(gen, T, SplitMix64::stream(7, static_cast<std::uint64_t>(r)));
    jumps += static_cast<std::int64_t>(traj.times.size()) - 1;
  }
  const double per_time = static_cast<double>(jumps) / (T * R);
  CHECK(std::abs(per_time - 1.0) < 3.0 / std::sqrt(T * R));
}

TEST_CASE("trajectories are well formed") {
  SplitMix64 rng(3);
  Generator gen = testing::random_reversible(9, rng);
  Trajectory traj = simulate_ctmc(gen, 50.0, 17);
  REQUIRE(!traj.times.empty());
  CHECK(traj.times[0] == 0.0);
  CHECK(traj.states.size() == traj.times.size());
  CHECK(traj.horizon == 50.0);
  for (std::size_t i = 1; i < traj.times.size(); ++i) {
    CHECK(traj.times[i] > traj.times[i - 1]);
    CHECK(traj.times[i] < traj.horizon);
    CHECK(traj.states[i] != traj.states[i - 1]);
  }
  for (std::int64_t s : traj.states) {
    CHECK(s >= 0);
    CHECK(s < gen.size());
  }
}

TEST_CASE("occupation measure of a hand-built trajectory") {
  Trajectory traj;
  traj.horizon = 2.0;
  traj.times = {0.0, 0.5};
  traj.states = {0, 1};
  Eigen::VectorXd occ = occupation_measure(traj, 2);
  CHECK(occ[0] == 0.25);
  CHECK(occ[1] == 0.75);
  // Restricting the window reweights exactly.
  Eigen::VectorXd half = occupation_measure(traj, 2, 1.0);
  CHECK(half[0] == 0.5);
  CHECK(half[1] == 0.5);
  CHECK_THROWS_AS(occupation_measure(traj, 2, 0.0), std::invalid_argument);
}

TEST_CASE("same seed reproduces the run; different seeds differ") {
  ProductChain chain = testing::desk_product_chain(6);
  InsRun a = simulate_ins(chain, 20.0, 42);
  InsRun b = simulate_ins(chain, 20.0, 42);
  CHECK(a.traj.times == b.traj.times);
  CHECK(a.traj.states == b.traj.states);
  CHECK((a.acc.eta - b.acc.eta).lpNorm<Eigen::Infinity>() == 0.0);
  InsRun c = simulate_ins(chain, 20.0, 43);
  CHECK(a.traj.times != c.traj.times);
}

TEST_CASE("absorbing state dwells to the horizon") {
  SparseRates rates(2, 2);
  rates.makeCompressed();
  Generator gen =
      make_generator(std::move(rates), Eigen::VectorXd::Constant(2, 0.5));
  Trajectory traj = simulate_ctmc(gen, 5.0, 1, SimOptions{.initial = 1});
  CHECK(traj.times.size() == 1);
  Eigen::VectorXd occ = occupation_measure(traj, 2);
  CHECK(occ[0] == 0.0);
  CHECK(occ[1] == 1.0);
}

TEST_CASE("infinite-swapping accumulators are probability vectors") {
  ProductChain chain = testing::desk_product_chain(6, 0.9);
  SimOptions opts;
  opts.checkpoint_times = geometric_checkpoints(40.0, 3);
  InsRun run = simulate_ins(chain, 40.0, 5, opts);
  CHECK(run.acc.nu.sum() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(run.acc.eta.sum() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(run.acc.rho.sum() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(run.acc.beta.sum() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(run.acc.nu.minCoeff() >= 0.0);
  CHECK(run.acc.eta.minCoeff() >= 0.0);
  REQUIRE(run.acc.checkpoints.size() == 3);
  for (const auto& snap : run.acc.checkpoints) {
    CHECK(snap.nu.sum() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(snap.eta.sum() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(snap.rho.sum() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("association aggregation over permutations") {
  ProductChain k3 =
      make_product_chain(Grid{-1.5, 1.5, 4}, 1.0, {0.1, 0.3, 0.5});
  Eigen::VectorXd rho = Eigen::VectorXd::Constant(6, 1.0 / 6.0);
  Eigen::VectorXd beta = beta_from_rho(k3, rho);
  REQUIRE(beta.size() == 3);
  for (int k = 0; k < 3; ++k) {
    CHECK(beta[k] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }
  ProductChain k2 = testing::desk_product_chain(4);
  Eigen::VectorXd rho2(2);
  rho2 << 0.7, 0.3;
  Eigen::VectorXd beta2 = beta_from_rho(k2, rho2);
  CHECK(beta2[0] == 0.7);
  CHECK(beta2[1] == 0.3);
}

TEST_CASE("snapshots agree with the trajectory occupation") {
  ProductChain chain = testing::desk_product_chain(5);
  const double T = 30.0;
  SimOptions opts;
  opts.checkpoint_times = geometric_checkpoints(T, 4);
  InsRun run = simulate_ins(chain, T, 11, opts);
  REQUIRE(run.acc.checkpoints.size() == 4);
  for (std::size_t c = 0; c < 4; ++c) {
    const auto& snap = run.acc.checkpoints[c];
    CHECK(snap.time == opts.checkpoint_times[c]);
    Eigen::VectorXd occ =
        occupation_measure(run.traj, chain.states, snap.time);
    CHECK((snap.nu - occ).lpNorm<Eigen::Infinity>() < 1e-10);
  }
  Eigen::VectorXd full = occupation_measure(run.traj, chain.states);
  CHECK((run.acc.nu - full).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("weighted empirical measure matches a trajectory recomputation") {
  ProductChain chain = testing::desk_product_chain(5, 0.85);
  const double T = 25.0;
  InsRun run = simulate_ins(chain, T, 9);
  const int nperm = static_cast<int>(chain.perms.size());
  Eigen::VectorXd eta = Eigen::VectorXd::Zero(chain.states);
  Eigen::VectorXd rho = Eigen::VectorXd::Zero(nperm);
  for (std::size_t i = 0; i < run.traj.states.size(); ++i) {
    const double t0 = run.traj.times[i];
    const double t1 =
        (i + 1 < run.traj.times.size()) ? run.traj.times[i + 1] : T;
    const std::int64_t y = run.traj.states[i];
    const Eigen::VectorXd w = chain.rho_weights(y);
    for (int p = 0; p < nperm; ++p) {
      eta[chain.permuted_flat(y, p)] += w[p] * (t1 - t0);
      rho[p] += w[p] * (t1 - t0);
    }
  }
  eta /= T;
  rho /= T;
  CHECK((eta - run.acc.eta).lpNorm<Eigen::Infinity>() < 1e-10);
  CHECK((rho - run.acc.rho).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("swap-coupled run at zero intensity never swaps") {
  ProductChain chain = testing::desk_product_chain(6);
  SimOptions opts;
  opts.initial = chain.flat({1, 4});
  PtRun run = simulate_pt(chain, 0.0, 30.0, 21, opts);
  for (int z : run.traj.perms) CHECK(z == 0);
  CHECK(run.acc.rho[1] == 0.0);
  CHECK((run.acc.eta - run.acc.nu).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(run.acc.beta[0] == run.acc.rho[0]);
}

TEST_CASE("frozen positions isolate the swap mechanism") {
  // Two grid points with energies 0 and 0.3 at temperatures (0.5, 1.0): the
  // swapped assignment has stationary weight b/(1+b) with b = exp(-0.3).
  Grid grid{0.0, 1.0, 2};
  Eigen::VectorXd V(2);
  V << 0.0, 0.3;
  ProductChain chain = make_product_chain(grid, V, {0.5, 1.0});
  SimOptions opts;
  opts.initial = chain.flat({0, 1});
  opts.freeze_positions = true;
  PtRun run = simulate_pt(chain, 1.0, 5000.0, 31, opts);
  for (std::int64_t s : run.traj.states) CHECK(s == opts.initial);
  const double b = std::exp(-0.3);
  CHECK(std::abs(run.acc.rho[1] - b / (1.0 + b)) < 0.05);
  CHECK(run.acc.beta[1] == run.acc.rho[1]);
}

TEST_CASE("long infinite-swapping runs approach the symmetrized law") {
  ProductChain chain = testing::desk_product_chain(6);
  InsRun run = simulate_ins(chain, 4000.0, 13);
  CHECK(tv_distance(run.acc.nu, chain.symmetrized_measure()) < 0.1);
  CHECK(tv_distance(run.acc.eta, chain.product_measure()) < 0.1);
  CHECK(std::abs(run.acc.beta[0] - 0.5) < 0.05);
}

TEST_CASE("long swap-coupled runs approach their targets") {
  ProductChain chain = testing::desk_product_chain(6);
  PtRun run = simulate_pt(chain, 2.0, 4000.0, 15);
  CHECK(tv_distance(run.acc.nu, chain.symmetrized_measure()) < 0.12);
  CHECK(tv_distance(run.acc.eta, chain.product_measure()) < 0.12);
  CHECK(std::abs(run.acc.rho[0] - 0.5) < 0.06);
}

TEST_CASE("simulation inputs are validated") {
  ProductChain chain = testing::desk_product_chain(4);
  CHECK_THROWS_AS(simulate_ins(chain, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(simulate_ins(chain, 10.0, 1, SimOptions{.initial = -1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      simulate_ins(chain, 10.0, 1, SimOptions{.initial = chain.states}),
      std::invalid_argument);
  CHECK_THROWS_AS(simulate_pt(chain, -1.0, 10.0, 1), std::invalid_argument);
  ProductChain k3 =
      make_product_chain(Grid{-1.0, 1.0, 3}, 1.0, {0.1, 0.3, 0.5});
  CHECK_THROWS_AS(simulate_pt(k3, 1.0, 10.0, 1), std::invalid_argument);
  Generator gen = testing::two_state_unit();
  CHECK_THROWS_AS(simulate_ctmc(gen, -5.0, 1), std::invalid_argument);
}

}  // TEST_SUITE
