#include "inswap/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <vector>

#include "json.hpp"

#include "inswap/control.hpp"
#include "inswap/lagrange.hpp"
#include "inswap/ldp.hpp"
#include "inswap/manifest.hpp"
#include "inswap/parallel.hpp"
#include "inswap/rng.hpp"
#include "inswap/simulate.hpp"

namespace inswap {

namespace {

namespace fs = std::filesystem;

struct Emitter {
  const Config& cfg;
  fs::path dir;
  std::string hash;
  RunManifest manifest;
  std::chrono::steady_clock::time_point started;

  Emitter(const std::string& command, const Config& config,
          const std::string& out_dir)
      : cfg(config), dir(out_dir), started(std::chrono::steady_clock::now()) {
    fs::create_directories(dir);
    manifest.command = command;
    manifest.config_echo = canonical_json(cfg);
    hash = hex64(fnv1a64(manifest.config_echo));
    manifest.config_hash = hash;
    manifest.grid = cfg.grid;
    manifest.seed = cfg.seed;
  }

  CsvFile csv(const std::string& name, const std::vector<std::string>& cols) {
    manifest.outputs.push_back(name);
    return CsvFile((dir / name).string(), hash, cols);
  }

  void json_file(const std::string& name, const nlohmann::json& j) {
    manifest.outputs.push_back(name);
    std::ofstream out(dir / name);
    if (!out) throw std::runtime_error("cannot write output file: " + name);
    out << j.dump(2) << "\n";
  }

  void finish() {
    manifest.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      started)
            .count();
    write_manifest(manifest, (dir / "manifest.json").string());
  }
};

double beta_deviation(const Eigen::VectorXd& beta) {
  const double even = 1.0 / static_cast<double>(beta.size());
  return (beta.array() - even).abs().maxCoeff();
}

ProductChain chain_from(const Config& cfg) {
  return make_product_chain(cfg.grid, potential_values(cfg), cfg.temperatures);
}

ConstraintOptions constraint_options(const Config& cfg) {
  ConstraintOptions opts;
  opts.tol = cfg.constraint.tol;
  opts.max_iter = cfg.constraint.max_iter;
  return opts;
}

}  // namespace

void cmd_simulate(const Config& cfg, const std::string& out_dir) {
  Emitter em("simulate", cfg, out_dir);
  const ProductChain chain = chain_from(cfg);
  const Eigen::VectorXd mu = chain.product_measure();
  // Both dynamics track positions whose occupation converges to the
  // symmetrized law; the (position-swapped) eta converges to the product law.
  const Eigen::VectorXd nu_target = chain.symmetrized_measure();

  SimOptions opts;
  opts.checkpoint_times = geometric_checkpoints(cfg.horizon, cfg.checkpoints);

  struct ReplicaOut {
    OccupationAccumulators acc;
    std::int64_t jumps = 0;
  };
  std::vector<ReplicaOut> runs(static_cast<std::size_t>(cfg.replicas));
  parallel_for(cfg.replicas, cfg.jobs, [&](std::int64_t r) {
    const std::uint64_t seed = SplitMix64::stream(cfg.seed, r);
    if (cfg.dynamics == "ins") {
      InsRun run = simulate_ins(chain, cfg.horizon, seed, opts);
      runs[r] = {std::move(run.acc),
                 static_cast<std::int64_t>(run.traj.times.size())};
    } else {
      PtRun run = simulate_pt(chain, cfg.swap_rate, cfg.horizon, seed, opts);
      runs[r] = {std::move(run.acc),
                 static_cast<std::int64_t>(run.traj.times.size())};
    }
  });

  CsvFile occ = em.csv("occupation.csv",
                       {"replica", "time", "kind", "index", "value",
                        "value_raw"});
  auto emit_block = [&](std::int64_t r, double time, const char* kind,
                        const Eigen::VectorXd& values) {
    for (Eigen::Index i = 0; i < values.size(); ++i) {
      occ.row({CsvFile::num(r), CsvFile::sci(time), kind, CsvFile::num(i),
               CsvFile::sci(values[i]), CsvFile::raw(values[i])});
    }
  };
  CsvFile curves = em.csv("curves.csv",
                          {"replica", "time", "tv_eta", "tv_eta_raw", "tv_nu",
                           "tv_nu_raw", "beta_dev", "beta_dev_raw"});
  nlohmann::json replica_rows = nlohmann::json::array();
  for (std::int64_t r = 0; r < cfg.replicas; ++r) {
    const OccupationAccumulators& acc = runs[static_cast<std::size_t>(r)].acc;
    for (const auto& snap : acc.checkpoints) {
      emit_block(r, snap.time, "nu", snap.nu);
      emit_block(r, snap.time, "eta", snap.eta);
      emit_block(r, snap.time, "rho", snap.rho);
      emit_block(r, snap.time, "beta", snap.beta);
      const double tv_eta = tv_distance(snap.eta, mu);
      const double tv_nu = tv_distance(snap.nu, nu_target);
      const double dev = beta_deviation(snap.beta);
      curves.row({CsvFile::num(r), CsvFile::sci(snap.time),
                  CsvFile::sci(tv_eta), CsvFile::raw(tv_eta),
                  CsvFile::sci(tv_nu), CsvFile::raw(tv_nu), CsvFile::sci(dev),
                  CsvFile::raw(dev)});
    }
    nlohmann::json row;
    row["replica"] = r;
    row["jumps"] = runs[static_cast<std::size_t>(r)].jumps;
    row["tv_eta"] = tv_distance(acc.eta, mu);
    row["tv_nu"] = tv_distance(acc.nu, nu_target);
    row["beta"] = std::vector<double>(acc.beta.data(),
                                      acc.beta.data() + acc.beta.size());
    row["rho"] = std::vector<double>(acc.rho.data(),
                                     acc.rho.data() + acc.rho.size());
    replica_rows.push_back(row);
  }

  nlohmann::json summary;
  summary["dynamics"] = cfg.dynamics;
  summary["horizon"] = cfg.horizon;
  summary["replicas"] = cfg.replicas;
  summary["states"] = chain.states;
  summary["runs"] = replica_rows;
  double mean_tv = 0.0;
  for (const auto& row : replica_rows) mean_tv += row["tv_eta"].get<double>();
  summary["mean_tv_eta"] = mean_tv / static_cast<double>(cfg.replicas);
  em.json_file("summary.json", summary);
  em.finish();
}

void cmd_tables(const Config& cfg, const std::string& out_dir) {
  if (cfg.potential.type != "franz") {
    throw ConfigError(
        "tables sweep the double-well asymmetry; potential.type must be "
        "\"franz\"");
  }
  Emitter em("tables", cfg, out_dir);
  TableRequest req;
  req.grid = cfg.grid;
  req.taus = cfg.temperatures;
  req.alphas = cfg.tables.alphas;
  req.deltas = cfg.tables.deltas;
  req.opts = constraint_options(cfg);
  req.region_lo = cfg.region.lo;
  req.jobs = cfg.jobs;
  const TableData data = table_experiments(req);

  CsvFile t1 = em.csv("table1.csv", {"alpha", "kappa", "kappa_raw"});
  for (std::size_t a = 0; a < data.alphas.size(); ++a) {
    t1.row({CsvFile::raw(data.alphas[a]), CsvFile::sci(data.kappa[a]),
            CsvFile::raw(data.kappa[a])});
  }
  CsvFile t2 = em.csv("table2.csv", {"delta", "alpha", "rate", "rate_raw"});
  CsvFile t3 = em.csv("table3.csv",
                      {"delta", "alpha", "normalized", "normalized_raw"});
  for (std::size_t d = 0; d < data.deltas.size(); ++d) {
    for (std::size_t a = 0; a < data.alphas.size(); ++a) {
      const auto di = static_cast<Eigen::Index>(d);
      const auto ai = static_cast<Eigen::Index>(a);
      t2.row({CsvFile::raw(data.deltas[d]), CsvFile::raw(data.alphas[a]),
              CsvFile::sci(data.rate(di, ai)), CsvFile::raw(data.rate(di, ai))});
      t3.row({CsvFile::raw(data.deltas[d]), CsvFile::raw(data.alphas[a]),
              CsvFile::sci(data.normalized(di, ai)),
              CsvFile::raw(data.normalized(di, ai))});
    }
  }
  em.finish();
}

void cmd_value_function(const Config& cfg, const std::string& out_dir) {
  Emitter em("value-function", cfg, out_dir);
  Grid grid{cfg.grid.lo, cfg.grid.hi, cfg.value_function.n};
  const SingleTempChain chain =
      make_chain(grid, cfg.value_function.alpha, cfg.value_function.tau);
  const double kappa = mass_right(grid, chain.mu, cfg.region.lo);
  const double target = (1.0 - cfg.value_function.delta) * kappa;
  const ConstrainedResult res = min_rate_given_mass_single(
      chain, target, constraint_options(cfg), cfg.region.lo);

  const Eigen::VectorXd x = grid.points();
  const Eigen::VectorXd& W = res.W;
  CsvFile out = em.csv("value_function.csv",
                       {"x", "W", "W_raw", "right_tilt", "right_tilt_raw",
                        "left_tilt", "left_tilt_raw"});
  for (int i = 0; i < grid.n; ++i) {
    const double right =
        i + 1 < grid.n ? std::exp(W[i + 1] - W[i]) : 1.0;
    const double left = i > 0 ? std::exp(W[i - 1] - W[i]) : 1.0;
    out.row({CsvFile::raw(x[i]), CsvFile::sci(W[i]), CsvFile::raw(W[i]),
             CsvFile::sci(right), CsvFile::raw(right), CsvFile::sci(left),
             CsvFile::raw(left)});
  }

  nlohmann::json summary;
  summary["kappa"] = kappa;
  summary["target"] = target;
  summary["delta"] = cfg.value_function.delta;
  summary["lambda"] = res.lambda;
  summary["rate"] = res.rate;
  summary["achieved"] = res.achieved;
  summary["bellman_residual"] = res.bellman_residual;
  em.json_file("summary.json", summary);
  em.finish();
}

void cmd_diagnose(const Config& cfg, const std::string& out_dir) {
  Emitter em("diagnose", cfg, out_dir);
  const ProductChain chain = chain_from(cfg);
  const ConstraintOptions opts = constraint_options(cfg);

  std::vector<ConstrainedResult> results(cfg.diagnose.w1.size());
  parallel_for(static_cast<std::int64_t>(cfg.diagnose.w1.size()), cfg.jobs,
               [&](std::int64_t i) {
                 results[i] = min_rate_given_association(
                     chain, cfg.diagnose.w1[static_cast<std::size_t>(i)], opts);
               });

  CsvFile out = em.csv("diagnose.csv", {"w1", "rate", "rate_raw", "distance",
                                        "distance_raw"});
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    const ConstrainedResult& r = results[i];
    out.row({CsvFile::raw(cfg.diagnose.w1[i]), CsvFile::sci(r.rate),
             CsvFile::raw(r.rate), CsvFile::sci(r.image_gap),
             CsvFile::raw(r.image_gap)});
    nlohmann::json row;
    row["w1"] = cfg.diagnose.w1[i];
    row["rate"] = r.rate;
    row["distance"] = r.image_gap;
    row["lambda"] = r.lambda;
    row["achieved"] = r.achieved;
    rows.push_back(row);
  }
  nlohmann::json summary;
  summary["rows"] = rows;
  em.json_file("summary.json", summary);
  em.finish();
}

void cmd_rate(const Config& cfg, const std::string& out_dir) {
  Emitter em("rate", cfg, out_dir);
  const ProductChain chain = chain_from(cfg);
  const Generator gen = chain.ins();

  Eigen::VectorXd nu;
  if (cfg.rate.measure == "uniform") {
    nu = Eigen::VectorXd::Constant(chain.states,
                                   1.0 / static_cast<double>(chain.states));
  } else if (cfg.rate.measure == "product") {
    nu = chain.product_measure();
  } else if (cfg.rate.measure == "symmetrized") {
    nu = chain.symmetrized_measure();
  } else {
    nu = normalized(Eigen::Map<const Eigen::VectorXd>(
        cfg.rate.nu.data(), static_cast<Eigen::Index>(cfg.rate.nu.size())));
  }

  const double rate = rate_J(gen, nu);
  nlohmann::json summary;
  summary["measure"] = cfg.rate.measure;
  summary["states"] = chain.states;
  summary["rate"] = rate;
  em.json_file("rate.json", summary);
  em.finish();
  std::cout << "rate " << CsvFile::raw(rate) << "\n";
}

int run_command(const std::string& name, const Config& cfg,
                const std::string& out_dir) {
  try {
    if (name == "simulate") {
      cmd_simulate(cfg, out_dir);
    } else if (name == "tables") {
      cmd_tables(cfg, out_dir);
    } else if (name == "value-function") {
      cmd_value_function(cfg, out_dir);
    } else if (name == "diagnose") {
      cmd_diagnose(cfg, out_dir);
    } else if (name == "rate") {
      cmd_rate(cfg, out_dir);
    } else {
      std::cerr << "unknown command: " << name << "\n";
      return 2;
    }
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace inswap
