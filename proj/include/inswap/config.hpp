// Declarative experiment configuration: JSON file -> validated Config.
// Unknown keys are rejected with their full path; all validation failures
// are collected into one error before any compute starts.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "inswap/model.hpp"

namespace inswap {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PotentialConfig {
  std::string type = "franz";    // "franz" | "tabulated"
  double alpha = 1.0;            // franz asymmetry, in (0, 1]
  std::vector<double> values;    // tabulated: one energy per grid point
};

struct RegionConfig {
  double lo = 0.0;  // half-space threshold for mass constraints
};

struct ConstraintConfig {
  double tol = 1e-6;
  int max_iter = 200;
};

struct TablesConfig {
  std::vector<double> alphas{1.0, 0.97, 0.95, 0.90, 0.85};
  std::vector<double> deltas{0.05, 0.10, 0.15, 0.20};
};

struct ValueFunctionConfig {
  int n = 50;          // grid points for the single-temperature solve
  double tau = 0.1;
  double alpha = 1.0;
  double delta = 0.1;  // mass deficit; target = (1 - delta) * kappa
};

struct DiagnoseConfig {
  std::vector<double> w1{0.30, 0.35, 0.40, 0.45, 0.50};
};

struct RateConfig {
  std::string measure = "uniform";  // "uniform" | "product" | "symmetrized" | "custom"
  std::vector<double> nu;           // custom: one weight per product state
};

struct Config {
  Grid grid;  // defaults: [-1.5, 1.5], 12 points
  PotentialConfig potential;
  std::vector<double> temperatures{0.1, 0.5};
  double swap_rate = 1.0;      // PT swap-attempt intensity a
  std::string dynamics = "ins";  // "ins" | "pt"
  double horizon = 1000.0;
  int replicas = 1;
  std::uint64_t seed = 1;
  int checkpoints = 8;
  int jobs = 1;
  RegionConfig region;
  ConstraintConfig constraint;
  TablesConfig tables;
  ValueFunctionConfig value_function;
  DiagnoseConfig diagnose;
  RateConfig rate;
};

// Parse + validate a JSON document (text). Throws ConfigError listing every
// problem with its field path.
Config parse_config(const std::string& json_text);

// Read the file and parse it. A missing or unreadable file is a ConfigError.
Config load_config(const std::string& path);

// Canonical serialization (sorted keys, full precision) used for the config
// hash and for echoing the effective config into manifests.
std::string canonical_json(const Config& cfg);

// Potential over the configured grid (franz family or tabulated values).
Eigen::VectorXd potential_values(const Config& cfg);

}  // namespace inswap
