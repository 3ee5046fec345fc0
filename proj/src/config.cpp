#include "inswap/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace inswap {

namespace {

using nlohmann::json;

class Validator {
 public:
  void fail(const std::string& path, const std::string& what) {
    errors_.push_back(path + ": " + what);
  }

  void reject_unknown(const json& obj, const std::string& path,
                      const std::set<std::string>& allowed) {
    for (const auto& [key, value] : obj.items()) {
      (void)value;
      if (!allowed.count(key)) {
        fail(path.empty() ? key : path + "." + key, "unknown key");
      }
    }
  }

  bool get_number(const json& obj, const std::string& path,
                  const std::string& key, double& out) {
    if (!obj.contains(key)) return false;
    const json& v = obj.at(key);
    if (!v.is_number()) {
      fail(join(path, key), "expected a number");
      return false;
    }
    out = v.get<double>();
    return true;
  }

  bool get_int(const json& obj, const std::string& path, const std::string& key,
               int& out) {
    if (!obj.contains(key)) return false;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) {
      fail(join(path, key), "expected an integer");
      return false;
    }
    out = v.get<int>();
    return true;
  }

  bool get_u64(const json& obj, const std::string& path, const std::string& key,
               std::uint64_t& out) {
    if (!obj.contains(key)) return false;
    const json& v = obj.at(key);
    if (!v.is_number_unsigned() && !v.is_number_integer()) {
      fail(join(path, key), "expected a nonnegative integer");
      return false;
    }
    if (v.is_number_integer() && v.get<std::int64_t>() < 0) {
      fail(join(path, key), "expected a nonnegative integer");
      return false;
    }
    out = v.get<std::uint64_t>();
    return true;
  }

  bool get_string(const json& obj, const std::string& path,
                  const std::string& key, std::string& out) {
    if (!obj.contains(key)) return false;
    const json& v = obj.at(key);
    if (!v.is_string()) {
      fail(join(path, key), "expected a string");
      return false;
    }
    out = v.get<std::string>();
    return true;
  }

  bool get_numbers(const json& obj, const std::string& path,
                   const std::string& key, std::vector<double>& out) {
    if (!obj.contains(key)) return false;
    const json& v = obj.at(key);
    if (!v.is_array()) {
      fail(join(path, key), "expected an array of numbers");
      return false;
    }
    std::vector<double> vals;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) {
        fail(join(path, key) + "[" + std::to_string(i) + "]",
             "expected a number");
        return false;
      }
      vals.push_back(v[i].get<double>());
    }
    out = std::move(vals);
    return true;
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }

  void throw_if_failed() const {
    if (errors_.empty()) return;
    std::ostringstream msg;
    msg << "invalid config:";
    for (const auto& e : errors_) msg << "\n  " << e;
    throw ConfigError(msg.str());
  }

  bool failed() const { return !errors_.empty(); }

 private:
  std::vector<std::string> errors_;
};

void parse_grid(Validator& v, const json& j, Grid& grid) {
  v.reject_unknown(j, "grid", {"lo", "hi", "n"});
  v.get_number(j, "grid", "lo", grid.lo);
  v.get_number(j, "grid", "hi", grid.hi);
  v.get_int(j, "grid", "n", grid.n);
  if (grid.n < 2) v.fail("grid.n", "need at least 2 points");
  if (!(grid.lo < grid.hi)) v.fail("grid", "need lo < hi");
}

void parse_potential(Validator& v, const json& j, PotentialConfig& pot) {
  v.reject_unknown(j, "potential", {"type", "alpha", "values"});
  v.get_string(j, "potential", "type", pot.type);
  v.get_number(j, "potential", "alpha", pot.alpha);
  v.get_numbers(j, "potential", "values", pot.values);
  if (pot.type != "franz" && pot.type != "tabulated") {
    v.fail("potential.type", "expected \"franz\" or \"tabulated\"");
  }
  if (pot.type == "franz" && !(pot.alpha > 0.0 && pot.alpha <= 1.0)) {
    v.fail("potential.alpha", "asymmetry must lie in (0, 1]");
  }
  if (pot.type == "tabulated" && pot.values.empty()) {
    v.fail("potential.values", "tabulated potential needs values");
  }
}

void parse_constraint(Validator& v, const json& j, ConstraintConfig& c) {
  v.reject_unknown(j, "constraint", {"tol", "max_iter"});
  v.get_number(j, "constraint", "tol", c.tol);
  v.get_int(j, "constraint", "max_iter", c.max_iter);
  if (!(c.tol > 0.0)) v.fail("constraint.tol", "must be positive");
  if (c.max_iter < 1) v.fail("constraint.max_iter", "must be at least 1");
}

void parse_tables(Validator& v, const json& j, TablesConfig& t) {
  v.reject_unknown(j, "tables", {"alphas", "deltas"});
  v.get_numbers(j, "tables", "alphas", t.alphas);
  v.get_numbers(j, "tables", "deltas", t.deltas);
  if (t.alphas.empty()) v.fail("tables.alphas", "must be nonempty");
  if (t.deltas.empty()) v.fail("tables.deltas", "must be nonempty");
  for (std::size_t i = 0; i < t.alphas.size(); ++i) {
    if (!(t.alphas[i] > 0.0 && t.alphas[i] <= 1.0)) {
      v.fail("tables.alphas[" + std::to_string(i) + "]",
             "asymmetry must lie in (0, 1]");
    }
  }
  for (std::size_t i = 0; i < t.deltas.size(); ++i) {
    if (!(t.deltas[i] >= 0.0 && t.deltas[i] < 1.0)) {
      v.fail("tables.deltas[" + std::to_string(i) + "]",
             "deficit must lie in [0, 1)");
    }
  }
}

void parse_value_function(Validator& v, const json& j, ValueFunctionConfig& f) {
  v.reject_unknown(j, "value_function", {"n", "tau", "alpha", "delta"});
  v.get_int(j, "value_function", "n", f.n);
  v.get_number(j, "value_function", "tau", f.tau);
  v.get_number(j, "value_function", "alpha", f.alpha);
  v.get_number(j, "value_function", "delta", f.delta);
  if (f.n < 2) v.fail("value_function.n", "need at least 2 points");
  if (!(f.tau > 0.0)) v.fail("value_function.tau", "temperature must be positive");
  if (!(f.alpha > 0.0 && f.alpha <= 1.0)) {
    v.fail("value_function.alpha", "asymmetry must lie in (0, 1]");
  }
  if (!(f.delta >= 0.0 && f.delta < 1.0)) {
    v.fail("value_function.delta", "deficit must lie in [0, 1)");
  }
}

void parse_diagnose(Validator& v, const json& j, DiagnoseConfig& d) {
  v.reject_unknown(j, "diagnose", {"w1"});
  v.get_numbers(j, "diagnose", "w1", d.w1);
  if (d.w1.empty()) v.fail("diagnose.w1", "must be nonempty");
  for (std::size_t i = 0; i < d.w1.size(); ++i) {
    if (!(d.w1[i] > 0.0 && d.w1[i] < 1.0)) {
      v.fail("diagnose.w1[" + std::to_string(i) + "]",
             "association target must lie in (0, 1)");
    }
  }
}

void parse_rate(Validator& v, const json& j, RateConfig& r) {
  v.reject_unknown(j, "rate", {"measure", "nu"});
  v.get_string(j, "rate", "measure", r.measure);
  v.get_numbers(j, "rate", "nu", r.nu);
  static const std::set<std::string> kinds{"uniform", "product", "symmetrized",
                                           "custom"};
  if (!kinds.count(r.measure)) {
    v.fail("rate.measure",
           "expected \"uniform\", \"product\", \"symmetrized\" or \"custom\"");
  }
  if (r.measure == "custom") {
    if (r.nu.empty()) {
      v.fail("rate.nu", "custom measure needs weights");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < r.nu.size(); ++i) {
      if (r.nu[i] < 0.0) {
        v.fail("rate.nu[" + std::to_string(i) + "]", "must be nonnegative");
      }
      total += r.nu[i];
    }
    if (!(total > 0.0)) v.fail("rate.nu", "weights must have positive mass");
  }
}

}  // namespace

Config parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");

  Validator v;
  Config cfg;
  v.reject_unknown(j, "",
                   {"grid", "potential", "temperatures", "swap_rate",
                    "dynamics", "horizon", "replicas", "seed", "checkpoints",
                    "jobs", "region", "constraint", "tables", "value_function",
                    "diagnose", "rate"});

  if (j.contains("grid") && j["grid"].is_object()) {
    parse_grid(v, j["grid"], cfg.grid);
  } else if (j.contains("grid")) {
    v.fail("grid", "expected an object");
  }
  if (j.contains("potential") && j["potential"].is_object()) {
    parse_potential(v, j["potential"], cfg.potential);
  } else if (j.contains("potential")) {
    v.fail("potential", "expected an object");
  }

  v.get_numbers(j, "", "temperatures", cfg.temperatures);
  if (cfg.temperatures.empty() || cfg.temperatures.size() > 6) {
    v.fail("temperatures", "need between 1 and 6 temperatures");
  }
  for (std::size_t i = 0; i < cfg.temperatures.size(); ++i) {
    if (!(cfg.temperatures[i] > 0.0)) {
      v.fail("temperatures[" + std::to_string(i) + "]", "must be positive");
    }
  }

  v.get_number(j, "", "swap_rate", cfg.swap_rate);
  if (cfg.swap_rate < 0.0) v.fail("swap_rate", "must be nonnegative");
  v.get_string(j, "", "dynamics", cfg.dynamics);
  if (cfg.dynamics != "ins" && cfg.dynamics != "pt") {
    v.fail("dynamics", "expected \"ins\" or \"pt\"");
  }
  v.get_number(j, "", "horizon", cfg.horizon);
  if (!(cfg.horizon > 0.0)) v.fail("horizon", "must be positive");
  v.get_int(j, "", "replicas", cfg.replicas);
  if (cfg.replicas < 1) v.fail("replicas", "need at least 1 replica");
  v.get_u64(j, "", "seed", cfg.seed);
  v.get_int(j, "", "checkpoints", cfg.checkpoints);
  if (cfg.checkpoints < 1) v.fail("checkpoints", "need at least 1 checkpoint");
  v.get_int(j, "", "jobs", cfg.jobs);
  if (cfg.jobs < 1) v.fail("jobs", "need at least 1 worker");

  if (j.contains("region") && j["region"].is_object()) {
    v.reject_unknown(j["region"], "region", {"lo"});
    v.get_number(j["region"], "region", "lo", cfg.region.lo);
  } else if (j.contains("region")) {
    v.fail("region", "expected an object");
  }
  if (j.contains("constraint") && j["constraint"].is_object()) {
    parse_constraint(v, j["constraint"], cfg.constraint);
  } else if (j.contains("constraint")) {
    v.fail("constraint", "expected an object");
  }
  if (j.contains("tables") && j["tables"].is_object()) {
    parse_tables(v, j["tables"], cfg.tables);
  } else if (j.contains("tables")) {
    v.fail("tables", "expected an object");
  }
  if (j.contains("value_function") && j["value_function"].is_object()) {
    parse_value_function(v, j["value_function"], cfg.value_function);
  } else if (j.contains("value_function")) {
    v.fail("value_function", "expected an object");
  }
  if (j.contains("diagnose") && j["diagnose"].is_object()) {
    parse_diagnose(v, j["diagnose"], cfg.diagnose);
  } else if (j.contains("diagnose")) {
    v.fail("diagnose", "expected an object");
  }
  if (j.contains("rate") && j["rate"].is_object()) {
    parse_rate(v, j["rate"], cfg.rate);
  } else if (j.contains("rate")) {
    v.fail("rate", "expected an object");
  }

  // Cross-field checks only when the fields themselves parsed.
  if (!v.failed()) {
    if (cfg.potential.type == "tabulated" &&
        static_cast<int>(cfg.potential.values.size()) != cfg.grid.n) {
      v.fail("potential.values", "need exactly grid.n = " +
                                     std::to_string(cfg.grid.n) + " values");
    }
    if (cfg.rate.measure == "custom") {
      double want = 1.0;
      for (std::size_t k = 0; k < cfg.temperatures.size(); ++k) {
        want *= cfg.grid.n;
      }
      if (static_cast<double>(cfg.rate.nu.size()) != want) {
        v.fail("rate.nu", "need one weight per product state (grid.n ^ K)");
      }
    }
  }

  v.throw_if_failed();
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string canonical_json(const Config& cfg) {
  json j;
  j["grid"] = {{"lo", cfg.grid.lo}, {"hi", cfg.grid.hi}, {"n", cfg.grid.n}};
  j["potential"] = {{"type", cfg.potential.type},
                    {"alpha", cfg.potential.alpha},
                    {"values", cfg.potential.values}};
  j["temperatures"] = cfg.temperatures;
  j["swap_rate"] = cfg.swap_rate;
  j["dynamics"] = cfg.dynamics;
  j["horizon"] = cfg.horizon;
  j["replicas"] = cfg.replicas;
  j["seed"] = cfg.seed;
  j["checkpoints"] = cfg.checkpoints;
  // jobs is an execution knob, not part of the experiment: results are
  // byte-identical across worker counts, so the hash must be too.
  j["region"] = {{"lo", cfg.region.lo}};
  j["constraint"] = {{"tol", cfg.constraint.tol},
                     {"max_iter", cfg.constraint.max_iter}};
  j["tables"] = {{"alphas", cfg.tables.alphas}, {"deltas", cfg.tables.deltas}};
  j["value_function"] = {{"n", cfg.value_function.n},
                         {"tau", cfg.value_function.tau},
                         {"alpha", cfg.value_function.alpha},
                         {"delta", cfg.value_function.delta}};
  j["diagnose"] = {{"w1", cfg.diagnose.w1}};
  j["rate"] = {{"measure", cfg.rate.measure}, {"nu", cfg.rate.nu}};
  return j.dump();
}

Eigen::VectorXd potential_values(const Config& cfg) {
  if (cfg.potential.type == "tabulated") {
    return Eigen::Map<const Eigen::VectorXd>(
        cfg.potential.values.data(),
        static_cast<Eigen::Index>(cfg.potential.values.size()));
  }
  return double_well_potential(cfg.grid.points(), cfg.potential.alpha);
}

}  // namespace inswap
