#include "inswap/manifest.hpp"

#include <cstdio>
#include <stdexcept>

#include "json.hpp"

namespace inswap {

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(value));
  return buf;
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
  nlohmann::json j;
  j["command"] = manifest.command;
  j["version"] = manifest.version;
  j["config_hash"] = manifest.config_hash;
  j["grid"] = {{"lo", manifest.grid.lo},
               {"hi", manifest.grid.hi},
               {"n", manifest.grid.n}};
  j["seed"] = manifest.seed;
  j["wall_seconds"] = manifest.wall_seconds;
  j["outputs"] = manifest.outputs;
  j["config"] = nlohmann::json::parse(manifest.config_echo);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write manifest: " + path);
  out << j.dump(2) << "\n";
}

CsvFile::CsvFile(const std::string& path, const std::string& config_hash,
                 const std::vector<std::string>& columns)
    : out_(path), columns_(columns.size()) {
  if (!out_) throw std::runtime_error("cannot write output file: " + path);
  out_ << "# manifest=manifest.json config=" << config_hash << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
  }
}

void CsvFile::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) {
    throw std::logic_error("csv row width does not match header");
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    out_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
  }
}

std::string CsvFile::sci(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4e", value);
  return buf;
}

std::string CsvFile::raw(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string CsvFile::num(std::int64_t value) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(value));
  return buf;
}

}  // namespace inswap
