// Run manifests (config hash, version, grid echo, timing, output list) and
// CSV emission with paired display/raw numeric columns.
#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "inswap/model.hpp"

namespace inswap {

inline constexpr const char* kVersion = "0.1.0";

// FNV-1a over the canonical config serialization.
std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t value);

struct RunManifest {
  std::string command;
  std::string config_hash;  // hex64 of the canonical config
  std::string version = kVersion;
  Grid grid;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
  std::vector<std::string> outputs;  // file names relative to the out dir
  std::string config_echo;           // canonical config JSON
};

void write_manifest(const RunManifest& manifest, const std::string& path);

// One CSV output file. The first line references the producing manifest and
// config hash, the second is the header row. Rates and other reals are
// written twice: a 5-significant-digit scientific display column and a
// full-precision raw column.
class CsvFile {
 public:
  CsvFile(const std::string& path, const std::string& config_hash,
          const std::vector<std::string>& columns);

  void row(const std::vector<std::string>& cells);

  static std::string sci(double value);  // %.4e
  static std::string raw(double value);  // %.17g
  static std::string num(std::int64_t value);

 private:
  std::ofstream out_;
  std::size_t columns_ = 0;
};

}  // namespace inswap
