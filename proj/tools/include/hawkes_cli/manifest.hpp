#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hawkes::cli {

/// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Record of one command run. Contains no timestamps or host data, so two runs
/// with the same resolved configuration produce identical manifests.
struct RunManifest {
  std::string command;
  nlohmann::json config;   // every option, defaults materialized
  nlohmann::json results;  // selected h, Q, summary statistics
  std::vector<std::pair<std::string, std::string>> inputs;   // (path, sha256)
  std::vector<std::pair<std::string, std::string>> outputs;  // (path relative to the output root, sha256)
  std::vector<std::string> warnings;

  void add_input(const std::filesystem::path& p);
  /// Digests of the given files, recorded relative to root.
  void add_outputs(const std::filesystem::path& root, const std::vector<std::filesystem::path>& files);

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);

  void save(const std::filesystem::path& path) const;
  static RunManifest load(const std::filesystem::path& path);
};

std::string tool_version();

}  // namespace hawkes::cli
