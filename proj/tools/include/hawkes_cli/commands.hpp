#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "hawkes_cli/manifest.hpp"

namespace hawkes::cli {

// Every option struct round-trips through JSON; the manifest stores the
// resolved struct so that `hawkes replay` can run the command again.

struct SimulateOptions {
  std::string model;
  std::string out;  // .hev path; the manifest goes to <out>.manifest.json
  double horizon = 0.0;
  std::uint64_t seed = 1;
  double burn_in = -1.0;  // < 0: ten times the longest kernel support
  double tail_fraction = 1e-2;
  std::uint64_t max_events = 50'000'000;
};

struct EstimateOptions {
  std::string events;
  std::string out;  // directory
  std::string h = "auto";
  std::string Q = "auto";
  double t_max = 0.0;
  std::string bins;  // empty: count=20 for marked components
  std::uint64_t grid = 0;
  int kernel_order = 0;
  int blocks = 10;
  std::string h_grid;  // lo:hi:n geometric, or a comma list; empty: automatic
  int Q0 = 16;
  int Q_cap = 128;
  double Q_threshold = 0.01;
  std::string primitive = "count";
  double rcond = 1e-13;
  unsigned threads = 0;
};

struct BandwidthOptions {
  std::string events;
  std::string out;  // directory
  double t_max = 0.0;
  int i = -1;  // -1: all pairs
  int j = -1;
  std::string h_grid;
  int blocks = 10;
  int kernel_order = 0;
  std::string model;  // optional true model: adds the integrated squared error column
  unsigned threads = 0;
};

struct OracleOptions {
  std::string model;
  std::string out;  // directory
  double t_max = 0.0;           // g is written on [-t_max, t_max]
  double step = 0.01;
  double oracle_horizon = 0.0;  // 0: 10 t_max
};

struct GofOptions {
  std::string events;
  std::string estimate;  // directory written by `estimate` (its model.cfg is used)
  std::string model;     // or an explicit model config
  std::string out;       // directory
  std::uint64_t last = 0;
  double tail_fraction = 1e-6;
  std::uint64_t min_events = 100;
};

struct ImportOptions {
  std::string csv;
  std::string out;
  std::string time_col = "0";
  std::string mark_col;
  std::string component_col;
  std::string delimiter = ",";
  bool header = true;
  double horizon = 0.0;
  bool shift = false;
  bool drop_duplicates = false;
};

void to_json(nlohmann::json& j, const SimulateOptions& o);
void from_json(const nlohmann::json& j, SimulateOptions& o);
void to_json(nlohmann::json& j, const EstimateOptions& o);
void from_json(const nlohmann::json& j, EstimateOptions& o);
void to_json(nlohmann::json& j, const BandwidthOptions& o);
void from_json(const nlohmann::json& j, BandwidthOptions& o);
void to_json(nlohmann::json& j, const OracleOptions& o);
void from_json(const nlohmann::json& j, OracleOptions& o);
void to_json(nlohmann::json& j, const GofOptions& o);
void from_json(const nlohmann::json& j, GofOptions& o);
void to_json(nlohmann::json& j, const ImportOptions& o);
void from_json(const nlohmann::json& j, ImportOptions& o);

// Each command writes its outputs plus a manifest and returns the manifest.
// Library errors propagate (ConfigError/ParseError: usage, NumericalError: numerical).
RunManifest run_simulate(SimulateOptions o, std::ostream& log);
RunManifest run_estimate(EstimateOptions o, std::ostream& log);
RunManifest run_bandwidth(BandwidthOptions o, std::ostream& log);
RunManifest run_oracle(OracleOptions o, std::ostream& log);
RunManifest run_gof(GofOptions o, std::ostream& log);
RunManifest run_import(ImportOptions o, std::ostream& log);

/// Runs the command recorded in a manifest. With check, the new output digests
/// must equal the recorded ones (NumericalError otherwise).
RunManifest replay(const RunManifest& m, bool check, std::ostream& log);

/// Where a command writes its manifest.
std::filesystem::path manifest_path(const std::string& command, const std::string& out);

}  // namespace hawkes::cli
