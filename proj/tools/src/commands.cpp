#include "hawkes_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "hawkes/bandwidth.hpp"
#include "hawkes/diagnostics.hpp"
#include "hawkes/error.hpp"
#include "hawkes/estimate.hpp"
#include "hawkes/events.hpp"
#include "hawkes/format.hpp"
#include "hawkes/gof.hpp"
#include "hawkes/oracle.hpp"
#include "hawkes/simulate.hpp"
#include "hawkes_cli/bins_spec.hpp"
#include "hawkes_cli/model_config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace hawkes::cli {

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SimulateOptions, model, out, horizon, seed, burn_in, tail_fraction, max_events)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(EstimateOptions, events, out, h, Q, t_max, bins, grid, kernel_order, blocks, h_grid,
                                   Q0, Q_cap, Q_threshold, primitive, rcond, threads)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(BandwidthOptions, events, out, t_max, i, j, h_grid, blocks, kernel_order, model,
                                   threads)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(OracleOptions, model, out, t_max, step, oracle_horizon)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(GofOptions, events, estimate, model, out, last, tail_fraction, min_events)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ImportOptions, csv, out, time_col, mark_col, component_col, delimiter, header,
                                   horizon, shift, drop_duplicates)

namespace {

// Routes library warnings to the log and into the manifest.
class WarningLog {
 public:
  WarningLog(RunManifest& m, std::ostream& log)
      : capture_([&m, &log](std::string_view w) {
          m.warnings.emplace_back(w);
          log << "warning: " << w << '\n';
        }) {}

 private:
  ScopedWarningCapture capture_;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void make_dir(const std::string& dir) {
  require(!dir.empty(), "--out is required");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create directory " + dir + ": " + ec.message());
}

fs::path parent_or_cwd(const std::string& file) {
  const fs::path p = fs::path(file).parent_path();
  return p.empty() ? fs::path(".") : p;
}

std::string pair_name(const std::string& stem, int i, int j) {
  return stem + "_" + std::to_string(i) + "_" + std::to_string(j) + ".csv";
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

// NaN is not representable in JSON; undefined levels are written as null.
json levels_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(std::isnan(x) ? json(nullptr) : json(x));
  return a;
}

std::vector<double> parse_h_grid(const std::string& text) {
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::istringstream in(text);
    for (std::string p; std::getline(in, p, ':');) parts.push_back(p);
    require(parts.size() == 3, "--h-grid expects lo:hi:n or a comma list");
    return geometric_grid(parse_double(parts[0]), parse_double(parts[1]),
                          static_cast<std::size_t>(parse_integer(parts[2])));
  }
  std::vector<double> grid;
  std::istringstream in(text);
  for (std::string p; std::getline(in, p, ',');) grid.push_back(parse_double(p));
  require(!grid.empty(), "--h-grid is empty");
  for (std::size_t k = 1; k < grid.size(); ++k) require(grid[k] > grid[k - 1], "--h-grid must be increasing");
  return grid;
}

std::string grid_text(const std::vector<double>& g) {
  std::string out;
  for (std::size_t k = 0; k < g.size(); ++k) out += (k ? "," : "") + format_double(g[k]);
  return out;
}

std::vector<double> scan_json_values(const BandwidthScan& s) { return s.values; }

}  // namespace

fs::path manifest_path(const std::string& command, const std::string& out) {
  if (command == "simulate" || command == "import") return fs::path(out + ".manifest.json");
  return fs::path(out) / "manifest.json";
}

RunManifest run_simulate(SimulateOptions o, std::ostream& log) {
  RunManifest man;
  man.command = "simulate";
  WarningLog wl(man, log);
  require(!o.out.empty(), "--out is required");
  require(o.horizon > 0.0, "--horizon must be > 0");
  const HawkesModel model = load_model_config(o.model);
  if (o.burn_in < 0.0) o.burn_in = default_burn_in(model, o.tail_fraction);
  SimConfig c;
  c.horizon = o.horizon;
  c.seed = o.seed;
  c.burn_in = o.burn_in;
  c.tail_fraction = o.tail_fraction;
  c.max_events = static_cast<std::size_t>(o.max_events);
  const SimResult r = simulate(model, c);
  save_events(o.out, r.events);

  man.config = o;
  man.add_input(o.model);
  man.add_outputs(parent_or_cwd(o.out), {o.out});
  json counts = json::array();
  for (int j = 0; j < r.events.dim(); ++j) counts.push_back(r.events.size(j));
  man.results = {{"events", counts}, {"candidates", r.candidates}, {"burn_in", r.burn_in}};
  man.save(manifest_path(man.command, o.out));
  log << "simulated " << r.events.total_size() << " events on [0, " << format_double(o.horizon) << "]\n";
  return man;
}

RunManifest run_estimate(EstimateOptions o, std::ostream& log) {
  RunManifest man;
  man.command = "estimate";
  WarningLog wl(man, log);
  make_dir(o.out);
  require(o.t_max > 0.0, "--tmax must be > 0");
  require(o.primitive == "count" || o.primitive == "trapezoid", "--primitive must be count or trapezoid");
  EventSeries s = load_events(o.events);

  EstimationConfig c;
  c.t_max = o.t_max;
  c.h = o.h == "auto" ? 0.0 : parse_double(o.h);
  require(o.h == "auto" || c.h > 0.0, "--h must be auto or > 0");
  c.Q = o.Q == "auto" ? 0 : static_cast<int>(parse_integer(o.Q));
  require(o.Q == "auto" || c.Q >= 1, "--Q must be auto or >= 1");
  c.Q0 = o.Q0;
  c.Q_cap = o.Q_cap;
  c.Q_threshold = o.Q_threshold;
  c.kernel_order = o.kernel_order;
  c.blocks = o.blocks;
  c.grid_points = static_cast<std::size_t>(o.grid);
  c.primitive = o.primitive == "count" ? PrimitiveMode::Count : PrimitiveMode::Trapezoid;
  c.rcond_threshold = o.rcond;
  c.threads = o.threads;

  bool any_marked = false;
  for (int j = 0; j < s.dim(); ++j) any_marked = any_marked || s.marked(j);
  if (o.bins.empty()) o.bins = any_marked ? "count=20" : "none";
  const BinsSpec bins = parse_bins_spec(o.bins);
  o.bins = to_string(bins);
  if (bins.kind == BinsSpec::Kind::None && any_marked) s = s.without_marks();
  c.bin_edges = resolve_bin_edges(bins, s);
  if (o.h == "auto") {
    if (o.h_grid.empty()) o.h_grid = grid_text(default_h_grid(s, o.t_max));
    c.h_grid = parse_h_grid(o.h_grid);
  }

  const EstimationResult r = estimate(s, c);
  if (o.grid == 0) o.grid = r.config.grid_points;
  const int D = s.dim();
  std::vector<fs::path> files;
  for (int i = 0; i < D; ++i) {
    for (int j = 0; j < D; ++j) {
      files.push_back(fs::path(o.out) / pair_name("kernel", i, j));
      write_kernel_csv(files.back().string(), r.kernels, i, j);
    }
  }
  json scans = json::array();
  for (std::size_t k = 0; k < r.scans.size(); ++k) {
    const int i = static_cast<int>(k) / D, j = static_cast<int>(k) % D;
    files.push_back(fs::path(o.out) / pair_name("bandwidth", i, j));
    write_bandwidth_csv(files.back().string(), r.scans[k]);
    scans.push_back({{"i", i}, {"j", j}, {"h", r.scans[k].grid}, {"contrast", scan_json_values(r.scans[k])},
                     {"h_star", r.scans[k].h_star}});
  }

  json levels = json::array(), edges = json::array();
  for (const auto& l : r.solution.levels) levels.push_back(levels_json(l));
  for (const auto& b : r.bins) edges.push_back(b.size() > 1 ? b.edges : std::vector<double>{});
  json summary = {{"dim", D},
                  {"rates", vector_json(r.rates)},
                  {"baseline", vector_json(r.baseline)},
                  {"norms", matrix_json(r.solution.norms)},
                  {"spectral_radius", r.solution.spectral_radius},
                  {"stable", r.solution.stable},
                  {"rcond", r.solution.rcond},
                  {"relative_residual", r.solution.relative_residual},
                  {"h", matrix_json(r.h)},
                  {"Q", r.config.Q},
                  {"bin_edges", edges},
                  {"levels", levels},
                  {"bandwidth", scans}};
  if (r.q_selection) {
    json hist = json::array();
    for (const auto& [q, R] : r.q_selection->history) hist.push_back({{"Q", q}, {"R", R}});
    summary["q_selection"] = {{"Q", r.q_selection->Q},
                              {"R", r.q_selection->R},
                              {"converged", r.q_selection->converged},
                              {"degenerate", r.q_selection->degenerate},
                              {"history", hist}};
  }
  files.push_back(fs::path(o.out) / "summary.json");
  {
    std::ofstream f(files.back());
    f << summary.dump(2) << '\n';
  }
  files.push_back(fs::path(o.out) / "model.cfg");
  const HawkesModel fitted = estimated_model(r, s);
  save_model_config(files.back(), fitted);
  for (int j = 0; j < D; ++j) {
    const fs::path p = fs::path(o.out) / ("marks_" + std::to_string(j) + ".txt");
    if (fs::exists(p)) files.push_back(p);
  }

  man.config = o;
  man.add_input(o.events);
  man.add_outputs(o.out, files);
  man.results = summary;
  man.save(manifest_path(man.command, o.out));

  log << "Q = " << r.config.Q << ", spectral radius " << format_double(r.solution.spectral_radius)
      << (r.solution.stable ? "" : " (unstable)") << '\n';
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j)
      log << "h[" << i << "][" << j << "] = " << format_double(r.h(i, j)) << "  ||phi|| = "
          << format_double(r.solution.norms(i, j)) << '\n';
  return man;
}

RunManifest run_bandwidth(BandwidthOptions o, std::ostream& log) {
  RunManifest man;
  man.command = "bandwidth";
  WarningLog wl(man, log);
  make_dir(o.out);
  require(o.t_max > 0.0, "--tmax must be > 0");
  const EventSeries s = load_events(o.events);
  const int D = s.dim();
  require((o.i < 0) == (o.j < 0), "--i and --j go together");
  require(o.i < D && o.j < D, "component index out of range");
  if (o.h_grid.empty()) o.h_grid = grid_text(default_h_grid(s, o.t_max));
  const std::vector<double> grid = parse_h_grid(o.h_grid);

  BandwidthConfig bc;
  bc.t_max = o.t_max;
  bc.blocks = o.blocks;
  bc.kernel = SmoothingKernel(o.kernel_order);
  bc.threads = o.threads;

  std::optional<OracleTable> truth;
  if (!o.model.empty()) {
    const HawkesModel m = load_model_config(o.model);
    OracleConfig oc;
    oc.step = std::min(0.01, grid.front() / 4.0);
    oc.horizon = 10.0 * (o.t_max + grid.back());
    oc.output_horizon = 2.0 * (o.t_max + grid.back());
    truth = oracle_g(m, oc);
    man.add_input(o.model);
  }

  std::vector<std::pair<int, int>> pairs;
  if (o.i >= 0)
    pairs.emplace_back(o.i, o.j);
  else
    for (int i = 0; i < D; ++i)
      for (int j = 0; j < D; ++j) pairs.emplace_back(i, j);

  std::vector<fs::path> files;
  json results = json::array();
  for (const auto& [i, j] : pairs) {
    const BandwidthScan scan = select_bandwidth(s, i, j, grid, bc);
    std::vector<double> ise;
    if (truth) {
      for (double h : grid)
        ise.push_back(integrated_squared_error(
            s, i, j, h, o.t_max, [&, a = i, b = j](double t) { return truth->g(a, b, t); }, bc.kernel));
    }
    files.push_back(fs::path(o.out) / pair_name("bandwidth", i, j));
    std::ofstream f(files.back());
    if (!f) throw ConfigError("cannot write " + files.back().string());
    f << "h,contrast" << (truth ? ",ise" : "") << '\n';
    for (std::size_t k = 0; k < grid.size(); ++k) {
      f << format_double(grid[k]) << ',' << format_double(scan.values[k]);
      if (truth) f << ',' << format_double(ise[k]);
      f << '\n';
    }
    json r = {{"i", i}, {"j", j}, {"h_star", scan.h_star}, {"h", grid}, {"contrast", scan.values}};
    if (truth) r["ise"] = ise;
    results.push_back(r);
    log << "h*[" << i << "][" << j << "] = " << format_double(scan.h_star) << '\n';
  }
  man.config = o;
  man.add_input(o.events);
  man.add_outputs(o.out, files);
  man.results = {{"pairs", results}};
  man.save(manifest_path(man.command, o.out));
  return man;
}

RunManifest run_oracle(OracleOptions o, std::ostream& log) {
  RunManifest man;
  man.command = "oracle";
  WarningLog wl(man, log);
  make_dir(o.out);
  require(o.t_max > 0.0, "--tmax must be > 0");
  require(o.step > 0.0, "--step must be > 0");
  if (o.oracle_horizon <= 0.0) o.oracle_horizon = 10.0 * o.t_max;
  require(o.oracle_horizon >= o.t_max, "--oracle-horizon must be >= --tmax");
  const HawkesModel m = load_model_config(o.model);
  OracleConfig oc;
  oc.horizon = o.oracle_horizon;
  oc.step = o.step;
  oc.output_horizon = o.t_max;
  const OracleTable t = oracle_g(m, oc);
  std::vector<fs::path> files;
  for (int i = 0; i < t.dim; ++i) {
    for (int j = 0; j < t.dim; ++j) {
      files.push_back(fs::path(o.out) / pair_name("g", i, j));
      write_oracle_csv(files.back().string(), t, i, j);
    }
  }
  man.config = o;
  man.add_input(o.model);
  man.add_outputs(o.out, files);
  man.results = {{"rates", vector_json(t.rates)}, {"psi_iterations", t.psi_iterations}};
  man.save(manifest_path(man.command, o.out));
  log << "oracle g written for " << t.dim * t.dim << " pairs (" << t.psi_iterations << " Neumann iterations)\n";
  return man;
}

RunManifest run_gof(GofOptions o, std::ostream& log) {
  RunManifest man;
  man.command = "gof";
  WarningLog wl(man, log);
  make_dir(o.out);
  require(o.estimate.empty() != o.model.empty(), "exactly one of --estimate and --model is required");
  const fs::path model_file = o.model.empty() ? fs::path(o.estimate) / "model.cfg" : fs::path(o.model);
  const HawkesModel m = load_model_config(model_file);
  const EventSeries s = load_events(o.events);
  require(m.dim() == s.dim(), "model and events differ in dimension");
  GofConfig c;
  c.last = static_cast<std::size_t>(o.last);
  c.tail_fraction = o.tail_fraction;
  c.min_events = static_cast<std::size_t>(o.min_events);
  const ResidualSet r = rescale(m, s, c);

  std::vector<fs::path> files;
  json comps = json::array();
  for (std::size_t j = 0; j < r.components.size(); ++j) {
    const auto& cr = r.components[j];
    files.push_back(fs::path(o.out) / ("qq_" + std::to_string(j) + ".csv"));
    write_qq_csv(files.back().string(), cr);
    files.push_back(fs::path(o.out) / ("residuals_" + std::to_string(j) + ".csv"));
    std::ofstream f(files.back());
    f << "tau\n";
    for (double x : cr.tau) f << format_double(x) << '\n';
    comps.push_back({{"n", cr.tau.size()},
                     {"tested", cr.tested},
                     {"ks", cr.ks_statistic},
                     {"p_value", cr.p_value},
                     {"mean", cr.mean},
                     {"max_qq_deviation", cr.max_qq_deviation},
                     {"zero", cr.zero.size()}});
  }
  const std::string report = gof_report(r);
  files.push_back(fs::path(o.out) / "report.txt");
  {
    std::ofstream f(files.back());
    f << report;
  }
  man.config = o;
  man.add_input(o.events);
  man.add_input(model_file);
  man.add_outputs(o.out, files);
  man.results = {{"components", comps}};
  man.save(manifest_path(man.command, o.out));
  log << report;
  return man;
}

RunManifest run_import(ImportOptions o, std::ostream& log) {
  RunManifest man;
  man.command = "import";
  WarningLog wl(man, log);
  require(!o.out.empty(), "--out is required");
  require(o.delimiter.size() == 1 || o.delimiter == "tab", "--delimiter must be one character or 'tab'");
  CsvImportOptions c;
  c.time_col = o.time_col;
  c.mark_col = o.mark_col;
  c.component_col = o.component_col;
  c.delimiter = o.delimiter == "tab" ? '\t' : o.delimiter[0];
  c.header = o.header;
  c.horizon = o.horizon;
  c.shift_to_zero = o.shift;
  c.drop_duplicates = o.drop_duplicates;
  const EventSeries s = import_csv(o.csv, c);
  save_events(o.out, s);
  man.config = o;
  man.add_input(o.csv);
  man.add_outputs(parent_or_cwd(o.out), {o.out});
  man.results = {{"dim", s.dim()}, {"events", s.total_size()}, {"horizon", s.horizon()}};
  man.save(manifest_path(man.command, o.out));
  log << "imported " << s.total_size() << " events in " << s.dim() << " component(s)\n";
  return man;
}

RunManifest replay(const RunManifest& m, bool check, std::ostream& log) {
  for (const auto& [path, digest] : m.inputs)
    if (sha256_file(path) != digest) throw ConfigError("input " + path + " changed since the manifest was written");
  RunManifest again;
  try {
    if (m.command == "simulate") again = run_simulate(m.config.get<SimulateOptions>(), log);
    else if (m.command == "estimate") again = run_estimate(m.config.get<EstimateOptions>(), log);
    else if (m.command == "bandwidth") again = run_bandwidth(m.config.get<BandwidthOptions>(), log);
    else if (m.command == "oracle") again = run_oracle(m.config.get<OracleOptions>(), log);
    else if (m.command == "gof") again = run_gof(m.config.get<GofOptions>(), log);
    else if (m.command == "import") again = run_import(m.config.get<ImportOptions>(), log);
    else throw ConfigError("manifest has unknown command '" + m.command + "'");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("manifest config: ") + e.what());
  }
  if (check && again.outputs != m.outputs) throw NumericalError("replayed outputs differ from the manifest");
  return again;
}

}  // namespace hawkes::cli
