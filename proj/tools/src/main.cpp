#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hawkes/error.hpp"
#include "hawkes/events.hpp"
#include "hawkes/fit.hpp"
#include "hawkes/format.hpp"
#include "hawkes_cli/commands.hpp"
#include "hawkes_cli/manifest.hpp"

namespace {

using namespace hawkes;
using namespace hawkes::cli;

constexpr int kExitNumerical = 1;
constexpr int kExitUsage = 2;

// Column `name` of a CSV with a header row, together with its first column.
std::pair<std::vector<double>, std::vector<double>> read_csv_columns(const std::string& path, const std::string& name) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path, 1, "empty file");
  std::vector<std::string> header;
  {
    std::istringstream h(line);
    for (std::string c; std::getline(h, c, ',');) header.push_back(c);
  }
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw ConfigError(path + " has no column '" + name + "'");
  const auto col = static_cast<std::size_t>(it - header.begin());
  std::vector<double> x, y;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    std::vector<std::string> cells;
    std::istringstream r(line);
    for (std::string c; std::getline(r, c, ',');) cells.push_back(c);
    if (cells.size() != header.size()) throw ParseError(path, n, "wrong number of columns");
    try {
      x.push_back(parse_double(cells[0]));
      y.push_back(parse_double(cells[col]));
    } catch (const ConfigError& e) {
      throw ParseError(path, n, e.what());
    }
  }
  return {x, y};
}

struct FitOptions {
  std::string form;
  std::string csv;
  std::string column = "phi";
  double from = 0.0;
  double to = 0.0;
  std::string estimate;
  int i = 0;
  int j = 0;
  std::string events;
  int component = 0;
  double m0 = 0.0;
};

void run_fit(const FitOptions& o, std::ostream& out) {
  if (o.form == "power-law" || o.form == "etas") {
    const auto [t, phi] = read_csv_columns(o.csv, o.column);
    const double hi = o.to > 0.0 ? o.to : t.back();
    if (o.form == "power-law") {
      const PowerLawFit f = fit_power_law(t, phi, o.from, hi);
      out << "amplitude = " << format_double(f.amplitude) << "\nexponent = " << format_double(f.exponent)
          << "\nr2 = " << format_double(f.r2) << "\npoints = " << f.points << '\n';
    } else {
      const EtasFit f = fit_etas_kernel(t, phi, o.from, hi);
      out << "C = " << format_double(f.C) << "\nc = " << format_double(f.c) << "\np = " << format_double(f.p)
          << "\nresidual = " << format_double(f.residual) << "\npoints = " << f.points << '\n';
    }
  } else if (o.form == "productivity") {
    std::ifstream in(std::filesystem::path(o.estimate) / "summary.json");
    if (!in) throw ConfigError("cannot open summary.json in " + o.estimate);
    const auto s = nlohmann::json::parse(in);
    const int D = s.at("dim").get<int>();
    if (o.i < 0 || o.i >= D || o.j < 0 || o.j >= D) throw ConfigError("component index out of range");
    const auto edges = s.at("bin_edges").at(static_cast<std::size_t>(o.j)).get<std::vector<double>>();
    if (edges.size() < 3) throw ConfigError("component " + std::to_string(o.j) + " was estimated without mark bins");
    const auto& lv = s.at("levels").at(static_cast<std::size_t>(o.i * D + o.j));
    std::vector<double> m, f;
    for (std::size_t l = 0; l + 1 < edges.size(); ++l) {
      if (lv.at(l).is_null()) continue;
      m.push_back(0.5 * (edges[l] + edges[l + 1]));
      f.push_back(lv.at(l).get<double>());
    }
    const ProductivityFit p = fit_productivity(m, f);
    out << "A = " << format_double(p.A) << "\nalpha = " << format_double(p.alpha) << "\npoints = " << p.points << '\n';
  } else if (o.form == "gutenberg-richter") {
    const EventSeries s = load_events(o.events);
    if (o.component < 0 || o.component >= s.dim() || !s.marked(o.component))
      throw ConfigError("component " + std::to_string(o.component) + " is not a marked component");
    const GutenbergRichterFit g = fit_gutenberg_richter(s.marks(o.component), o.m0);
    out << "a = " << format_double(g.a) << "\nb = " << format_double(g.b)
        << "\ncount_intercept = " << format_double(g.count_intercept) << "\nevents = " << g.events << '\n';
  } else {
    throw ConfigError("unknown fit form '" + o.form + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-parametric estimation and simulation of marked multivariate Hawkes processes"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker cap (default: HAWKES_THREADS or all cores)");

  SimulateOptions sim;
  auto* c_sim = app.add_subcommand("simulate", "Simulate a model by thinning and write a .hev file");
  c_sim->add_option("model", sim.model, "Model config")->required()->check(CLI::ExistingFile);
  c_sim->add_option("--horizon", sim.horizon, "Observation length T")->required();
  c_sim->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
  c_sim->add_option("--burn-in", sim.burn_in, "Discarded prefix (default: 10 x longest support)");
  c_sim->add_option("--tail", sim.tail_fraction, "Tail cut for unbounded kernels")->capture_default_str();
  c_sim->add_option("--max-events", sim.max_events, "Divergence cap")->capture_default_str();
  c_sim->add_option("--out", sim.out, "Output .hev")->required();

  EstimateOptions est;
  auto* c_est = app.add_subcommand("estimate", "Estimate kernels and mark functions from events");
  c_est->set_help_flag("--help", "Print this help message and exit");  // -h would clash with --h
  c_est->add_option("--events", est.events, ".hev input")->required()->check(CLI::ExistingFile);
  c_est->add_option("--tmax", est.t_max, "Kernel support A")->required();
  c_est->add_option("--h", est.h, "Bandwidth: auto or a value")->capture_default_str();
  c_est->add_option("--Q", est.Q, "Quadrature size: auto or a value")->capture_default_str();
  c_est->add_option("--bins", est.bins, "Mark bins: none | edges=a:step:b | count=N | e0,e1,...");
  c_est->add_option("--grid", est.grid, "Output grid points (default 8Q+1)");
  c_est->add_option("--kernel-order", est.kernel_order, "Smoothing kernel order 0, 1 or 2")->capture_default_str();
  c_est->add_option("--blocks", est.blocks, "Blocks R for the bandwidth contrast")->capture_default_str();
  c_est->add_option("--h-grid", est.h_grid, "Bandwidth candidates: lo:hi:n (geometric) or a comma list");
  c_est->add_option("--Q0", est.Q0, "Starting Q for auto")->capture_default_str();
  c_est->add_option("--Q-cap", est.Q_cap, "Largest Q for auto")->capture_default_str();
  c_est->add_option("--Q-threshold", est.Q_threshold, "Relative L2 change to stop doubling")->capture_default_str();
  c_est->add_option("--primitive", est.primitive, "count | trapezoid")->capture_default_str();
  c_est->add_option("--rcond", est.rcond, "Reciprocal condition floor")->capture_default_str();
  c_est->add_option("--out", est.out, "Output directory")->required();

  BandwidthOptions bw;
  auto* c_bw = app.add_subcommand("bandwidth", "Cross-validated bandwidth contrast M*(h)");
  c_bw->add_option("--events", bw.events, ".hev input")->required()->check(CLI::ExistingFile);
  c_bw->add_option("--tmax", bw.t_max, "Support of the estimate")->required();
  c_bw->add_option("--i", bw.i, "Target component (default: all pairs)");
  c_bw->add_option("--j", bw.j, "Source component");
  c_bw->add_option("--h-grid", bw.h_grid, "Candidates: lo:hi:n (geometric) or a comma list");
  c_bw->add_option("--blocks", bw.blocks, "Blocks R")->capture_default_str();
  c_bw->add_option("--kernel-order", bw.kernel_order, "Smoothing kernel order")->capture_default_str();
  c_bw->add_option("--model", bw.model, "True model: adds the integrated squared error column")
      ->check(CLI::ExistingFile);
  c_bw->add_option("--out", bw.out, "Output directory")->required();

  OracleOptions orc;
  auto* c_or = app.add_subcommand("oracle", "Exact conditional-law densities of a model");
  c_or->add_option("model", orc.model, "Model config")->required()->check(CLI::ExistingFile);
  c_or->add_option("--tmax", orc.t_max, "Output range [-tmax, tmax]")->required();
  c_or->add_option("--step", orc.step, "Grid step")->capture_default_str();
  c_or->add_option("--oracle-horizon", orc.oracle_horizon, "Neumann series horizon (default 10 tmax)");
  c_or->add_option("--out", orc.out, "Output directory")->required();

  GofOptions gof;
  auto* c_gof = app.add_subcommand("gof", "Time-rescaling residuals and KS test");
  c_gof->add_option("--events", gof.events, ".hev input")->required()->check(CLI::ExistingFile);
  auto* o_est = c_gof->add_option("--estimate", gof.estimate, "Directory written by estimate")
                    ->check(CLI::ExistingDirectory);
  auto* o_mod = c_gof->add_option("--model", gof.model, "Model config")->check(CLI::ExistingFile);
  o_est->excludes(o_mod);
  c_gof->add_option("--last", gof.last, "Keep the last n residuals per component (0: all)");
  c_gof->add_option("--tail", gof.tail_fraction, "Tail cut for unbounded kernels")->capture_default_str();
  c_gof->add_option("--min-events", gof.min_events, "Smallest sample tested")->capture_default_str();
  c_gof->add_option("--out", gof.out, "Output directory")->required();

  ImportOptions imp;
  auto* c_imp = app.add_subcommand("import", "Convert a CSV catalog to .hev");
  c_imp->add_option("csv", imp.csv, "CSV file")->required()->check(CLI::ExistingFile);
  c_imp->add_option("--time-col", imp.time_col, "Time column (name or 0-based index)")->capture_default_str();
  c_imp->add_option("--mark-col", imp.mark_col, "Mark column");
  c_imp->add_option("--component-col", imp.component_col, "Component column");
  c_imp->add_option("--delimiter", imp.delimiter, "Field separator (one character or 'tab')")->capture_default_str();
  bool no_header = false;
  c_imp->add_flag("--no-header", no_header, "The first row is data");
  c_imp->add_option("--horizon", imp.horizon, "Observation length (default: last time)");
  c_imp->add_flag("--shift", imp.shift, "Subtract the first time");
  c_imp->add_flag("--drop-duplicates", imp.drop_duplicates, "Drop repeated times within a component");
  c_imp->add_option("--out", imp.out, "Output .hev")->required();

  FitOptions fit;
  auto* c_fit = app.add_subcommand("fit", "Parametric fits of estimated kernels, levels and magnitudes");
  c_fit->add_option("form", fit.form, "power-law | etas | productivity | gutenberg-richter")
      ->required()
      ->check(CLI::IsMember({"power-law", "etas", "productivity", "gutenberg-richter"}));
  c_fit->add_option("--csv", fit.csv, "Kernel CSV (power-law, etas)");
  c_fit->add_option("--column", fit.column, "Column to fit")->capture_default_str();
  c_fit->add_option("--from", fit.from, "Lower end of the fit range");
  c_fit->add_option("--to", fit.to, "Upper end of the fit range (default: last point)");
  c_fit->add_option("--estimate", fit.estimate, "Estimate directory (productivity)");
  c_fit->add_option("--i", fit.i, "Target component (productivity)");
  c_fit->add_option("--j", fit.j, "Marked source component (productivity)");
  c_fit->add_option("--events", fit.events, ".hev input (gutenberg-richter)");
  c_fit->add_option("--component", fit.component, "Marked component (gutenberg-richter)");
  c_fit->add_option("--m0", fit.m0, "Completeness magnitude (gutenberg-richter)");

  std::string manifest_file;
  bool check = false;
  auto* c_rep = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  c_rep->add_option("manifest", manifest_file, "manifest.json")->required()->check(CLI::ExistingFile);
  c_rep->add_flag("--check", check, "Fail unless the outputs match the recorded digests");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (threads > 0) {
      setenv("HAWKES_THREADS", std::to_string(threads).c_str(), 1);
      est.threads = bw.threads = threads;
    }
    imp.header = !no_header;
    if (c_sim->parsed()) run_simulate(sim, std::cerr);
    else if (c_est->parsed()) run_estimate(est, std::cerr);
    else if (c_bw->parsed()) run_bandwidth(bw, std::cout);
    else if (c_or->parsed()) run_oracle(orc, std::cerr);
    else if (c_gof->parsed()) run_gof(gof, std::cout);
    else if (c_imp->parsed()) run_import(imp, std::cerr);
    else if (c_fit->parsed()) run_fit(fit, std::cout);
    else if (c_rep->parsed()) replay(RunManifest::load(manifest_file), check, std::cerr);
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
