#include "hawkes_cli/model_config.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "hawkes/error.hpp"
#include "hawkes/format.hpp"

namespace hawkes::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

struct Entry {
  std::string value;
  std::size_t line = 0;
  bool used = false;
};

// One [header] block, or the global block before the first header.
struct Section {
  std::string kind;
  std::vector<int> indices;
  std::size_t line = 0;
  std::map<std::string, Entry> entries;
};

class Reader {
 public:
  Reader(std::string source, Section& sec) : source_(std::move(source)), sec_(sec) {}

  bool has(const std::string& key) const { return sec_.entries.count(key) > 0; }

  std::optional<std::string> text(const std::string& key) {
    auto it = sec_.entries.find(key);
    if (it == sec_.entries.end()) return std::nullopt;
    it->second.used = true;
    return it->second.value;
  }

  std::string required(const std::string& key) {
    auto v = text(key);
    if (!v) fail(sec_.line, "missing key '" + key + "'");
    return *v;
  }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
    auto v = text(key);
    if (!v) {
      if (fallback) return *fallback;
      fail(sec_.line, "missing key '" + key + "'");
    }
    return parse(key, *v);
  }

  std::vector<double> numbers(const std::string& key) {
    std::vector<double> out;
    const std::string v = required(key);
    for (const auto& tok : split_ws(v)) out.push_back(parse(key, tok));
    return out;
  }

  [[noreturn]] void fail(std::size_t line, const std::string& msg) const { throw ParseError(source_, line, msg); }

  std::size_t line_of(const std::string& key) const {
    auto it = sec_.entries.find(key);
    return it == sec_.entries.end() ? sec_.line : it->second.line;
  }

  void check_unused() const {
    for (const auto& [k, e] : sec_.entries)
      if (!e.used) fail(e.line, "unknown key '" + k + "' in " + (sec_.kind.empty() ? "global section" : "[" + sec_.kind + "]"));
  }

 private:
  double parse(const std::string& key, const std::string& tok) const {
    try {
      return parse_double(tok);
    } catch (const ConfigError&) {
      fail(line_of(key), "'" + key + "': not a number: " + tok);
    }
  }

  std::string source_;
  Section& sec_;
};

Kernel read_kernel(Reader& r) {
  const std::string shape = r.text("shape").value_or("zero");
  if (shape == "zero") return Kernel();
  if (shape == "exponential") return Kernel::exponential(r.number("amplitude"), r.number("decay"));
  if (shape == "power_law")
    return Kernel::power_law(r.number("amplitude"), r.number("offset", 1.0), r.number("exponent"));
  if (shape == "piecewise_linear") {
    std::vector<Knot> knots;
    for (const auto& tok : split_ws(r.required("knots"))) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos) r.fail(r.line_of("knots"), "knot '" + tok + "' is not t:value");
      try {
        knots.push_back(Knot{parse_double(tok.substr(0, colon)), parse_double(tok.substr(colon + 1))});
      } catch (const ConfigError&) {
        r.fail(r.line_of("knots"), "bad knot '" + tok + "'");
      }
    }
    return Kernel::piecewise_linear(std::move(knots));
  }
  if (shape == "sampled") return Kernel::sampled(r.number("step"), r.numbers("values"));
  r.fail(r.line_of("shape"), "unknown kernel shape '" + shape + "'");
}

MarkFunction read_mark_function(Reader& r) {
  const std::string kind = r.text("mark_function").value_or("one");
  if (kind == "one") return MarkFunction::one();
  if (kind == "identity") return MarkFunction::identity(r.number("scale", 1.0));
  if (kind == "piecewise") return MarkFunction::piecewise(r.numbers("edges"), r.numbers("levels"));
  r.fail(r.line_of("mark_function"), "unknown mark function '" + kind + "'");
}

std::vector<double> read_sample_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open mark sample file " + path.string());
  std::vector<double> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    try {
      out.push_back(parse_double(line));
    } catch (const ConfigError& e) {
      throw ParseError(path.string(), n, e.what());
    }
  }
  return out;
}

MarkDistribution read_marks(Reader& r, const std::filesystem::path& base_dir) {
  const std::string law = r.required("law");
  if (law == "none") return NoMarks{};
  if (law == "exponential") return ExponentialMarks{r.number("mean", 1.0)};
  if (law == "empirical") {
    std::filesystem::path file = r.required("file");
    if (file.is_relative()) file = base_dir / file;
    return empirical_marks(read_sample_file(file));
  }
  r.fail(r.line_of("law"), "unknown mark law '" + law + "'");
}

bool read_bool(Reader& r, const std::string& key) {
  const auto v = r.text(key);
  if (!v) return false;
  if (*v == "yes" || *v == "true" || *v == "1") return true;
  if (*v == "no" || *v == "false" || *v == "0") return false;
  r.fail(r.line_of(key), "'" + key + "' expects yes or no");
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) out += ' ';
    out += format_double(v[k]);
  }
  return out;
}

}  // namespace

HawkesModel read_model_config(std::istream& in, const std::string& source, const std::filesystem::path& base_dir) {
  std::vector<Section> sections(1);
  std::string raw;
  std::size_t n = 0;
  while (std::getline(in, raw)) {
    ++n;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(source, n, "unterminated section header");
      const auto words = split_ws(line.substr(1, line.size() - 2));
      if (words.empty()) throw ParseError(source, n, "empty section header");
      Section s;
      s.kind = words[0];
      s.line = n;
      for (std::size_t k = 1; k < words.size(); ++k) {
        try {
          s.indices.push_back(static_cast<int>(parse_integer(words[k])));
        } catch (const ConfigError&) {
          throw ParseError(source, n, "bad component index '" + words[k] + "'");
        }
      }
      const std::size_t want = s.kind == "kernel" ? 2 : s.kind == "marks" ? 1 : 0;
      if (want == 0) throw ParseError(source, n, "unknown section [" + s.kind + "]");
      if (s.indices.size() != want) throw ParseError(source, n, "[" + s.kind + "] expects " + std::to_string(want) + " index(es)");
      sections.push_back(std::move(s));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(source, n, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError(source, n, "empty key");
    auto& entries = sections.back().entries;
    if (entries.count(key)) throw ParseError(source, n, "duplicate key '" + key + "'");
    entries[key] = Entry{trim(line.substr(eq + 1)), n, false};
  }

  Reader global(source, sections[0]);
  const double dim_value = global.number("dim");
  const int D = static_cast<int>(dim_value);
  if (D < 1 || D != dim_value) throw ParseError(source, global.line_of("dim"), "dim must be a positive integer");
  HawkesModel::Spec spec;
  const auto mu = global.numbers("baseline");
  if (mu.size() != static_cast<std::size_t>(D))
    throw ParseError(source, global.line_of("baseline"), "baseline needs " + std::to_string(D) + " values");
  spec.baseline = Eigen::Map<const Eigen::VectorXd>(mu.data(), D);
  spec.rectified = read_bool(global, "rectified");
  global.check_unused();

  const auto DD = static_cast<std::size_t>(D * D);
  spec.kernels.assign(DD, Kernel());
  std::vector<MarkFunction> fns(DD, MarkFunction::one());
  std::vector<MarkDistribution> marks(static_cast<std::size_t>(D), NoMarks{});
  std::vector<bool> seen_kernel(DD, false), seen_marks(static_cast<std::size_t>(D), false);
  bool any_fn = false, any_marks = false;

  for (std::size_t k = 1; k < sections.size(); ++k) {
    Section& s = sections[k];
    Reader r(source, s);
    for (int idx : s.indices)
      if (idx < 0 || idx >= D) throw ParseError(source, s.line, "component index out of range");
    try {
      if (s.kind == "kernel") {
        const auto ij = static_cast<std::size_t>(s.indices[0] * D + s.indices[1]);
        if (seen_kernel[ij]) throw ParseError(source, s.line, "kernel defined twice");
        seen_kernel[ij] = true;
        spec.kernels[ij] = read_kernel(r);
        if (r.has("mark_function")) any_fn = true;
        fns[ij] = read_mark_function(r);
      } else {
        const auto j = static_cast<std::size_t>(s.indices[0]);
        if (seen_marks[j]) throw ParseError(source, s.line, "marks defined twice");
        seen_marks[j] = true;
        marks[j] = read_marks(r, base_dir);
        any_marks = any_marks || has_marks(marks[j]);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const ConfigError& e) {
      throw ParseError(source, s.line, e.what());
    }
    r.check_unused();
  }
  if (any_marks) spec.marks = std::move(marks);
  if (any_fn) spec.mark_functions = std::move(fns);
  try {
    return HawkesModel(std::move(spec));
  } catch (const ConfigError& e) {
    throw ParseError(source, 0, e.what());
  }
}

HawkesModel load_model_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open model config " + path.string());
  return read_model_config(in, path.string(), path.parent_path());
}

void save_model_config(const std::filesystem::path& path, const HawkesModel& m) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  const int D = m.dim();
  out << "dim = " << D << "\n";
  out << "baseline = " << join(std::vector<double>(m.baseline().data(), m.baseline().data() + D)) << "\n";
  if (m.rectified()) out << "rectified = yes\n";
  for (int j = 0; j < D; ++j) {
    const auto& law = m.mark_distribution(j);
    if (!has_marks(law)) continue;
    out << "\n[marks " << j << "]\n";
    if (const auto* e = std::get_if<ExponentialMarks>(&law)) {
      out << "law = exponential\nmean = " << format_double(e->mean) << "\n";
    } else if (const auto* emp = std::get_if<EmpiricalMarks>(&law)) {
      const std::string name = "marks_" + std::to_string(j) + ".txt";
      std::ofstream f(path.parent_path() / name);
      if (!f) throw ConfigError("cannot write " + (path.parent_path() / name).string());
      for (double x : *emp->samples) f << format_double(x) << "\n";
      out << "law = empirical\nfile = " << name << "\n";
    }
  }
  for (int i = 0; i < D; ++i) {
    for (int j = 0; j < D; ++j) {
      const Kernel& k = m.kernel(i, j);
      const MarkFunction& f = m.mark_function(i, j);
      if (k.is_zero() && f.kind() == MarkFunction::Kind::One) continue;
      out << "\n[kernel " << i << " " << j << "]\n";
      std::visit(
          [&](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, ZeroKernel>) {
              out << "shape = zero\n";
            } else if constexpr (std::is_same_v<S, ExponentialKernel>) {
              out << "shape = exponential\namplitude = " << format_double(s.amplitude)
                  << "\ndecay = " << format_double(s.decay) << "\n";
            } else if constexpr (std::is_same_v<S, PowerLawKernel>) {
              out << "shape = power_law\namplitude = " << format_double(s.amplitude)
                  << "\noffset = " << format_double(s.offset) << "\nexponent = " << format_double(s.exponent) << "\n";
            } else if constexpr (std::is_same_v<S, PiecewiseLinearKernel>) {
              out << "shape = piecewise_linear\nknots =";
              for (const auto& kn : s.knots) out << " " << format_double(kn.t) << ":" << format_double(kn.value);
              out << "\n";
            } else {
              out << "shape = sampled\nstep = " << format_double(s.step) << "\nvalues = " << join(s.values) << "\n";
            }
          },
          k.shape());
      // Normalized functions are stored so that reloading is a no-op.
      switch (f.kind()) {
        case MarkFunction::Kind::One:
          break;
        case MarkFunction::Kind::Identity:
          out << "mark_function = identity\nscale = " << format_double(f.scale()) << "\n";
          break;
        case MarkFunction::Kind::PiecewiseConstant:
          out << "mark_function = piecewise\nedges = " << join(f.edges()) << "\nlevels = " << join(f.levels()) << "\n";
          break;
      }
    }
  }
  if (!out) throw ConfigError("failed writing " + path.string());
}

}  // namespace hawkes::cli
