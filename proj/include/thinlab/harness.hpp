#pragma once

// Batch experiment runner: strict JSON configs, concurrent per-prime or
// per-degree tasks, CSV/JSON/plot-data outputs and a run manifest.

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "thinlab/error.hpp"
#include "thinlab/graph.hpp"
#include "thinlab/group.hpp"
#include "thinlab/group_spec.hpp"
#include "thinlab/json_io.hpp"
#include "thinlab/monodromy.hpp"
#include "thinlab/origami.hpp"
#include "thinlab/parallel.hpp"
#include "thinlab/pra.hpp"
#include "thinlab/spectra.hpp"

namespace thinlab::harness {

inline constexpr const char* kToolVersion = "0.1.0";

namespace fs = std::filesystem;

/// A malformed or invalid experiment config. `key` names the offending key
/// and `line` the 1-based line of a JSON syntax error, when known.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::string key = {}, std::size_t line = 0)
      : Error(format(what, key, line)), key_(std::move(key)), line_(line) {}

  const std::string& key() const { return key_; }
  std::size_t line() const { return line_; }

 private:
  static std::string format(const std::string& what, const std::string& key, std::size_t line) {
    std::string out = "config error";
    if (line) out += " (line " + std::to_string(line) + ")";
    if (!key.empty()) out += " at key '" + key + "'";
    return out + ": " + what;
  }

  std::string key_;
  std::size_t line_;
};

enum class ExperimentKind { cayley_sweep, schreier_sweep, pointpush, pra, origami_census };

inline std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::cayley_sweep: return "cayley-sweep";
    case ExperimentKind::schreier_sweep: return "schreier-sweep";
    case ExperimentKind::pointpush: return "pointpush";
    case ExperimentKind::pra: return "pra";
    case ExperimentKind::origami_census: return "origami-census";
  }
  return "?";
}

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::cayley_sweep;
  std::string output = "thinlab-out";
  std::uint64_t seed = 0;
  std::size_t budget = kDefaultElementBudget;
  SolverOptions solver;
  bool timing = false;
  bool dot = false;
  bool dump = false;

  // cayley-sweep, schreier-sweep, pointpush
  std::size_t genus = 1;
  std::vector<std::int64_t> primes;
  std::string generators = "standard";
  std::vector<GroupElement> catalog;  // loaded when generators == "catalog"

  // pra
  std::vector<std::string> groups;
  std::vector<std::size_t> arities;
  std::size_t steps = 0;
  std::vector<std::size_t> checkpoints;
  std::size_t tuple_budget = kDefaultTupleBudget;

  // origami-census
  std::vector<std::size_t> degrees;
  std::optional<std::string> mu;
  std::optional<std::size_t> image_order;
  std::size_t max_degree = kDefaultOrigamiDegreeCap;

  Json source;  // the parsed config, used for the manifest hash
};

namespace detail {

inline std::size_t line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

template <class T>
T get_as(const Json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const std::exception&) {
    throw ConfigError("wrong type", key);
  }
}

inline std::size_t positive(const Json& j, const std::string& key) {
  if (!j.is_number_integer() || j.get<std::int64_t>() <= 0) throw ConfigError("must be a positive integer", key);
  return j.get<std::size_t>();
}

inline std::vector<std::size_t> positive_list(const Json& j, const std::string& key) {
  if (!j.is_array() || j.empty()) throw ConfigError("must be a nonempty array", key);
  std::vector<std::size_t> out;
  for (const auto& x : j) out.push_back(positive(x, key));
  return out;
}

inline std::vector<std::string> key_set(ExperimentKind kind) {
  std::vector<std::string> keys = {"kind", "description", "output", "seed", "budget", "solver", "tolerance",
                                   "timing", "dot", "dump"};
  switch (kind) {
    case ExperimentKind::cayley_sweep:
      keys.insert(keys.end(), {"genus", "primes", "generators", "gens", "catalog"});
      break;
    case ExperimentKind::schreier_sweep:
      keys.insert(keys.end(), {"genus", "primes", "generators", "gens"});
      break;
    case ExperimentKind::pointpush:
      keys.insert(keys.end(), {"genus", "primes"});
      break;
    case ExperimentKind::pra:
      keys.insert(keys.end(), {"groups", "arities", "steps", "checkpoints", "tuple_budget"});
      break;
    case ExperimentKind::origami_census:
      keys.insert(keys.end(), {"degrees", "mu", "image_order", "max_degree"});
      break;
  }
  return keys;
}

}  // namespace detail

/// Parses and validates a config. `base_dir` resolves relative catalog paths.
inline ExperimentConfig parse_config(const std::string& text, const fs::path& base_dir = ".") {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(e.what(), {}, detail::line_of(text, e.byte));
  }
  if (!j.is_object()) throw ConfigError("top level must be an object");
  ExperimentConfig cfg;
  cfg.source = j;
  if (!j.contains("kind")) throw ConfigError("missing required key", "kind");
  const auto kind = detail::get_as<std::string>(j["kind"], "kind");
  if (kind == "cayley-sweep") cfg.kind = ExperimentKind::cayley_sweep;
  else if (kind == "schreier-sweep") cfg.kind = ExperimentKind::schreier_sweep;
  else if (kind == "pointpush") cfg.kind = ExperimentKind::pointpush;
  else if (kind == "pra") cfg.kind = ExperimentKind::pra;
  else if (kind == "origami-census") cfg.kind = ExperimentKind::origami_census;
  else throw ConfigError("unknown experiment kind '" + kind + "'", "kind");

  const auto allowed = detail::key_set(cfg.kind);
  for (const auto& [key, value] : j.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError("unknown key for kind '" + kind + "'", key);

  if (j.contains("output")) cfg.output = detail::get_as<std::string>(j["output"], "output");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer() || (j["seed"].is_number_integer() && !j["seed"].is_number_unsigned()))
      throw ConfigError("must be a non-negative 64-bit integer", "seed");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("budget")) cfg.budget = detail::positive(j["budget"], "budget");
  if (j.contains("solver")) {
    try {
      cfg.solver.method = parse_solver_method(detail::get_as<std::string>(j["solver"], "solver"));
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what(), "solver");
    }
  }
  if (j.contains("tolerance")) {
    const double tol = detail::get_as<double>(j["tolerance"], "tolerance");
    if (!(tol > 0.0)) throw ConfigError("must be positive", "tolerance");
    cfg.solver.iterative_tolerance = tol;
  }
  for (auto [key, flag] : {std::pair{"timing", &cfg.timing}, std::pair{"dot", &cfg.dot}, std::pair{"dump", &cfg.dump}})
    if (j.contains(key)) *flag = detail::get_as<bool>(j[key], key);

  switch (cfg.kind) {
    case ExperimentKind::cayley_sweep:
    case ExperimentKind::schreier_sweep:
    case ExperimentKind::pointpush: {
      if (j.contains("genus")) cfg.genus = detail::positive(j["genus"], "genus");
      if (!j.contains("primes")) throw ConfigError("missing required key", "primes");
      for (auto p : detail::positive_list(j["primes"], "primes")) {
        if (!is_prime(static_cast<std::int64_t>(p))) throw ConfigError(std::to_string(p) + " is not prime", "primes");
        cfg.primes.push_back(static_cast<std::int64_t>(p));
      }
      // "gens" is accepted as a short alias of "generators".
      if (j.contains("generators") && j.contains("gens")) throw ConfigError("give either 'generators' or 'gens'", "gens");
      if (j.contains("generators") || j.contains("gens")) {
        const std::string key = j.contains("gens") ? "gens" : "generators";
        cfg.generators = detail::get_as<std::string>(j[key], key);
        static const std::set<std::string> known = {"standard", "braid", "chain", "pointpush", "catalog"};
        if (!known.count(cfg.generators)) throw ConfigError("unknown generator family '" + cfg.generators + "'", key);
        if (cfg.generators == "catalog" && cfg.kind != ExperimentKind::cayley_sweep)
          throw ConfigError("catalog generators are only supported by cayley-sweep", key);
      }
      if (cfg.generators == "catalog") {
        if (!j.contains("catalog")) throw ConfigError("generators 'catalog' needs a catalog path", "catalog");
        const fs::path path = base_dir / detail::get_as<std::string>(j["catalog"], "catalog");
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot read catalog " + path.string(), "catalog");
        try {
          cfg.catalog = catalog_from_json(Json::parse(in));
        } catch (const std::exception& e) {
          throw ConfigError(std::string("bad catalog: ") + e.what(), "catalog");
        }
        const auto& shape = cfg.catalog.front().shape();
        if (shape.kind != ElementKind::matrix || shape.size != 2 * cfg.genus)
          throw ConfigError("catalog must hold 2g x 2g matrices", "catalog");
        for (auto p : cfg.primes)
          if (shape.modulus != 0 && shape.modulus % p != 0)
            throw ConfigError("catalog modulus is incompatible with prime " + std::to_string(p), "catalog");
      } else if (j.contains("catalog")) {
        throw ConfigError("only allowed with generators 'catalog'", "catalog");
      }
      break;
    }
    case ExperimentKind::pra: {
      if (!j.contains("groups")) throw ConfigError("missing required key", "groups");
      if (!j.contains("arities")) throw ConfigError("missing required key", "arities");
      if (!j["groups"].is_array() || j["groups"].empty()) throw ConfigError("must be a nonempty array", "groups");
      for (const auto& g : j["groups"]) {
        auto spec = detail::get_as<std::string>(g, "groups");
        try {
          parse_group_spec(spec);
        } catch (const Error& e) {
          throw ConfigError(e.what(), "groups");
        }
        cfg.groups.push_back(spec);
      }
      cfg.arities = detail::positive_list(j["arities"], "arities");
      if (j.contains("steps")) {
        if (!j["steps"].is_number_integer() || j["steps"].get<std::int64_t>() < 0)
          throw ConfigError("must be a non-negative integer", "steps");
        cfg.steps = j["steps"].get<std::size_t>();
      }
      if (j.contains("checkpoints")) cfg.checkpoints = detail::positive_list(j["checkpoints"], "checkpoints");
      if (j.contains("tuple_budget")) cfg.tuple_budget = detail::positive(j["tuple_budget"], "tuple_budget");
      break;
    }
    case ExperimentKind::origami_census: {
      if (!j.contains("degrees")) throw ConfigError("missing required key", "degrees");
      cfg.degrees = detail::positive_list(j["degrees"], "degrees");
      if (j.contains("max_degree")) cfg.max_degree = detail::positive(j["max_degree"], "max_degree");
      for (auto d : cfg.degrees)
        if (d > cfg.max_degree || d > kMaxPermDegree) throw ConfigError("degree " + std::to_string(d) + " above the cap", "degrees");
      if (j.contains("mu")) {
        cfg.mu = detail::get_as<std::string>(j["mu"], "mu");
        for (auto d : cfg.degrees) {
          try {
            CycleType::parse(*cfg.mu, d);
          } catch (const Error& e) {
            throw ConfigError(e.what(), "mu");
          }
        }
      }
      if (j.contains("image_order")) cfg.image_order = detail::positive(j["image_order"], "image_order");
      break;
    }
  }
  return cfg;
}

inline ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path().empty() ? fs::path(".") : path.parent_path());
}

struct TaskStatus {
  std::string id;
  bool ok = true;
  std::string error;
  double seconds = 0.0;
};

struct OutputFile {
  std::string path;  // relative to the output directory
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  std::string config_hash;
  std::string tool_version = kToolVersion;
  std::string kind;
  std::uint64_t seed = 0;
  std::string started;
  std::string finished;
  std::vector<TaskStatus> tasks;
  std::vector<OutputFile> outputs;
  std::vector<std::string> warnings;

  bool succeeded() const {
    return std::all_of(tasks.begin(), tasks.end(), [](const TaskStatus& t) { return t.ok; });
  }
};

inline Json manifest_to_json(const RunManifest& m) {
  Json j;
  j["config_hash"] = m.config_hash;
  j["tool_version"] = m.tool_version;
  j["kind"] = m.kind;
  j["seed"] = m.seed;
  j["started"] = m.started;
  j["finished"] = m.finished;
  Json tasks = Json::array();
  for (const auto& t : m.tasks)
    tasks.push_back({{"id", t.id}, {"status", t.ok ? "ok" : "failed"}, {"error", t.error}, {"seconds", t.seconds}});
  j["tasks"] = tasks;
  Json outputs = Json::array();
  for (const auto& o : m.outputs) outputs.push_back({{"path", o.path}, {"bytes", o.bytes}});
  j["outputs"] = outputs;
  j["warnings"] = m.warnings;
  return j;
}

struct RunOptions {
  std::size_t jobs = 0;
  std::optional<fs::path> output;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> budget;  // element budget override (THINLAB_BUDGET)
  std::ostream* log = &std::cerr;
};

namespace detail {

inline std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

inline std::string fmt(double x, int precision = 12) {
  std::ostringstream os;
  os << std::setprecision(precision) << x;
  return os.str();
}

/// Collects output files and records them for the manifest.
class OutputWriter {
 public:
  explicit OutputWriter(fs::path dir) : dir_(std::move(dir)) {}

  const fs::path& dir() const { return dir_; }

  void write(const std::string& relative, const std::string& content) {
    const fs::path path = dir_ / relative;
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) throw Error("cannot write " + path.string());
    record(relative);
  }

  template <class Fn>
  void write_with(const std::string& relative, Fn&& fn) {
    const fs::path path = dir_ / relative;
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    fn(out);
    out.close();
    if (!out) throw Error("cannot write " + path.string());
    record(relative);
  }

  std::vector<OutputFile> inventory() const {
    std::vector<OutputFile> out;
    for (const auto& r : files_) {
      const fs::path path = dir_ / r;
      if (!fs::exists(path)) throw Error("declared output is missing: " + path.string());
      out.push_back({r, fs::file_size(path)});
    }
    return out;
  }

 private:
  void record(const std::string& relative) {
    if (std::find(files_.begin(), files_.end(), relative) == files_.end()) files_.push_back(relative);
  }

  fs::path dir_;
  std::vector<std::string> files_;
};

}  // namespace detail

/// A report together with the prime (or other scale parameter) it belongs to.
struct PlotPoint {
  std::int64_t parameter = 0;
  SpectralReport report;
};

/// Writes <stem>_logN.dat (log N, lambda1), <stem>_p.dat (p, lambda1) and
/// <stem>_fit.json. Disconnected graphs are left out; with nothing left the
/// data files hold only their header and a warning is returned.
inline std::vector<std::string> emit_plotdata(const std::vector<PlotPoint>& points, detail::OutputWriter& out,
                                              const std::string& stem) {
  std::vector<std::string> warnings;
  std::vector<PlotPoint> connected;
  for (const auto& p : points)
    if (p.report.lambda1 > 0.0) connected.push_back(p);
  if (connected.empty()) warnings.push_back(stem + ": no connected graphs; plot files contain only headers");
  std::string by_size = "# log_N lambda1\n", by_param = "# p lambda1\n";
  std::vector<SeriesPoint> series;
  for (const auto& p : connected) {
    by_size += detail::fmt(std::log(static_cast<double>(p.report.vertices))) + " " + detail::fmt(p.report.lambda1) + "\n";
    by_param += std::to_string(p.parameter) + " " + detail::fmt(p.report.lambda1) + "\n";
    series.push_back({static_cast<double>(p.report.vertices), p.report.lambda1});
  }
  out.write(stem + "_logN.dat", by_size);
  out.write(stem + "_p.dat", by_param);
  Json fit;
  try {
    fit = fit_to_json(esperantist_fit(series));
  } catch (const InsufficientData& e) {
    fit = Json{{"error", e.what()}};
    warnings.push_back(stem + ": " + e.what());
  }
  out.write(stem + "_fit.json", fit.dump(2) + "\n");
  return warnings;
}

namespace detail {

/// Generators of the configured family, reduced mod p.
inline GeneratorSet sweep_generators(const ExperimentConfig& cfg, std::int64_t p) {
  if (cfg.generators == "standard") return cfg.genus == 1 ? sl2_generators(p) : chain_generators(cfg.genus, p);
  if (cfg.generators == "braid") return braid_generators(cfg.genus, p);
  if (cfg.generators == "chain") return chain_generators(cfg.genus, p);
  if (cfg.generators == "pointpush") return point_pushing_images(cfg.genus, p);
  std::vector<GroupElement> reduced;
  for (const auto& a : cfg.catalog) reduced.push_back(a.reduced(p));
  return GeneratorSet(std::move(reduced), "catalog");
}

/// Sp_2g(Z/p) enumerated from the standard generators.
inline FiniteGroup ambient_group(const ExperimentConfig& cfg, std::int64_t p, std::size_t budget) {
  return bfs_closure(cfg.genus == 1 ? sl2_generators(p) : chain_generators(cfg.genus, p), budget);
}

inline std::string graph_id(const std::string& prefix, const ExperimentConfig& cfg, std::int64_t p) {
  return prefix + "-g" + std::to_string(cfg.genus) + "-" + cfg.generators + "-p" + std::to_string(p);
}

struct TaskResult {
  TaskStatus status;
  std::vector<std::pair<std::string, std::string>> files;  // relative path, content
  std::vector<std::string> warnings;
};

template <class Fn>
std::vector<TaskResult> run_tasks(const std::vector<std::string>& ids, std::size_t jobs, Fn&& fn) {
  std::vector<TaskResult> results(ids.size());
  parallel_for(ids.size(), jobs, [&](std::size_t i) {
    const auto t0 = std::chrono::steady_clock::now();
    results[i].status.id = ids[i];
    try {
      fn(i, results[i]);
    } catch (const std::exception& e) {
      results[i].status.ok = false;
      results[i].status.error = e.what();
    }
    results[i].status.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  });
  return results;
}

inline void attach_graph_files(const ExperimentConfig& cfg, const MultiGraph& g, TaskResult& r) {
  if (cfg.dot && g.vertex_count() <= kDotVertexLimit) {
    std::ostringstream os;
    write_dot(g, os);
    r.files.emplace_back("graphs/" + g.id() + ".dot", os.str());
  }
  if (cfg.dump) {
    std::ostringstream os(std::ios::binary);
    write_binary(g, os);
    r.files.emplace_back("graphs/" + g.id() + ".tlg", os.str());
  }
}

inline std::string prime_ids(const std::string& prefix, std::int64_t p) { return prefix + "-p" + std::to_string(p); }

}  // namespace detail

/// Runs an experiment and writes its outputs plus manifest.json. Per-task
/// failures are recorded in the manifest; the run itself only throws for I/O
/// problems.
inline RunManifest run(const ExperimentConfig& cfg_in, const RunOptions& opts = {}) {
  ExperimentConfig cfg = cfg_in;
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.budget) cfg.budget = *opts.budget;
  cfg.solver.seed = cfg.seed ^ 0x9e3779b97f4a7c15ULL;
  const fs::path dir = opts.output ? *opts.output : fs::path(cfg.output);

  RunManifest manifest;
  manifest.kind = to_string(cfg.kind);
  manifest.seed = cfg.seed;
  manifest.started = detail::utc_now();
  Json hashed = cfg.source;
  hashed["seed"] = cfg.seed;
  manifest.config_hash = detail::fnv1a_hex(hashed.dump());

  fs::create_directories(dir);
  detail::OutputWriter out(dir);
  std::vector<detail::TaskResult> results;
  std::vector<PlotPoint> plot;

  auto report_csv = [&](const std::vector<SpectralReport>& reports) {
    std::string csv = std::string(kReportCsvHeader) + "\n";
    for (const auto& r : reports) csv += to_csv_row(r, cfg.timing) + "\n";
    return csv;
  };

  switch (cfg.kind) {
    case ExperimentKind::cayley_sweep: {
      std::vector<std::string> ids;
      for (auto p : cfg.primes) ids.push_back(detail::prime_ids("cayley", p));
      std::vector<std::optional<SpectralReport>> reports(cfg.primes.size());
      results = detail::run_tasks(ids, opts.jobs, [&](std::size_t i, detail::TaskResult& r) {
        const auto p = cfg.primes[i];
        const auto group = detail::ambient_group(cfg, p, cfg.budget);
        auto g = cayley_graph(group, detail::sweep_generators(cfg, p), false);
        g.set_id(detail::graph_id("cayley", cfg, p));
        reports[i] = lambda1(g, cfg.solver);
        detail::attach_graph_files(cfg, g, r);
      });
      std::vector<SpectralReport> rows;
      for (std::size_t i = 0; i < reports.size(); ++i) {
        if (!reports[i]) continue;
        rows.push_back(*reports[i]);
        plot.push_back({cfg.primes[i], *reports[i]});
      }
      out.write("spectra.csv", report_csv(rows));
      for (auto& w : emit_plotdata(plot, out, "lambda1")) manifest.warnings.push_back(w);
      break;
    }
    case ExperimentKind::schreier_sweep: {
      std::vector<std::string> ids;
      for (auto p : cfg.primes) ids.push_back(detail::prime_ids("schreier", p));
      struct Row {
        std::size_t vertices = 0;
        std::uint64_t expected = 0;
        std::optional<bool> quotient_ok;
        SpectralReport schreier;
        std::optional<SpectralReport> cayley;
      };
      std::vector<std::optional<Row>> rows(cfg.primes.size());
      results = detail::run_tasks(ids, opts.jobs, [&](std::size_t i, detail::TaskResult& r) {
        const auto p = cfg.primes[i];
        const auto gens = detail::sweep_generators(cfg, p);
        auto s = schreier_graph(torsion_action(gens, p));
        s.set_id(detail::graph_id("schreier", cfg, p));
        Row row;
        row.vertices = s.vertex_count();
        row.expected = 1;
        for (std::size_t t = 0; t < 2 * cfg.genus; ++t) row.expected *= static_cast<std::uint64_t>(p);
        row.expected -= 1;
        row.schreier = lambda1(s, cfg.solver);
        detail::attach_graph_files(cfg, s, r);
        try {
          const auto group = detail::ambient_group(cfg, p, cfg.budget);
          auto c = cayley_graph(group, gens, false);
          c.set_id(detail::graph_id("cayley", cfg, p));
          ModVector base{std::vector<std::int64_t>(2 * cfg.genus, 0), p};
          base.entries[0] = 1;
          row.quotient_ok = quotient_check(c, s, torsion_projection(group, base));
          row.cayley = lambda1(c, cfg.solver);
        } catch (const BudgetExceeded& e) {
          r.warnings.push_back("p=" + std::to_string(p) + ": Cayley parent skipped: " + e.what());
        }
        rows[i] = std::move(row);
      });
      std::vector<SpectralReport> reports;
      std::string quotient = "prime,vertices,expected_vertices,quotient_ok,lambda1_schreier,lambda1_cayley\n";
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i]) continue;
        const auto& row = *rows[i];
        reports.push_back(row.schreier);
        if (row.cayley) reports.push_back(*row.cayley);
        plot.push_back({cfg.primes[i], row.schreier});
        quotient += std::to_string(cfg.primes[i]) + "," + std::to_string(row.vertices) + "," +
                    std::to_string(row.expected) + "," +
                    (row.quotient_ok ? (*row.quotient_ok ? "true" : "false") : "NA") + "," +
                    detail::fmt(row.schreier.lambda1) + "," + (row.cayley ? detail::fmt(row.cayley->lambda1) : "NA") + "\n";
      }
      out.write("spectra.csv", report_csv(reports));
      out.write("quotient.csv", quotient);
      for (auto& w : emit_plotdata(plot, out, "lambda1")) manifest.warnings.push_back(w);
      break;
    }
    case ExperimentKind::pointpush: {
      const auto chain = build_chain(cfg.genus);
      const auto mats = braid_images(point_pushing_generators(cfg.genus), chain, 0);
      std::vector<std::string> ids;
      for (auto p : cfg.primes) ids.push_back(detail::prime_ids("pointpush", p));
      std::vector<std::optional<PrimeSurjectivity>> per_prime(cfg.primes.size());
      results = detail::run_tasks(ids, opts.jobs, [&](std::size_t i, detail::TaskResult&) {
        per_prime[i] = congruence_report(mats, {cfg.primes[i]}, cfg.budget).primes.front();
      });
      auto report = congruence_report(mats, {}, cfg.budget);
      for (auto& p : per_prime)
        if (p) report.primes.push_back(*p);
      Json j = congruence_to_json(report);
      j["genus"] = cfg.genus;
      out.write("congruence.json", j.dump(2) + "\n");
      out.write("generators.json", catalog_to_json(mats, "pointpush-g" + std::to_string(cfg.genus)).dump(2) + "\n");
      break;
    }
    case ExperimentKind::pra: {
      std::vector<std::string> ids;
      std::vector<std::pair<std::string, std::size_t>> cases;
      for (const auto& g : cfg.groups)
        for (auto n : cfg.arities) {
          cases.emplace_back(g, n);
          ids.push_back("pra-" + g + "-n" + std::to_string(n));
        }
      std::vector<std::string> lines(cases.size());
      std::vector<std::optional<SpectralReport>> reports(cases.size());
      results = detail::run_tasks(ids, opts.jobs, [&](std::size_t i, detail::TaskResult& r) {
        const auto group = make_group(cases[i].first, cfg.budget);
        const ProductReplacement pr(group, cases[i].second, cfg.tuple_budget);
        for (const auto& w : pr.warnings()) r.warnings.push_back(ids[i] + ": " + w);
        const auto orbits = pr.orbit_sizes();
        std::string orbit_text;
        for (std::size_t t = 0; t < orbits.size(); ++t) orbit_text += (t ? ";" : "") + std::to_string(orbits[t]);
        std::string lambda = "NA";
        if (pr.graph().degree() > 0 && pr.graph().vertex_count() > 0) {
          auto g = pr.graph();
          g.set_id(ids[i]);
          reports[i] = lambda1(g, cfg.solver);
          lambda = detail::fmt(reports[i]->lambda1);
          detail::attach_graph_files(cfg, g, r);
        }
        std::string tv = "NA", tv_checkpoints;
        if (!pr.epi().empty()) {
          const auto stats = pr.walk(cfg.steps, cfg.seed, cfg.checkpoints);
          tv = detail::fmt(stats.total_variation, 6);
          for (std::size_t t = 0; t < stats.checkpoints.size(); ++t)
            tv_checkpoints += (t ? ";" : "") + std::to_string(stats.checkpoints[t].first) + ":" +
                              detail::fmt(stats.checkpoints[t].second, 6);
        }
        lines[i] = cases[i].first + "," + std::to_string(cases[i].second) + "," + std::to_string(group.order()) + "," +
                   std::to_string(pr.epi().size()) + "," + orbit_text + "," + std::to_string(pr.graph().degree()) + "," +
                   lambda + "," + std::to_string(cfg.steps) + "," + tv + "," + tv_checkpoints;
      });
      std::string csv = "group,n,order,epi,orbit_sizes,k,lambda1,steps,tv,tv_checkpoints\n";
      for (const auto& l : lines)
        if (!l.empty()) csv += l + "\n";
      out.write("pra.csv", csv);
      std::vector<SpectralReport> rows;
      for (const auto& r : reports)
        if (r) rows.push_back(*r);
      out.write("spectra.csv", report_csv(rows));
      break;
    }
    case ExperimentKind::origami_census: {
      std::vector<std::string> ids;
      for (auto d : cfg.degrees) ids.push_back("census-d" + std::to_string(d));
      std::vector<std::string> census_rows(cfg.degrees.size());
      std::vector<std::vector<SpectralReport>> reports(cfg.degrees.size());
      CensusOptions copts;
      copts.max_degree = cfg.max_degree;
      results = detail::run_tasks(ids, opts.jobs, [&](std::size_t i, detail::TaskResult& r) {
        const auto d = cfg.degrees[i];
        std::optional<CycleType> filter;
        if (cfg.mu) filter = CycleType::parse(*cfg.mu, d);
        const auto all = census(d, filter, copts);
        std::set<CycleType> mus;
        for (const auto& c : all.classes) mus.insert(c.representative.mu());
        for (const auto& mu : mus) {
          const auto og = origami_graph(d, mu, cfg.image_order, copts);
          const auto comp = component_labels(og.graph);
          for (std::size_t v = 0; v < og.classes.size(); ++v) {
            const auto& c = og.classes[v];
            census_rows[i] += std::to_string(d) + "," + mu.to_string() + "," + std::to_string(c.image_order) + "," +
                              std::to_string(c.image_class) + "," + std::to_string(c.orbit_size) + "," +
                              std::to_string(c.genus) + "," + std::to_string(comp[v]) + "," +
                              c.representative.to_string() + "\n";
          }
          if (og.graph.vertex_count() == 0) continue;
          reports[i].push_back(lambda1(og.graph, cfg.solver));
          detail::attach_graph_files(cfg, og.graph, r);
        }
      });
      std::string csv = "d,mu,image_order,image_class,orbit_size,genus,component,pair\n";
      std::vector<SpectralReport> rows;
      for (std::size_t i = 0; i < census_rows.size(); ++i) {
        csv += census_rows[i];
        rows.insert(rows.end(), reports[i].begin(), reports[i].end());
      }
      out.write("census.csv", csv);
      out.write("spectra.csv", report_csv(rows));
      break;
    }
  }

  for (auto& r : results) {
    for (auto& [path, content] : r.files) out.write(path, content);
    for (auto& w : r.warnings) manifest.warnings.push_back(w);
    if (!r.status.ok && opts.log) *opts.log << "task " << r.status.id << " failed: " << r.status.error << "\n";
    manifest.tasks.push_back(r.status);
  }
  if (opts.log)
    for (const auto& w : manifest.warnings) *opts.log << "warning: " << w << "\n";
  manifest.outputs = out.inventory();
  manifest.finished = detail::utc_now();
  std::ofstream mf(dir / "manifest.json", std::ios::trunc);
  mf << manifest_to_json(manifest).dump(2) << "\n";
  if (!mf) throw Error("cannot write " + (dir / "manifest.json").string());
  return manifest;
}

}  // namespace thinlab::harness
