#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "thinlab/thinlab.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitTaskFailure = 1;
constexpr int kExitConfigError = 2;

std::optional<std::size_t> budget_from_env() {
  const char* text = std::getenv("THINLAB_BUDGET");
  if (!text || !*text) return std::nullopt;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(text, &end, 10);
  if (*end != '\0' || value == 0) throw thinlab::harness::ConfigError("THINLAB_BUDGET must be a positive integer");
  return static_cast<std::size_t>(value);
}

std::size_t element_budget() { return budget_from_env().value_or(thinlab::kDefaultElementBudget); }

void print_report(const thinlab::SpectralReport& r) {
  std::cout << thinlab::kReportCsvHeader << "\n" << thinlab::to_csv_row(r, true) << "\n";
}

int run_command(const std::string& config_path, std::size_t jobs, const std::string& out, std::optional<std::uint64_t> seed) {
  thinlab::harness::ExperimentConfig cfg;
  thinlab::harness::RunOptions opts;
  try {
    cfg = thinlab::harness::load_config(config_path);
    opts.budget = budget_from_env();
  } catch (const thinlab::Error& e) {
    std::cerr << config_path << ": " << e.what() << "\n";
    return kExitConfigError;
  }
  opts.jobs = jobs;
  if (!out.empty()) opts.output = out;
  opts.seed = seed;
  const auto manifest = thinlab::harness::run(cfg, opts);
  std::size_t failed = 0;
  for (const auto& t : manifest.tasks) failed += t.ok ? 0 : 1;
  std::cerr << manifest.tasks.size() - failed << "/" << manifest.tasks.size() << " tasks succeeded, "
            << manifest.outputs.size() << " output files\n";
  return failed ? kExitTaskFailure : kExitOk;
}

int census_command(std::size_t degree, const std::string& mu_text, std::optional<std::size_t> image_order,
                   const std::string& dot_path, std::size_t jobs) {
  thinlab::CensusOptions opts;
  opts.jobs = jobs;
  std::optional<thinlab::CycleType> mu;
  if (!mu_text.empty()) mu = thinlab::CycleType::parse(mu_text, degree);
  const auto result = thinlab::census(degree, mu, opts);
  std::cout << "d,mu,image_order,image_class,orbit_size,genus,pair\n";
  for (const auto& c : result.classes) {
    if (image_order && c.image_order != *image_order) continue;
    std::cout << degree << "," << c.representative.mu().to_string() << "," << c.image_order << "," << c.image_class
              << "," << c.orbit_size << "," << c.genus << "," << c.representative.to_string() << "\n";
  }
  if (mu) {
    const auto og = thinlab::origami_graph(degree, *mu, image_order, opts);
    if (og.graph.vertex_count() > 0) {
      const auto report = thinlab::lambda1(og.graph);
      std::cerr << og.graph.id() << ": " << og.graph.vertex_count() << " classes, " << report.components
                << " components, lambda1 = " << report.lambda1 << "\n";
    }
    if (!dot_path.empty()) {
      std::ofstream os(dot_path);
      if (!os) throw thinlab::Error("cannot write " + dot_path);
      thinlab::write_dot(og.graph, os);
    }
  } else if (!dot_path.empty()) {
    throw thinlab::InvalidArgument("--dot needs --mu");
  }
  return kExitOk;
}

int pra_command(const std::string& spec, std::size_t arity, std::size_t steps, std::uint64_t seed) {
  const auto group = thinlab::make_group(spec, element_budget());
  const thinlab::ProductReplacement pr(group, arity);
  for (const auto& w : pr.warnings()) std::cerr << "warning: " << w << "\n";
  std::cout << "group " << spec << ", |G| = " << group.order() << ", n = " << arity << "\n";
  std::cout << "|Epi(F_n, G)| = " << pr.epi().size() << "\n";
  std::cout << "orbit sizes:";
  for (auto s : pr.orbit_sizes()) std::cout << " " << s;
  std::cout << "\n";
  if (pr.epi().empty()) return kExitOk;
  if (pr.graph().degree() > 0) print_report(thinlab::lambda1(pr.graph()));
  const auto stats = pr.walk(steps, seed);
  std::cout << "walk: " << steps << " steps, seed " << seed << ", component " << stats.component.size()
            << " tuples, TV to uniform = " << stats.total_variation << "\n";
  return kExitOk;
}

int spectra_command(const std::string& path, const std::string& solver) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw thinlab::Error("cannot read " + path);
  auto g = thinlab::read_binary(in);
  if (g.id().empty()) g.set_id(path);
  thinlab::SolverOptions opts;
  opts.method = thinlab::parse_solver_method(solver);
  print_report(thinlab::lambda1(g, opts));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thinlab: Cayley, Schreier, product replacement and origami graph experiments"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::size_t jobs = thinlab::default_jobs();
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--jobs", jobs, "Worker threads");
  run->add_option("--out", out_dir, "Output directory (overrides the config)");
  run->add_option("--seed", seed, "Seed (overrides the config)");

  std::size_t degree = 0;
  std::string mu, dot_path;
  std::optional<std::size_t> image_order;
  auto* census = app.add_subcommand("census", "Enumerate origamis of one degree");
  census->add_option("--degree", degree, "Degree d")->required();
  census->add_option("--mu", mu, "Commutator cycle type, e.g. 3+1+1");
  census->add_option("--image-order", image_order, "Keep only pairs whose image group has this order");
  census->add_option("--dot", dot_path, "Write the SL2(Z) action graph as DOT (needs --mu)");
  census->add_option("--jobs", jobs, "Worker threads");

  std::string group_spec;
  std::size_t arity = 2, steps = 0;
  std::uint64_t walk_seed = 0;
  auto* pra = app.add_subcommand("pra", "Product replacement graph and random walk");
  pra->add_option("--group", group_spec, "Group, e.g. S3, Z2xZ2, SL2(5)")->required();
  pra->add_option("--arity", arity, "Tuple length n")->required();
  pra->add_option("--steps", steps, "Walk length")->required();
  pra->add_option("--seed", walk_seed, "Walk seed");

  std::string graph_path, solver = "auto";
  auto* spectra = app.add_subcommand("spectra", "Spectral gap of a dumped graph");
  spectra->add_option("--graph", graph_path, "Binary graph dump")->required();
  spectra->add_option("--solver", solver, "auto, dense or iterative");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (*run) return run_command(config_path, jobs, out_dir, seed);
    if (*census) return census_command(degree, mu, image_order, dot_path, jobs);
    if (*pra) return pra_command(group_spec, arity, steps, walk_seed);
    if (*spectra) return spectra_command(graph_path, solver);
  } catch (const thinlab::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitTaskFailure;
  }
  return kExitOk;
}
