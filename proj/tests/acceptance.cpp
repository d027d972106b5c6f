// Acceptance checks. Prints one [PASS]/[FAIL] line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "thinlab/harness.hpp"
#include "zoo.hpp"

using namespace thinlab;
namespace fs = std::filesystem;

namespace {

/// Collects failed sub-checks of one criterion.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

oracle::Mat to_mat(const GroupElement& g) {
  const std::size_t n = g.shape().size;
  oracle::Mat m(n, std::vector<std::int64_t>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = g.entries()[i * n + j];
  return m;
}

std::size_t naive_order(const GeneratorSet& gens, std::int64_t p) {
  std::vector<oracle::Mat> mats;
  for (const auto& s : gens.symmetrized()) mats.push_back(to_mat(s));
  return oracle::closure(mats, p).size();
}

void criterion_group_orders(Check& c) {
  for (std::int64_t p : {2, 3, 5, 7, 11}) {
    const auto gens = sl2_generators(p);
    const auto order = bfs_closure(gens).order();
    const auto formula = static_cast<std::size_t>(p * (p * p - 1));
    c.expect(order == formula, "SL2(" + std::to_string(p) + ") order " + std::to_string(order));
    c.expect(naive_order(gens, p) == formula, "naive closure of SL2(" + std::to_string(p) + ")");
  }
  const auto gens = chain_generators(2, 3);
  const auto order = bfs_closure(gens).order();
  c.expect(order == 51840, "Sp4(3) order " + std::to_string(order));
  c.expect(sp_order(2, 3) == 51840, "Sp4(3) formula");
  c.expect(naive_order(gens, 3) == 51840, "naive closure of Sp4(3)");
}

void criterion_spectra(Check& c) {
  SolverOptions dense, iterative;
  dense.method = SolverMethod::dense;
  iterative.method = SolverMethod::iterative;
  const auto graphs = zoo::graphs();
  c.expect(graphs.size() >= 20, "fewer than 20 graphs");
  for (const auto& g : graphs) {
    const auto d = lambda1(g, dense), i = lambda1(g, iterative);
    const auto comps = components(g).size();
    c.expect(d.zero_multiplicity == comps && i.zero_multiplicity == comps, g.id() + ": zero multiplicity");
    c.expect(std::abs(d.lambda1 - i.lambda1) <= 1e-8, g.id() + ": dense and iterative differ");
  }
  const auto k4 = zoo::complete_graph(4);
  c.expect(std::abs(lambda1(k4, dense).lambda1 - 4.0 / 3.0) <= 1e-9, "K4 dense");
  c.expect(std::abs(lambda1(k4, iterative).lambda1 - 4.0 / 3.0) <= 1e-6, "K4 iterative");
  for (std::size_t n : {5, 12, 64, 300}) {
    const double exact = 1.0 - std::cos(2.0 * std::numbers::pi / static_cast<double>(n));
    const auto g = zoo::cycle_graph(n);
    c.expect(std::abs(lambda1(g, dense).lambda1 - exact) <= 1e-9, g.id() + " dense");
    c.expect(std::abs(lambda1(g, iterative).lambda1 - exact) <= 1e-6, g.id() + " iterative");
  }
}

GeneratorSet reduced(const GeneratorSet& gens, std::int64_t p) {
  std::vector<GroupElement> out;
  for (const auto& g : gens.generators()) out.push_back(g.reduced(p));
  return GeneratorSet(std::move(out));
}

void criterion_strong_approximation(Check& c) {
  struct Case {
    std::string name;
    GeneratorSet ambient;
    GeneratorSet gens;
  };
  std::vector<Case> cases;
  for (std::int64_t p : {2, 3, 5, 7, 11, 13}) {
    const auto sl2 = sl2_generators(p);
    const auto t = GroupElement::matrix(p, {{1, 1}, {0, 1}});
    cases.push_back({"SL2 standard p=" + std::to_string(p), sl2, sl2});
    cases.push_back({"SL2 unipotent only p=" + std::to_string(p), sl2, GeneratorSet({t})});
    cases.push_back({"SL2 point-push p=" + std::to_string(p), sl2, reduced(point_pushing_images(1, 0), p)});
  }
  for (std::int64_t p : {2, 3}) {
    const auto chain = chain_generators(2, p);
    cases.push_back({"Sp4 chain p=" + std::to_string(p), chain, chain});
    cases.push_back({"Sp4 point-push p=" + std::to_string(p), chain, reduced(point_pushing_images(2, 0), p)});
    cases.push_back({"Sp4 braid subset p=" + std::to_string(p), chain,
                     GeneratorSet({chain.generators()[0], chain.generators()[1]})});
  }
  for (const auto& cs : cases) {
    const auto group = bfs_closure(cs.ambient);
    const bool surjective = bfs_closure(cs.gens).order() == group.order();
    const bool connected = components(cayley_graph(group, cs.gens, false)).size() == 1;
    c.expect(surjective == connected, cs.name);
  }
}

void criterion_torsion_cover(Check& c) {
  for (std::int64_t l : {3, 5, 7, 11, 13, 17, 19, 23}) {
    const auto gens = sl2_generators(l);
    const auto group = bfs_closure(gens);
    const auto parent = cayley_graph(group, gens, false);
    const auto schreier = schreier_graph(torsion_action(gens, l));
    const auto tag = "l=" + std::to_string(l);
    c.expect(schreier.vertex_count() == static_cast<std::size_t>(l * l - 1), tag + ": vertex count");
    c.expect(quotient_check(parent, schreier, torsion_projection(group, {{1, 0}, l})), tag + ": quotient check");
    c.expect(lambda1(schreier).lambda1 >= lambda1(parent).lambda1 - 1e-9, tag + ": gap comparison");
  }
}

void criterion_braids(Check& c) {
  for (std::size_t g = 1; g <= 3; ++g) {
    const auto chain = build_chain(g);
    auto sigma = [&](int i) { return braid_to_matrix(BraidWord(chain.cycles.size(), {i}), chain, 0); };
    const int n = static_cast<int>(2 * g);
    for (int i = 1; i < n; ++i)
      c.expect(sigma(i) * sigma(i + 1) * sigma(i) == sigma(i + 1) * sigma(i) * sigma(i + 1),
               "braid relation g=" + std::to_string(g));
    for (int i = 1; i <= n; ++i)
      for (int j = i + 2; j <= n; ++j)
        c.expect(sigma(i) * sigma(j) == sigma(j) * sigma(i), "far commutation g=" + std::to_string(g));
    for (const auto& w : pure_braid_generators(g))
      c.expect(braid_to_matrix(w, chain, 0).reduced(2).is_identity(), "pure braid not I mod 2");
  }
  for (auto [g, l] : std::vector<std::pair<std::size_t, std::int64_t>>{{1, 3}, {1, 5}, {2, 3}}) {
    const auto report = congruence_report(point_pushing_images(g, 0).generators(), {l});
    c.expect(report.primes.at(0).surjective,
             "point pushing not surjective for g=" + std::to_string(g) + " l=" + std::to_string(l));
  }
}

std::size_t brute_force_epi(const FiniteGroup& group, std::size_t arity) {
  std::vector<oracle::Images> elements;
  for (std::size_t i = 0; i < group.order(); ++i) {
    const auto e = group.element(i);
    elements.emplace_back(e.entries().begin(), e.entries().end());
  }
  std::size_t total = 1, count = 0;
  for (std::size_t i = 0; i < arity; ++i) total *= group.order();
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<oracle::Images> tuple;
    for (std::size_t x = code, i = 0; i < arity; ++i, x /= group.order()) tuple.push_back(elements[x % group.order()]);
    count += oracle::perm_closure(tuple, static_cast<int>(group.shape().size)).size() == group.order();
  }
  return count;
}

/// Orbit count of the PRA moves on raw tuples, merged with union-find.
std::size_t dsu_orbit_count(const ProductReplacement& pr) {
  std::map<std::vector<std::uint32_t>, std::size_t> index;
  for (const auto& t : pr.epi()) index.emplace(t.elements, index.size());
  const auto& table = pr.table();
  oracle::Dsu dsu(index.size());
  for (const auto& [tuple, id] : index)
    for (std::size_t i = 0; i < tuple.size(); ++i)
      for (std::size_t j = 0; j < tuple.size(); ++j) {
        if (i == j) continue;
        const auto gj = tuple[j], gj_inv = table.inverse(tuple[j]);
        for (auto other : {gj, gj_inv})
          for (bool left : {true, false}) {
            auto next = tuple;
            next[i] = left ? table.multiply(other, tuple[i]) : table.multiply(tuple[i], other);
            dsu.unite(id, index.at(next));
          }
      }
  return dsu.count();
}

void criterion_pra(Check& c) {
  const auto v4 = make_group("Z2xZ2");
  c.expect(enumerate_epi(v4, 2).size() == 6, "|Epi(F2, Z2xZ2)| != 6");
  c.expect(brute_force_epi(v4, 2) == 6, "brute-force Epi(F2, Z2xZ2) != 6");
  const auto s3 = make_group("S3");
  c.expect(enumerate_epi(s3, 2).size() == brute_force_epi(s3, 2), "|Epi(F2, S3)| disagrees with brute force");
  for (std::size_t n = 1; n <= 6; ++n) c.expect(all_moves(n).size() == 4 * n * (n - 1), "move count");

  std::mt19937_64 rng(2024);
  for (const auto* spec : {"S4", "A5"}) {
    const auto group = make_group(spec);
    const ProductReplacement pr(group, 2);
    std::uniform_int_distribution<std::size_t> pick(0, pr.epi().size() - 1), mv(0, pr.moves().size() - 1);
    for (int t = 0; t < 1000; ++t)
      c.expect(pr.generates(pr.apply(pr.epi()[pick(rng)], pr.moves()[mv(rng)])),
               std::string("generation lost in ") + spec);
  }
  for (const auto& [spec, n] : std::vector<std::pair<std::string, std::size_t>>{
           {"Z2xZ2", 2}, {"S3", 2}, {"Z3xZ3", 2}, {"Z5xZ5", 2}, {"A4", 2}, {"Z6", 2}, {"S3", 3}}) {
    const auto group = make_group(spec);
    const ProductReplacement pr(group, n);
    c.expect(components(pr.graph()).size() == dsu_orbit_count(pr),
             spec + " n=" + std::to_string(n) + ": component count");
  }
}

void criterion_origami(Check& c) {
  for (int d = 1; d <= 5; ++d) {
    const auto perms = oracle::all_perms(d);
    std::size_t transitive = 0;
    for (const auto& a : perms)
      for (const auto& b : perms) transitive += oracle::transitive(a, b);
    std::size_t total = 0;
    for (const auto& cls : census(static_cast<std::size_t>(d)).classes) total += cls.orbit_size;
    c.expect(total == transitive, "census total for d=" + std::to_string(d));
  }
  for (std::size_t d = 1; d <= 5; ++d) {
    const auto all = symmetric_group(d);
    for (const auto& s : all)
      for (const auto& t : all) {
        const OrigamiPair p(s, t);
        if (!p.transitive()) continue;
        const auto order = image_group(s, t).fingerprint.order;
        for (const auto& q : nielsen_moves(p))
          c.expect(q.mu() == p.mu() && image_group(q.sigma(), q.tau()).fingerprint.order == order,
                   "Nielsen invariance at " + p.to_string());
      }
  }
  for (std::size_t d = 1; d <= 6; ++d)
    for (const auto& cls : census(d).classes)
      c.expect((cls.genus == 1) == cls.representative.commutator().is_identity(), "genus formula");
  const auto three = census(3, CycleType::parse("3", 3));
  c.expect(!three.classes.empty(), "no d=3 mu=(3) classes");
  for (const auto& cls : three.classes) c.expect(cls.genus == 2, "d=3 mu=(3) genus");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion_determinism(Check& c) {
  const fs::path work = fs::temp_directory_path() / "thinlab_acceptance";
  std::size_t configs = 0;
  for (const auto& entry : fs::directory_iterator(THINLAB_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    ++configs;
    const auto cfg = harness::load_config(entry.path());
    const auto name = entry.path().stem().string();
    std::vector<harness::RunManifest> manifests;
    for (const auto* run : {"a", "b"}) {
      harness::RunOptions opts;
      opts.output = work / name / run;
      opts.log = nullptr;
      opts.jobs = run[0] == 'a' ? 1 : 4;
      fs::remove_all(*opts.output);
      manifests.push_back(harness::run(cfg, opts));
    }
    c.expect(manifests[0].succeeded() && manifests[1].succeeded(), name + ": run failed");
    c.expect(manifests[0].outputs.size() == manifests[1].outputs.size(), name + ": output sets differ");
    for (const auto& f : manifests[0].outputs)
      c.expect(slurp(work / name / "a" / f.path) == slurp(work / name / "b" / f.path), name + ": " + f.path + " differs");
  }
  c.expect(configs > 0, "no shipped configs found");
  fs::remove_all(work);
}

void criterion_expansion(Check& c) {
  std::vector<std::int64_t> primes;
  for (std::int64_t p = 3; p <= 47; ++p)
    if (is_prime(p)) primes.push_back(p);
  const auto sweep = family_sweep(
      [](std::int64_t p) { return cayley_graph(bfs_closure(sl2_generators(p)), sl2_generators(p), false); }, primes);
  std::vector<SeriesPoint> series;
  for (const auto& e : sweep) {
    c.expect(e.report && e.report->lambda1 > 0.0, "p=" + std::to_string(e.prime) + ": no positive gap " + e.error);
    if (e.report) {
      series.push_back({static_cast<double>(e.report->vertices), e.report->lambda1});
      std::cout << "  p=" << e.prime << " N=" << e.report->vertices << " lambda1=" << e.report->lambda1 << "\n";
    }
  }
  const auto fit = esperantist_fit(series);
  std::cout << "  fit: lambda1 ~ " << fit.c << " * log(N)^-" << fit.exponent << "\n";
  c.expect(std::isfinite(fit.exponent) && std::isfinite(fit.c), "fit not finite");
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    std::string title;
    double seconds_limit;
    std::function<void(Check&)> body;
  };
  const std::vector<Criterion> criteria = {
      {1, "group enumeration exactness", 30, criterion_group_orders},
      {2, "spectral and combinatorial agreement", 600, criterion_spectra},
      {3, "connectivity iff surjectivity", 10, criterion_strong_approximation},
      {4, "torsion-cover Schreier structure", 120, criterion_torsion_cover},
      {5, "braid representation soundness", 120, criterion_braids},
      {6, "PRA exact counts and invariance", 60, criterion_pra},
      {7, "origami census integrity", 180, criterion_origami},
      {8, "determinism of shipped configs", 1200, criterion_determinism},
      {9, "SL2 family expansion evidence", 600, criterion_expansion},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.body(check);
    } catch (const std::exception& e) {
      check.failures.push_back(std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > cr.seconds_limit)
      check.failures.push_back("took " + std::to_string(seconds) + " s, limit " + std::to_string(cr.seconds_limit));
    const bool ok = check.failures.empty();
    failed += !ok;
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << cr.number << ": " << cr.title << " ("
              << static_cast<int>(seconds * 10) / 10.0 << " s)\n";
    for (std::size_t i = 0; i < check.failures.size() && i < 10; ++i) std::cout << "    " << check.failures[i] << "\n";
    std::cout.flush();
  }
  return failed == 0 ? 0 : 1;
}
