#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "thinlab/harness.hpp"

using namespace thinlab;
using namespace thinlab::harness;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "thinlab_tests" / name;
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

RunOptions quiet(const fs::path& out, std::size_t jobs = 2) {
  RunOptions o;
  o.output = out;
  o.jobs = jobs;
  o.log = nullptr;
  return o;
}

std::string config_error_for(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("config validation") {
  CHECK(config_error_for(R"({"kind": "cayley-sweep", "genus": 1})").find("'primes'") != std::string::npos);
  CHECK(config_error_for(R"({"kind": "cayley-sweep", "primes": [3, 4]})").find("not prime") != std::string::npos);
  CHECK(config_error_for(R"({"kind": "cayley-sweep", "primes": [3], "budget": 0})").find("'budget'") != std::string::npos);
  CHECK(config_error_for(R"({"kind": "cayley-sweep", "primes": [3], "seed": -1})").find("'seed'") != std::string::npos);
  CHECK(config_error_for(R"({"kind": "cayley-sweep", "primes": [3], "colour": 1})").find("'colour'") != std::string::npos);
  CHECK(config_error_for(R"({"kind": "pra", "groups": ["S3"], "arities": [2], "primes": [3]})").find("'primes'") !=
        std::string::npos);
  CHECK(config_error_for(R"({"kind": "warp"})").find("'kind'") != std::string::npos);
  CHECK(config_error_for(R"({"kind": "pra", "groups": ["Q8"], "arities": [2]})").find("'groups'") != std::string::npos);
  CHECK(config_error_for(R"({"kind": "origami-census", "degrees": [9]})").find("'degrees'") != std::string::npos);
  CHECK(config_error_for(R"({"kind": "origami-census", "degrees": [3], "mu": "5"})").find("'mu'") != std::string::npos);
  CHECK(config_error_for(R"({"kind": "cayley-sweep", "primes": [3], "generators": "mystery"})").find("'generators'") !=
        std::string::npos);
  CHECK(config_error_for(R"({"kind": "cayley-sweep", "primes": [3], "tolerance": -1})").find("'tolerance'") !=
        std::string::npos);
  CHECK(config_error_for(R"({"kind": "cayley-sweep", "primes": [3], "solver": "magic"})").find("'solver'") !=
        std::string::npos);
  CHECK(config_error_for("[1, 2]").find("object") != std::string::npos);

  const auto syntax = config_error_for("{\n  \"kind\": \"pra\",\n  \"groups\": [\"S3\"\n}\n");
  CHECK(syntax.find("line 4") != std::string::npos);

  const auto cfg = parse_config(R"({"kind": "cayley-sweep", "primes": [3, 5], "seed": 18446744073709551615})");
  CHECK(cfg.seed == 18446744073709551615ULL);
  CHECK(cfg.generators == "standard");
  CHECK(cfg.budget == kDefaultElementBudget);
}

TEST_CASE("cayley sweep writes one row per prime") {
  const auto out = scratch("cayley");
  const auto cfg = parse_config(R"({"kind": "cayley-sweep", "genus": 1, "primes": [3, 5, 7], "gens": "standard"})");
  const auto manifest = run(cfg, quiet(out));
  CHECK(manifest.succeeded());
  const auto rows = lines_of(slurp(out / "spectra.csv"));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == kReportCsvHeader);
  CHECK(rows[1].rfind("cayley-g1-standard-p3,24,4,", 0) == 0);
  CHECK(rows[2].rfind("cayley-g1-standard-p5,120,4,", 0) == 0);
  CHECK(rows[3].rfind("cayley-g1-standard-p7,336,4,", 0) == 0);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].find(",1,dense,") != std::string::npos);
  CHECK(lines_of(slurp(out / "lambda1_logN.dat")).size() == 4);
  CHECK(lines_of(slurp(out / "lambda1_p.dat"))[1].rfind("3 ", 0) == 0);
  const auto fit = fit_from_json(Json::parse(slurp(out / "lambda1_fit.json")));
  CHECK(fit.series.size() == 3);
  CHECK(fit.c > 0.0);
}

TEST_CASE("point-pushing congruence report") {
  const auto out = scratch("pointpush");
  const auto manifest = run(parse_config(R"({"kind": "pointpush", "genus": 1, "primes": [3, 5]})"), quiet(out));
  CHECK(manifest.succeeded());
  const auto j = Json::parse(slurp(out / "congruence.json"));
  CHECK(j["trivial_mod2"].get<bool>());
  REQUIRE(j["primes"].size() == 2);
  for (const auto& p : j["primes"]) CHECK(p["surjective"].get<bool>());
  const auto catalog = catalog_from_json(Json::parse(slurp(out / "generators.json")));
  CHECK(catalog.size() == 2);
  CHECK(catalog[0].modulus() == 0);
}

TEST_CASE("schreier sweep checks the covering") {
  const auto out = scratch("schreier");
  const auto manifest =
      run(parse_config(R"({"kind": "schreier-sweep", "primes": [3, 5, 7], "dot": true, "dump": true})"), quiet(out));
  CHECK(manifest.succeeded());
  const auto rows = lines_of(slurp(out / "quotient.csv"));
  REQUIRE(rows.size() == 4);
  CHECK(rows[1].rfind("3,8,8,true,", 0) == 0);
  CHECK(rows[3].rfind("7,48,48,true,", 0) == 0);
  CHECK(fs::exists(out / "graphs" / "schreier-g1-standard-p5.dot"));
  std::ifstream dump(out / "graphs" / "schreier-g1-standard-p5.tlg", std::ios::binary);
  CHECK(read_binary(dump).vertex_count() == 24);
}

TEST_CASE("pra and origami experiments") {
  const auto pra_out = scratch("pra");
  const auto m1 = run(parse_config(R"({"kind": "pra", "groups": ["Z2xZ2", "S3"], "arities": [1, 2], "steps": 1000,
                                       "checkpoints": [100, 500]})"),
                      quiet(pra_out));
  CHECK(m1.succeeded());
  const auto rows = lines_of(slurp(pra_out / "pra.csv"));
  REQUIRE(rows.size() == 5);
  CHECK(rows[2].rfind("Z2xZ2,2,4,6,", 0) == 0);
  CHECK(rows[4].rfind("S3,2,6,18,18,8,", 0) == 0);
  CHECK(rows[4].find("100:") != std::string::npos);
  CHECK_FALSE(m1.warnings.empty());

  const auto og_out = scratch("origami");
  const auto m2 = run(parse_config(R"({"kind": "origami-census", "degrees": [3, 4], "mu": "3"})"), quiet(og_out));
  CHECK(m2.succeeded());
  const auto census_rows = lines_of(slurp(og_out / "census.csv"));
  CHECK(census_rows.size() == 1 + census(3, CycleType::parse("3", 3)).classes.size() +
                                  census(4, CycleType::parse("3", 4)).classes.size());
  CHECK(lines_of(slurp(og_out / "spectra.csv")).size() == 3);
}

TEST_CASE("per-task failures do not stop sibling tasks") {
  const auto out = scratch("failures");
  const auto manifest =
      run(parse_config(R"({"kind": "cayley-sweep", "primes": [2, 3, 11, 5], "budget": 200})"), quiet(out, 3));
  CHECK_FALSE(manifest.succeeded());
  REQUIRE(manifest.tasks.size() == 4);
  CHECK(manifest.tasks[0].ok);
  CHECK(manifest.tasks[1].ok);
  CHECK_FALSE(manifest.tasks[2].ok);
  CHECK(manifest.tasks[2].error.find("budget") != std::string::npos);
  CHECK(manifest.tasks[3].ok);
  CHECK(lines_of(slurp(out / "spectra.csv")).size() == 4);
  const auto j = Json::parse(slurp(out / "manifest.json"));
  CHECK(j["tasks"][2]["status"] == "failed");

  RunOptions o = quiet(scratch("budget_override"));
  o.budget = 10;
  CHECK_FALSE(run(parse_config(R"({"kind": "cayley-sweep", "primes": [5]})"), o).succeeded());
}

TEST_CASE("manifest inventory matches the output directory") {
  const auto out = scratch("inventory");
  const auto manifest =
      run(parse_config(R"({"kind": "schreier-sweep", "primes": [3, 5], "dot": true, "dump": true})"), quiet(out));
  std::set<std::string> declared, on_disk;
  for (const auto& f : manifest.outputs) {
    declared.insert(f.path);
    CHECK(fs::file_size(out / f.path) == f.bytes);
  }
  for (const auto& e : fs::recursive_directory_iterator(out))
    if (e.is_regular_file()) on_disk.insert(fs::relative(e.path(), out).generic_string());
  on_disk.erase("manifest.json");
  CHECK(declared == on_disk);
  const auto j = Json::parse(slurp(out / "manifest.json"));
  CHECK(j["outputs"].size() == manifest.outputs.size());
  CHECK(j["config_hash"].get<std::string>().size() == 16);
  CHECK(j["tool_version"] == kToolVersion);
}

TEST_CASE("outputs are byte-identical across runs and job counts") {
  const auto cfg = parse_config(R"({"kind": "pra", "groups": ["S3", "Z3xZ3"], "arities": [2], "steps": 5000})");
  const auto a = scratch("det_a"), b = scratch("det_b");
  const auto ma = run(cfg, quiet(a, 1));
  const auto mb = run(cfg, quiet(b, 4));
  REQUIRE(ma.outputs.size() == mb.outputs.size());
  for (const auto& f : ma.outputs) CHECK(slurp(a / f.path) == slurp(b / f.path));
  CHECK(ma.config_hash == mb.config_hash);

  const auto c = scratch("det_c");
  RunOptions reseeded = quiet(c);
  reseeded.seed = 99;
  const auto mc = run(cfg, reseeded);
  CHECK(mc.config_hash != ma.config_hash);
  CHECK(slurp(c / "pra.csv") != slurp(a / "pra.csv"));
}

TEST_CASE("plot data") {
  const auto out = scratch("plot");
  fs::create_directories(out);
  harness::detail::OutputWriter writer(out);
  std::vector<PlotPoint> points;
  for (std::int64_t p : {3, 5, 7}) {
    SpectralReport r;
    r.vertices = static_cast<std::size_t>(p * (p * p - 1));
    r.lambda1 = 0.5 / static_cast<double>(p);
    points.push_back({p, r});
  }
  CHECK(emit_plotdata(points, writer, "three").empty());
  const auto rows = lines_of(slurp(out / "three_logN.dat"));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].front() == '#');
  const auto fit_text = slurp(out / "three_fit.json");
  const auto fit = fit_from_json(Json::parse(fit_text));
  CHECK(fit == esperantist_fit({{24, 0.5 / 3}, {120, 0.1}, {336, 0.5 / 7}}));
  CHECK(fit_to_json(fit).dump(2) + "\n" == fit_text);

  std::vector<PlotPoint> disconnected = {{2, SpectralReport{}}};
  const auto warnings = emit_plotdata(disconnected, writer, "empty");
  CHECK_FALSE(warnings.empty());
  CHECK(lines_of(slurp(out / "empty_logN.dat")).size() == 1);
  CHECK(lines_of(slurp(out / "empty_p.dat")).size() == 1);
  CHECK(Json::parse(slurp(out / "empty_fit.json")).contains("error"));
}

TEST_CASE("catalog generators") {
  const auto cfg = load_config(fs::path(THINLAB_CONFIG_DIR) / "catalog_sweep.json");
  CHECK(cfg.catalog.size() == 2);
  const auto out = scratch("catalog");
  CHECK(run(cfg, quiet(out)).succeeded());
  CHECK(lines_of(slurp(out / "spectra.csv")).size() == 5);

  const auto missing = fs::temp_directory_path() / "thinlab_tests" / "missing_catalog.json";
  fs::create_directories(missing.parent_path());
  std::ofstream(missing) << R"({"kind": "cayley-sweep", "primes": [3], "generators": "catalog", "catalog": "nope.json"})";
  CHECK_THROWS_AS(load_config(missing), ConfigError);
}

TEST_CASE("shipped configs parse") {
  for (const auto& e : fs::directory_iterator(THINLAB_CONFIG_DIR)) {
    if (e.path().extension() != ".json") continue;
    INFO(e.path());
    CHECK_NOTHROW(load_config(e.path()));
  }
}
