#include <catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "thinlab/graph.hpp"
#include "thinlab/group_spec.hpp"
#include "thinlab/monodromy.hpp"

using namespace thinlab;

namespace {

MultiGraph cycle_graph(std::size_t n) {
  std::vector<std::uint32_t> adj;
  for (std::size_t v = 0; v < n; ++v) {
    adj.push_back(static_cast<std::uint32_t>((v + 1) % n));
    adj.push_back(static_cast<std::uint32_t>((v + n - 1) % n));
  }
  return MultiGraph(n, 2, adj);
}

MultiGraph two_triangles() {
  return MultiGraph(6, 2, {1, 2, 0, 2, 0, 1, 4, 5, 3, 5, 3, 4});
}

/// Cayley graph with left-multiplication edges q -> s q.
MultiGraph left_cayley(const FiniteGroup& group, const GeneratorSet& gens) {
  std::vector<std::uint32_t> adj;
  for (std::size_t q = 0; q < group.order(); ++q)
    for (const auto& s : gens.symmetrized()) adj.push_back(static_cast<std::uint32_t>(*group.index_of(s * group.element(q))));
  return MultiGraph(group.order(), gens.degree(), adj);
}

void check_handshake(const MultiGraph& g) {
  std::size_t degree_sum = 0;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    REQUIRE(g.neighbors(v).size() == g.degree());
    degree_sum += g.neighbors(v).size();
  }
  // Every edge end appears once in some list, so the total is even.
  REQUIRE(degree_sum == g.vertex_count() * g.degree());
  REQUIRE(degree_sum % 2 == 0);
  REQUIRE(g.is_symmetric());
}

}  // namespace

TEST_CASE("cyclic group Cayley graph is the N-cycle") {
  for (std::size_t n : {3, 4, 7, 12}) {
    const auto group = bfs_closure(GeneratorSet({cyclic_generator(n)}));
    const auto g = cayley_graph(group, group.generators());
    REQUIRE(g.vertex_count() == n);
    REQUIRE(g.degree() == 2);
    check_handshake(g);
    // Vertex i is the rotation by i; both neighbors differ by one step.
    for (std::size_t q = 0; q < n; ++q) {
      const auto shift = group.element(q).image(0);
      for (auto v : g.neighbors(q)) {
        const auto d = (group.element(v).image(0) - shift + static_cast<std::int64_t>(n)) % static_cast<std::int64_t>(n);
        REQUIRE((d == 1 || d == static_cast<std::int64_t>(n) - 1));
      }
    }
    CHECK(components(g).size() == 1);
  }
}

TEST_CASE("SL2(F_3) Cayley graph is 24 vertices and 4-regular") {
  const auto group = bfs_closure(sl2_generators(3));
  const auto g = cayley_graph(group, sl2_generators(3));
  CHECK(g.vertex_count() == 24);
  CHECK(g.degree() == 4);
  check_handshake(g);
  CHECK(g.labels().size() == 24);
  CHECK(g.labels()[0] == group.encoding(0));
}

TEST_CASE("trivial group gives a single vertex with loops") {
  const auto group = make_group("trivial");
  const GeneratorSet gens({GroupElement::identity_permutation(1), GroupElement::identity_permutation(1)});
  const auto g = cayley_graph(group, gens);
  REQUIRE(g.vertex_count() == 1);
  CHECK(g.degree() == 4);
  CHECK(g.multiplicity(0, 0) == 4);
}

TEST_CASE("generators outside the group are rejected") {
  const auto group = bfs_closure(GeneratorSet({GroupElement::matrix(5, {{1, 1}, {0, 1}})}));
  CHECK_THROWS_AS(cayley_graph(group, sl2_generators(5)), InvalidArgument);
}

TEST_CASE("torsion Schreier graph of SL2(F_5)") {
  const auto g = schreier_graph(torsion_action(sl2_generators(5), 5));
  CHECK(g.vertex_count() == 24);
  CHECK(g.degree() == 4);
  check_handshake(g);
  CHECK(g.labels()[vector_state(std::vector<std::int64_t>{1, 0}, 5)] == "(1,0)");
  for (std::int64_t l : {3, 5, 7}) {
    const auto s = schreier_graph(torsion_action(sl2_generators(l), l));
    CHECK(s.vertex_count() == static_cast<std::size_t>(l * l - 1));
    CHECK(components(s).size() == 1);
  }
}

TEST_CASE("identity-only action gives loops everywhere") {
  ActionSpec action;
  action.state_count = 5;
  action.moves = {{0, 1, 2, 3, 4}, {0, 1, 2, 3, 4}};
  const auto g = schreier_graph(action);
  CHECK(g.degree() == 4);
  for (std::size_t v = 0; v < 5; ++v) CHECK(g.multiplicity(v, v) == 4);
  CHECK(components(g).size() == 5);
  action.moves.push_back({0, 0, 1, 2, 3});
  CHECK_THROWS_AS(schreier_graph(action), InvalidArgument);
}

TEST_CASE("component counts") {
  CHECK(components(cycle_graph(9)).size() == 1);
  const auto comps = components(two_triangles());
  REQUIRE(comps.size() == 2);
  CHECK(comps[0] == std::vector<std::uint32_t>{0, 1, 2});
  CHECK(comps[1] == std::vector<std::uint32_t>{3, 4, 5});
  CHECK(component_labels(two_triangles()) == std::vector<std::uint32_t>{0, 0, 0, 1, 1, 1});
}

TEST_CASE("asymmetric adjacency is rejected") {
  CHECK_THROWS_AS(MultiGraph(3, 1, {1, 2, 0}), InvalidArgument);
  CHECK_THROWS_AS(MultiGraph(2, 1, {1, 5}), InvalidArgument);
  CHECK_THROWS_AS(MultiGraph(2, 2, {1, 0}), InvalidArgument);
}

TEST_CASE("torsion Schreier graph is a quotient of its Cayley parent") {
  for (std::int64_t p : {3, 5, 7, 11}) {
    const auto gens = sl2_generators(p);
    const auto group = bfs_closure(gens);
    const auto parent = cayley_graph(group, gens, false);
    const auto quotient = schreier_graph(torsion_action(gens, p));
    CHECK(quotient_check(parent, quotient, torsion_projection(group, {{1, 0}, p})));
  }
  const auto gens = chain_generators(2, 3);
  const auto group = bfs_closure(gens);
  CHECK(quotient_check(cayley_graph(group, gens, false), schreier_graph(torsion_action(gens, 3)),
                       torsion_projection(group, {{1, 0, 0, 0}, 3})));
}

TEST_CASE("g -> g.(1,0) is a covering from the left-multiplication Cayley graph") {
  const auto gens = sl2_generators(5);
  const auto group = bfs_closure(gens);
  const auto quotient = schreier_graph(torsion_action(gens, 5));
  std::vector<std::uint32_t> proj(group.order());
  for (std::size_t q = 0; q < group.order(); ++q)
    proj[q] = vector_state(act_on_vectors(group.element(q), {{1, 0}, 5}).entries, 5);
  CHECK(quotient_check(left_cayley(group, gens), quotient, proj));
  // Against right-multiplication edges the same map is not a covering.
  CHECK_FALSE(quotient_check(cayley_graph(group, gens, false), quotient, proj));
}

TEST_CASE("trivial projections") {
  const auto gens = sl2_generators(5);
  const auto group = bfs_closure(gens);
  const auto g = cayley_graph(group, gens, false);
  std::vector<std::uint32_t> identity(g.vertex_count());
  std::iota(identity.begin(), identity.end(), 0u);
  CHECK(quotient_check(g, g, identity));
  const MultiGraph point(1, 4, {0, 0, 0, 0});
  CHECK(quotient_check(g, point, std::vector<std::uint32_t>(g.vertex_count(), 0)));
  CHECK_THROWS_AS(quotient_check(g, g, std::vector<std::uint32_t>(3, 0)), InvalidArgument);
}

TEST_CASE("Cayley graphs are vertex-transitive under left translation") {
  std::mt19937_64 rng(17);
  for (const auto& spec : {"S5", "SL2(7)", "A4"}) {
    const auto gens = parse_group_spec(spec);
    const auto group = bfs_closure(gens);
    REQUIRE(group.order() <= 1000);
    const auto g = cayley_graph(group, gens, false);
    std::uniform_int_distribution<std::size_t> pick(0, group.order() - 1);
    for (int t = 0; t < 50; ++t) {
      const auto u = pick(rng), v = pick(rng);
      const auto shift = group.element(v) * inverse(group.element(u));
      std::vector<std::uint32_t> moved;
      for (auto w : g.neighbors(u)) moved.push_back(static_cast<std::uint32_t>(*group.index_of(shift * group.element(w))));
      std::vector<std::uint32_t> target(g.neighbors(v).begin(), g.neighbors(v).end());
      std::sort(moved.begin(), moved.end());
      std::sort(target.begin(), target.end());
      REQUIRE(moved == target);
    }
  }
}

TEST_CASE("Cayley graph is connected iff the generators generate") {
  for (std::int64_t p : {3, 5, 7}) {
    const auto ambient = bfs_closure(sl2_generators(p));
    const auto t = GroupElement::matrix(p, {{1, 1}, {0, 1}});
    const auto s = GroupElement::matrix(p, {{0, -1}, {1, 0}});
    const auto l = GroupElement::matrix(p, {{1, 0}, {1, 1}});
    for (const auto& gens : {GeneratorSet({t}), GeneratorSet({s}), GeneratorSet({t, s}), GeneratorSet({t, l}),
                             GeneratorSet({t * t, s}), GeneratorSet({s, s * s})}) {
      const auto g = cayley_graph(ambient, gens, false);
      const bool connected = components(g).size() == 1;
      REQUIRE(connected == (bfs_closure(gens).order() == ambient.order()));
      REQUIRE(components(g).size() * bfs_closure(gens).order() == ambient.order());
    }
  }
}

TEST_CASE("vector state encoding round-trips") {
  for (std::uint32_t s = 0; s < 80; ++s) REQUIRE(vector_state(state_vector(s, 4, 3).entries, 3) == s);
  CHECK_THROWS_AS(vector_state(std::vector<std::int64_t>{0, 0}, 5), InvalidArgument);
}

TEST_CASE("DOT export and binary dump") {
  const auto g = schreier_graph(torsion_action(sl2_generators(3), 3));
  std::ostringstream dot;
  write_dot(g, dot);
  CHECK(dot.str().find("graph") != std::string::npos);
  CHECK(dot.str().find("(1,0)") != std::string::npos);

  const auto big = cayley_graph(bfs_closure(sl2_generators(11)), sl2_generators(11), false);
  std::ostringstream sink;
  CHECK_THROWS_AS(write_dot(big, sink), InvalidArgument);

  for (const auto* graph : {&g, &big}) {
    std::stringstream bin(std::ios::in | std::ios::out | std::ios::binary);
    write_binary(*graph, bin);
    const auto back = read_binary(bin);
    CHECK(back.vertex_count() == graph->vertex_count());
    CHECK(back.degree() == graph->degree());
    for (std::size_t v = 0; v < back.vertex_count(); ++v) {
      std::vector<std::uint32_t> a(back.neighbors(v).begin(), back.neighbors(v).end());
      std::vector<std::uint32_t> b(graph->neighbors(v).begin(), graph->neighbors(v).end());
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      REQUIRE(a == b);
    }
  }
  std::stringstream junk("not a graph");
  CHECK_THROWS_AS(read_binary(junk), InvalidArgument);
}
