#pragma once

// k-regular undirected multigraphs: Cayley graphs X(Q, gens) with edges
// {q, q*s}, and Cayley-Schreier graphs of group actions with edges {x, s.x}.
// Loops and parallel edges are kept. The adjacency list of a vertex holds its
// k edge endpoints, so A[u][v] counts the entries v in the list of u and a
// loop contributes 2 to A[u][u].

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "thinlab/error.hpp"
#include "thinlab/group.hpp"

namespace thinlab {

class MultiGraph {
 public:
  static constexpr std::size_t kMaxVertices = std::size_t{1} << 31;

  MultiGraph() = default;

  MultiGraph(std::size_t vertices, std::size_t degree, std::vector<std::uint32_t> adjacency,
             std::vector<std::string> labels = {}, std::string id = {})
      : vertices_(vertices), degree_(degree), adjacency_(std::move(adjacency)),
        labels_(std::move(labels)), id_(std::move(id)) {
    if (vertices_ > kMaxVertices) throw InvalidArgument("MultiGraph: too many vertices");
    if (adjacency_.size() != vertices_ * degree_)
      throw InvalidArgument("MultiGraph: adjacency size is not N*k");
    if (!labels_.empty() && labels_.size() != vertices_)
      throw InvalidArgument("MultiGraph: label count is not N");
    for (auto v : adjacency_)
      if (v >= vertices_) throw InvalidArgument("MultiGraph: neighbor id out of range");
    if (!is_symmetric()) throw InvalidArgument("MultiGraph: adjacency is not symmetric");
  }

  std::size_t vertex_count() const { return vertices_; }
  std::size_t degree() const { return degree_; }
  const std::string& id() const { return id_; }
  void set_id(std::string id) { id_ = std::move(id); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::uint32_t>& adjacency() const { return adjacency_; }

  std::span<const std::uint32_t> neighbors(std::size_t v) const {
    return std::span<const std::uint32_t>(adjacency_).subspan(v * degree_, degree_);
  }

  /// A[u][v].
  std::size_t multiplicity(std::size_t u, std::size_t v) const {
    auto n = neighbors(u);
    return static_cast<std::size_t>(std::count(n.begin(), n.end(), static_cast<std::uint32_t>(v)));
  }

  /// A[u][v] == A[v][u] for all u, v.
  bool is_symmetric() const {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> forward, backward;
    forward.reserve(adjacency_.size());
    backward.reserve(adjacency_.size());
    for (std::size_t u = 0; u < vertices_; ++u) {
      for (auto v : neighbors(u)) {
        forward.emplace_back(static_cast<std::uint32_t>(u), v);
        backward.emplace_back(v, static_cast<std::uint32_t>(u));
      }
    }
    std::sort(forward.begin(), forward.end());
    std::sort(backward.begin(), backward.end());
    return forward == backward;
  }

 private:
  std::size_t vertices_ = 0;
  std::size_t degree_ = 0;
  std::vector<std::uint32_t> adjacency_;
  std::vector<std::string> labels_;
  std::string id_;
};

/// A finite set of states permuted by a list of moves. When `symmetrize` is
/// set, schreier_graph adds the inverse of every move; otherwise the move
/// multiset must already be closed under inversion.
struct ActionSpec {
  std::size_t state_count = 0;
  std::vector<std::vector<std::uint32_t>> moves;
  std::vector<std::string> state_labels;
  bool symmetrize = true;
  std::string label;
};

inline std::vector<std::uint32_t> invert_move(std::span<const std::uint32_t> move) {
  std::vector<std::uint32_t> inv(move.size(), 0);
  std::vector<char> hit(move.size(), 0);
  for (std::size_t x = 0; x < move.size(); ++x) {
    const auto y = move[x];
    if (y >= move.size() || hit[y]) throw InvalidArgument("move is not a bijection on the states");
    hit[y] = 1;
    inv[y] = static_cast<std::uint32_t>(x);
  }
  return inv;
}

inline MultiGraph schreier_graph(const ActionSpec& action) {
  const std::size_t n = action.state_count;
  std::vector<std::vector<std::uint32_t>> symmetrized;
  for (const auto& move : action.moves) {
    if (move.size() != n) throw InvalidArgument("move does not cover every state");
    auto inv = invert_move(move);
    symmetrized.push_back(move);
    if (action.symmetrize) symmetrized.push_back(std::move(inv));
  }
  const std::size_t k = symmetrized.size();
  std::vector<std::uint32_t> adjacency(n * k);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t t = 0; t < k; ++t) adjacency[x * k + t] = symmetrized[t][x];
  return MultiGraph(n, k, std::move(adjacency), action.state_labels, action.label);
}

/// Right-multiplication Cayley graph: q is joined to q*s for each s in the
/// symmetrized generator multiset. Generators need not generate the group.
inline MultiGraph cayley_graph(const FiniteGroup& group, const GeneratorSet& gens, bool with_labels = true) {
  for (const auto& s : gens.symmetrized())
    if (!group.contains(s)) throw InvalidArgument("cayley_graph: generator " + s.to_string() + " is not in the group");
  const std::size_t n = group.order();
  const std::size_t k = gens.degree();
  std::vector<std::uint32_t> adjacency(n * k);
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t t = 0; t < k; ++t)
      adjacency[q * k + t] = static_cast<std::uint32_t>(group.product_index(q, gens.symmetrized()[t]));
  std::vector<std::string> labels;
  if (with_labels) {
    labels.reserve(n);
    for (std::size_t q = 0; q < n; ++q) labels.push_back(group.encoding(q));
  }
  return MultiGraph(n, k, std::move(adjacency), std::move(labels), gens.label());
}

/// Connected components, each sorted, ordered by their smallest vertex.
inline std::vector<std::vector<std::uint32_t>> components(const MultiGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<char> seen(n, 0);
  std::vector<std::vector<std::uint32_t>> out;
  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start]) continue;
    std::vector<std::uint32_t> comp{static_cast<std::uint32_t>(start)};
    seen[start] = 1;
    for (std::size_t head = 0; head < comp.size(); ++head) {
      for (auto v : g.neighbors(comp[head])) {
        if (!seen[v]) {
          seen[v] = 1;
          comp.push_back(v);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

/// Component id of every vertex, consistent with components().
inline std::vector<std::uint32_t> component_labels(const MultiGraph& g) {
  std::vector<std::uint32_t> label(g.vertex_count(), 0);
  const auto comps = components(g);
  for (std::size_t c = 0; c < comps.size(); ++c)
    for (auto v : comps[c]) label[v] = static_cast<std::uint32_t>(c);
  return label;
}

/// True iff `projection` is a covering map of multigraphs: for every vertex u
/// of the parent, the projected neighbor multiset of u equals the neighbor
/// multiset of projection[u]. This implies the fiber-summed adjacency of the
/// parent equals fiber size times the quotient adjacency.
inline bool quotient_check(const MultiGraph& parent, const MultiGraph& quotient,
                           std::span<const std::uint32_t> projection) {
  if (projection.size() != parent.vertex_count())
    throw InvalidArgument("quotient_check: projection must map every parent vertex");
  std::vector<char> hit(quotient.vertex_count(), 0);
  for (auto x : projection) {
    if (x >= quotient.vertex_count()) throw InvalidArgument("quotient_check: projection out of range");
    hit[x] = 1;
  }
  if (std::find(hit.begin(), hit.end(), 0) != hit.end())
    throw InvalidArgument("quotient_check: projection is not surjective");
  if (parent.degree() != quotient.degree()) return false;
  std::vector<std::uint32_t> lhs, rhs;
  for (std::size_t u = 0; u < parent.vertex_count(); ++u) {
    lhs.clear();
    for (auto v : parent.neighbors(u)) lhs.push_back(projection[v]);
    auto q = quotient.neighbors(projection[u]);
    rhs.assign(q.begin(), q.end());
    std::sort(lhs.begin(), lhs.end());
    std::sort(rhs.begin(), rhs.end());
    if (lhs != rhs) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Torsion points: the action of a matrix group on nonzero vectors of (Z/l)^n.
// ---------------------------------------------------------------------------

/// State id of a nonzero vector: sum v_i l^i, minus one.
inline std::uint32_t vector_state(std::span<const std::int64_t> v, std::int64_t l) {
  std::uint64_t r = 0, scale = 1;
  for (auto x : v) {
    r += static_cast<std::uint64_t>(x) * scale;
    scale *= static_cast<std::uint64_t>(l);
  }
  if (r == 0) throw InvalidArgument("vector_state: zero vector has no state");
  return static_cast<std::uint32_t>(r - 1);
}

inline ModVector state_vector(std::uint32_t state, std::size_t dim, std::int64_t l) {
  ModVector v{std::vector<std::int64_t>(dim, 0), l};
  std::uint64_t r = std::uint64_t{state} + 1;
  for (std::size_t i = 0; i < dim; ++i) {
    v.entries[i] = static_cast<std::int64_t>(r % static_cast<std::uint64_t>(l));
    r /= static_cast<std::uint64_t>(l);
  }
  return v;
}

/// The l^n - 1 nonzero vectors of (Z/l)^n, moved by the listed generators
/// (reduced mod l). Schreier edges join u to s.u for s in the symmetrized set.
inline ActionSpec torsion_action(const GeneratorSet& gens, std::int64_t l) {
  const auto& shape = gens.shape();
  if (shape.kind != ElementKind::matrix || shape.modulus != l)
    throw IncompatibleElements("torsion_action: generators must be matrices mod l");
  const std::size_t dim = shape.size;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < dim; ++i) total *= static_cast<std::uint64_t>(l);
  if (total - 1 > MultiGraph::kMaxVertices) throw InvalidArgument("torsion_action: too many vectors");
  ActionSpec action;
  action.state_count = static_cast<std::size_t>(total - 1);
  action.label = "torsion-" + gens.label();
  for (std::uint32_t s = 0; s < action.state_count; ++s) {
    const auto v = state_vector(s, dim, l);
    std::string label = "(";
    for (std::size_t i = 0; i < dim; ++i) label += (i ? "," : "") + std::to_string(v.entries[i]);
    action.state_labels.push_back(label + ")");
  }
  for (const auto& a : gens.generators()) {
    std::vector<std::uint32_t> move(action.state_count);
    for (std::uint32_t s = 0; s < action.state_count; ++s)
      move[s] = vector_state(act_on_vectors(a, state_vector(s, dim, l)).entries, l);
    action.moves.push_back(std::move(move));
  }
  return action;
}

/// Projection q -> q^{-1}.base from a right-multiplication Cayley graph onto
/// the torsion Schreier graph. With right-multiplication edges this is the
/// map that is a covering: (q s)^{-1}.base = s^{-1}.(q^{-1}.base).
inline std::vector<std::uint32_t> torsion_projection(const FiniteGroup& group, const ModVector& base) {
  std::vector<std::uint32_t> proj(group.order());
  for (std::size_t q = 0; q < group.order(); ++q)
    proj[q] = vector_state(act_on_vectors(inverse(group.element(q)), base).entries, base.modulus);
  return proj;
}

// ---------------------------------------------------------------------------
// Export
// ---------------------------------------------------------------------------

inline constexpr std::size_t kDotVertexLimit = 500;

/// Graphviz export; each undirected edge is written once with multiplicity.
inline void write_dot(const MultiGraph& g, std::ostream& os) {
  if (g.vertex_count() > kDotVertexLimit)
    throw InvalidArgument("write_dot: graph has more than " + std::to_string(kDotVertexLimit) + " vertices");
  os << "graph \"" << (g.id().empty() ? "X" : g.id()) << "\" {\n";
  // Binary labels (Cayley encodings) are left out.
  const bool printable = std::all_of(g.labels().begin(), g.labels().end(), [](const std::string& l) {
    return std::all_of(l.begin(), l.end(), [](unsigned char c) { return c >= 0x20 && c < 0x7f && c != '"' && c != '\\'; });
  });
  for (std::size_t u = 0; u < g.vertex_count(); ++u) {
    os << "  " << u;
    if (printable && !g.labels().empty()) os << " [label=\"" << g.labels()[u] << "\"]";
    os << ";\n";
  }
  for (std::size_t u = 0; u < g.vertex_count(); ++u) {
    std::vector<std::uint32_t> nbrs(g.neighbors(u).begin(), g.neighbors(u).end());
    std::sort(nbrs.begin(), nbrs.end());
    std::size_t loops = 0;
    for (auto v : nbrs) {
      if (v > u) os << "  " << u << " -- " << v << ";\n";
      if (v == u) ++loops;
    }
    for (std::size_t t = 0; t < (loops + 1) / 2; ++t) os << "  " << u << " -- " << u << ";\n";
  }
  os << "}\n";
}

namespace detail {

inline void put_u32(std::ostream& os, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b, 4);
}

inline std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) throw InvalidArgument("graph dump: truncated header");
  return std::uint32_t{b[0]} | std::uint32_t{b[1]} << 8 | std::uint32_t{b[2]} << 16 | std::uint32_t{b[3]} << 24;
}

inline void put_varint(std::ostream& os, std::uint32_t v) {
  while (v >= 0x80) {
    os.put(static_cast<char>((v & 0x7f) | 0x80));
    v >>= 7;
  }
  os.put(static_cast<char>(v));
}

inline std::uint32_t get_varint(std::istream& is) {
  std::uint32_t v = 0;
  for (int shift = 0; shift < 35; shift += 7) {
    const int c = is.get();
    if (c == std::char_traits<char>::eof()) throw InvalidArgument("graph dump: truncated adjacency");
    v |= static_cast<std::uint32_t>(c & 0x7f) << shift;
    if (!(c & 0x80)) return v;
  }
  throw InvalidArgument("graph dump: malformed varint");
}

}  // namespace detail

inline constexpr char kDumpMagic[4] = {'T', 'L', 'M', 'G'};
inline constexpr std::uint32_t kDumpVersion = 1;

/// Binary adjacency dump: "TLMG", u32 version, u32 N, u32 k (little endian),
/// then for each vertex its k neighbors in ascending order, delta encoded
/// (first delta from 0) as unsigned LEB128 varints.
inline void write_binary(const MultiGraph& g, std::ostream& os) {
  os.write(kDumpMagic, 4);
  detail::put_u32(os, kDumpVersion);
  detail::put_u32(os, static_cast<std::uint32_t>(g.vertex_count()));
  detail::put_u32(os, static_cast<std::uint32_t>(g.degree()));
  std::vector<std::uint32_t> nbrs;
  for (std::size_t u = 0; u < g.vertex_count(); ++u) {
    nbrs.assign(g.neighbors(u).begin(), g.neighbors(u).end());
    std::sort(nbrs.begin(), nbrs.end());
    std::uint32_t prev = 0;
    for (auto v : nbrs) {
      detail::put_varint(os, v - prev);
      prev = v;
    }
  }
}

inline MultiGraph read_binary(std::istream& is, std::string id = {}) {
  char magic[4];
  if (!is.read(magic, 4) || !std::equal(magic, magic + 4, kDumpMagic))
    throw InvalidArgument("graph dump: bad magic");
  if (detail::get_u32(is) != kDumpVersion) throw InvalidArgument("graph dump: unsupported version");
  const std::size_t n = detail::get_u32(is);
  const std::size_t k = detail::get_u32(is);
  std::vector<std::uint32_t> adjacency(n * k);
  for (std::size_t u = 0; u < n; ++u) {
    std::uint32_t prev = 0;
    for (std::size_t t = 0; t < k; ++t) {
      prev += detail::get_varint(is);
      adjacency[u * k + t] = prev;
    }
  }
  return MultiGraph(n, k, std::move(adjacency), {}, std::move(id));
}

}  // namespace thinlab
