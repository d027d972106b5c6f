#pragma once

// The product replacement graph on Epi(F_n, G): generating n-tuples of a
// finite group G joined by the 4n(n-1) moves g_i <- g_j^{+-1} g_i and
// g_i <- g_i g_j^{+-1} (i != j).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "thinlab/error.hpp"
#include "thinlab/graph.hpp"
#include "thinlab/group.hpp"
#include "thinlab/union_find.hpp"

namespace thinlab {

/// Default cap on |G|^n candidate tuples examined by enumerate_epi.
inline constexpr std::size_t kDefaultTupleBudget = 10'000'000;

/// An n-tuple of element positions in a FiniteGroup.
struct EpiTuple {
  std::vector<std::uint32_t> elements;

  friend bool operator==(const EpiTuple&, const EpiTuple&) = default;
};

enum class Side : std::uint8_t { left, right };

/// g_i <- g_j^sign * g_i (left) or g_i * g_j^sign (right); 0-based i != j.
struct PraMove {
  std::size_t i = 0;
  std::size_t j = 1;
  Side side = Side::left;
  int sign = 1;

  PraMove inverse() const { return PraMove{i, j, side, -sign}; }

  friend bool operator==(const PraMove&, const PraMove&) = default;
};

/// All 4n(n-1) moves, ordered by (i, j, side, sign) with + before -.
inline std::vector<PraMove> all_moves(std::size_t arity) {
  std::vector<PraMove> out;
  for (std::size_t i = 0; i < arity; ++i)
    for (std::size_t j = 0; j < arity; ++j) {
      if (i == j) continue;
      for (Side side : {Side::left, Side::right})
        for (int sign : {1, -1}) out.push_back(PraMove{i, j, side, sign});
    }
  return out;
}

inline EpiTuple apply_move(const MultiplicationTable& table, const EpiTuple& t, const PraMove& m) {
  if (m.i == m.j || m.i >= t.elements.size() || m.j >= t.elements.size())
    throw InvalidArgument("apply_move: invalid move indices");
  EpiTuple out = t;
  const std::uint32_t gj = m.sign > 0 ? t.elements[m.j] : table.inverse(t.elements[m.j]);
  const std::uint32_t gi = t.elements[m.i];
  out.elements[m.i] = m.side == Side::left ? table.multiply(gj, gi) : table.multiply(gi, gj);
  return out;
}

struct WalkStats {
  std::size_t steps = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint32_t> component;  // vertex ids of the start component, ascending
  std::vector<std::size_t> visits;       // aligned with component
  double total_variation = 0.0;
  std::vector<std::pair<std::size_t, double>> checkpoints;  // (steps, TV) along the walk

  friend bool operator==(const WalkStats&, const WalkStats&) = default;
};

/// Epi(F_n, G) together with its product replacement graph.
class ProductReplacement {
 public:
  ProductReplacement(const FiniteGroup& group, std::size_t arity, std::size_t budget = kDefaultTupleBudget)
      : group_(group), arity_(arity), table_(group), moves_(all_moves(arity)) {
    if (arity == 0) throw InvalidArgument("product replacement needs arity n >= 1");
    enumerate(budget);
    build_graph();
    if (arity == 1) warnings_.push_back("arity 1 has no product replacement moves; graph is 0-regular");
  }

  const FiniteGroup& group() const { return group_; }
  std::size_t arity() const { return arity_; }
  const MultiplicationTable& table() const { return table_; }
  const std::vector<PraMove>& moves() const { return moves_; }
  /// Epi(F_n, G) in lexicographic order of the concatenated element encodings.
  const std::vector<EpiTuple>& epi() const { return epi_; }
  const MultiGraph& graph() const { return graph_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  bool generates(const EpiTuple& t) const {
    return table_.generated_order(t.elements) == table_.order();
  }

  EpiTuple apply(const EpiTuple& t, const PraMove& m) const { return apply_move(table_, t, m); }

  std::optional<std::uint32_t> vertex_of(const EpiTuple& t) const {
    auto it = vertex_.find(key(t));
    if (it == vertex_.end()) return std::nullopt;
    return it->second;
  }

  std::string encode(const EpiTuple& t) const {
    std::string out;
    for (auto e : t.elements) out += group_.encoding(e);
    return out;
  }

  /// Orbit sizes of the move action, from union-find over the move closure,
  /// ordered by smallest member.
  std::vector<std::size_t> orbit_sizes() const {
    DisjointSets sets(epi_.size());
    for (std::uint32_t v = 0; v < epi_.size(); ++v)
      for (const auto& m : moves_) sets.unite(v, *vertex_of(apply(epi_[v], m)));
    return sets.sizes();
  }

  /// Lazy walk from the lexicographically least tuple: hold with probability
  /// 1/2, otherwise take a uniformly random move.
  WalkStats walk(std::size_t steps, std::uint64_t seed, std::vector<std::size_t> checkpoints = {}) const {
    WalkStats stats;
    stats.steps = steps;
    stats.seed = seed;
    const auto labels = component_labels(graph_);
    const std::uint32_t start = 0;
    std::vector<std::uint32_t> slot(graph_.vertex_count(), 0);
    for (std::uint32_t v = 0; v < graph_.vertex_count(); ++v) {
      if (labels[v] == labels[start]) {
        slot[v] = static_cast<std::uint32_t>(stats.component.size());
        stats.component.push_back(v);
      }
    }
    stats.visits.assign(stats.component.size(), 0);
    std::sort(checkpoints.begin(), checkpoints.end());
    std::size_t next_checkpoint = 0;

    std::mt19937_64 rng(seed);
    const std::size_t k = graph_.degree();
    std::uint32_t at = start;
    for (std::size_t s = 1; s <= steps; ++s) {
      const std::uint64_t r = rng();
      if ((r & 1) == 0 && k > 0) at = graph_.neighbors(at)[uniform_below(rng, k)];
      ++stats.visits[slot[at]];
      while (next_checkpoint < checkpoints.size() && checkpoints[next_checkpoint] == s)
        stats.checkpoints.emplace_back(s, total_variation(stats.visits, s, slot[start])), ++next_checkpoint;
    }
    stats.total_variation = total_variation(stats.visits, steps, slot[start]);
    return stats;
  }

 private:
  static std::size_t uniform_below(std::mt19937_64& rng, std::size_t k) {
    const std::uint64_t bound = static_cast<std::uint64_t>(k);
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t r;
    do r = rng();
    while (r >= limit);
    return static_cast<std::size_t>(r % bound);
  }

  /// TV distance of the empirical visit distribution to uniform; with no
  /// steps the distribution is the point mass at the start.
  static double total_variation(const std::vector<std::size_t>& visits, std::size_t steps, std::uint32_t start_slot) {
    const double uniform = 1.0 / static_cast<double>(visits.size());
    double tv = 0.0;
    for (std::size_t i = 0; i < visits.size(); ++i) {
      const double p = steps == 0 ? (i == start_slot ? 1.0 : 0.0)
                                  : static_cast<double>(visits[i]) / static_cast<double>(steps);
      tv += std::abs(p - uniform);
    }
    return tv / 2.0;
  }

  std::uint64_t key(const EpiTuple& t) const {
    std::uint64_t k = 0;
    for (auto e : t.elements) k = k * table_.order() + e;
    return k;
  }

  void enumerate(std::size_t budget) {
    const std::size_t order = group_.order();
    double candidates = std::pow(static_cast<double>(order), static_cast<double>(arity_));
    if (candidates > static_cast<double>(budget))
      throw BudgetExceeded("enumerate_epi: |G|^n exceeds the tuple budget",
                           static_cast<std::size_t>(std::min(candidates, 1e18)), budget);
    // Elements sorted by canonical encoding.
    std::vector<std::uint32_t> by_encoding(order);
    std::iota(by_encoding.begin(), by_encoding.end(), std::uint32_t{0});
    std::sort(by_encoding.begin(), by_encoding.end(), [this](std::uint32_t a, std::uint32_t b) {
      return group_.encoding(a) < group_.encoding(b);
    });
    std::vector<std::size_t> digits(arity_, 0);
    EpiTuple t{std::vector<std::uint32_t>(arity_)};
    while (true) {
      for (std::size_t i = 0; i < arity_; ++i) t.elements[i] = by_encoding[digits[i]];
      if (generates(t)) epi_.push_back(t);
      std::size_t pos = arity_;
      while (pos > 0 && ++digits[pos - 1] == order) digits[--pos] = 0;
      if (pos == 0) break;
    }
  }

  void build_graph() {
    for (std::uint32_t v = 0; v < epi_.size(); ++v) vertex_.emplace(key(epi_[v]), v);
    const std::size_t k = moves_.size();
    std::vector<std::uint32_t> adjacency(epi_.size() * k);
    std::vector<std::string> labels;
    for (std::uint32_t v = 0; v < epi_.size(); ++v) {
      for (std::size_t t = 0; t < k; ++t) {
        auto w = vertex_of(apply(epi_[v], moves_[t]));
        if (!w) throw InternalError("product replacement move left Epi(F_n, G)");
        adjacency[v * k + t] = *w;
      }
      labels.push_back(encode(epi_[v]));
    }
    graph_ = MultiGraph(epi_.size(), k, std::move(adjacency), std::move(labels),
                        "pra-" + group_.generators().label() + "-n" + std::to_string(arity_));
  }

  FiniteGroup group_;
  std::size_t arity_;
  MultiplicationTable table_;
  std::vector<PraMove> moves_;
  std::vector<EpiTuple> epi_;
  std::unordered_map<std::uint64_t, std::uint32_t> vertex_;
  MultiGraph graph_;
  std::vector<std::string> warnings_;
};

inline std::vector<EpiTuple> enumerate_epi(const FiniteGroup& group, std::size_t arity,
                                           std::size_t budget = kDefaultTupleBudget) {
  return ProductReplacement(group, arity, budget).epi();
}

inline MultiGraph pra_graph(const FiniteGroup& group, std::size_t arity) {
  return ProductReplacement(group, arity).graph();
}

inline WalkStats pra_walk(const FiniteGroup& group, std::size_t arity, std::size_t steps, std::uint64_t seed) {
  return ProductReplacement(group, arity).walk(steps, seed);
}

inline std::vector<std::size_t> transitivity_report(const FiniteGroup& group, std::size_t arity) {
  return ProductReplacement(group, arity).orbit_sizes();
}

}  // namespace thinlab
