#pragma once

// Square-tiled surfaces (origamis): transitive pairs (sigma, tau) in S_d up
// to simultaneous conjugation, the branching datum mu = cycle type of the
// commutator [sigma, tau], and the graph X(d, mu, G) of the Nielsen action of
// the mapping class generators on those classes.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "thinlab/error.hpp"
#include "thinlab/graph.hpp"
#include "thinlab/group.hpp"
#include "thinlab/parallel.hpp"

namespace thinlab {

inline constexpr std::size_t kMaxPermDegree = 12;
inline constexpr std::size_t kDefaultOrigamiDegreeCap = 8;

/// A partition of d in descending order.
class CycleType {
 public:
  CycleType() = default;

  explicit CycleType(std::vector<int> parts) : parts_(std::move(parts)) {
    for (int p : parts_)
      if (p <= 0) throw InvalidArgument("cycle type parts must be positive");
    std::sort(parts_.begin(), parts_.end(), std::greater<>());
  }

  /// Accepts "3+1+1", "3,1,1", "(3,1,1)" or "3 1 1"; pads with 1s up to d.
  static CycleType parse(const std::string& text, std::size_t degree) {
    std::vector<int> parts;
    std::string token;
    auto flush = [&] {
      if (token.empty()) return;
      std::size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size() || v <= 0) throw InvalidArgument("bad partition '" + text + "'");
      parts.push_back(v);
      token.clear();
    };
    for (char ch : text) {
      if (ch == '+' || ch == ',' || ch == ' ' || ch == '(' || ch == ')' || ch == '[' || ch == ']')
        flush();
      else
        token.push_back(ch);
    }
    flush();
    if (parts.empty()) throw InvalidArgument("empty partition '" + text + "'");
    const int total = std::accumulate(parts.begin(), parts.end(), 0);
    if (static_cast<std::size_t>(total) > degree)
      throw InvalidArgument("partition '" + text + "' exceeds degree " + std::to_string(degree));
    parts.resize(parts.size() + (degree - static_cast<std::size_t>(total)), 1);
    return CycleType(std::move(parts));
  }

  const std::vector<int>& parts() const { return parts_; }
  std::size_t degree() const { return static_cast<std::size_t>(std::accumulate(parts_.begin(), parts_.end(), 0)); }
  std::size_t cycle_count() const { return parts_.size(); }
  bool is_trivial() const {
    return std::all_of(parts_.begin(), parts_.end(), [](int p) { return p == 1; });
  }

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < parts_.size(); ++i) out += (i ? "+" : "") + std::to_string(parts_[i]);
    return out;
  }

  friend auto operator<=>(const CycleType&, const CycleType&) = default;

 private:
  std::vector<int> parts_;
};

/// A permutation of {0..d-1} with d <= 12, stored inline. Products follow the
/// left-action convention: (a*b)[x] = a[b[x]].
class Perm {
 public:
  Perm() = default;

  explicit Perm(std::size_t degree) : degree_(static_cast<std::uint8_t>(degree)) {
    if (degree > kMaxPermDegree) throw InvalidArgument("Perm: degree above " + std::to_string(kMaxPermDegree));
    for (std::size_t i = 0; i < degree; ++i) images_[i] = static_cast<std::uint8_t>(i);
  }

  template <class Range>
  static Perm from_images(const Range& images) {
    Perm p(std::size(images));
    std::array<bool, kMaxPermDegree> seen{};
    std::size_t i = 0;
    for (auto x : images) {
      if (x < 0 || static_cast<std::size_t>(x) >= p.degree_ || seen[static_cast<std::size_t>(x)])
        throw InvalidArgument("Perm: images are not a bijection");
      seen[static_cast<std::size_t>(x)] = true;
      p.images_[i++] = static_cast<std::uint8_t>(x);
    }
    return p;
  }

  static Perm from_images(std::initializer_list<int> images) { return from_images(std::vector<int>(images)); }

  /// Parses 1-based cycle notation such as "(1 2 3)(4 5)"; "()" is the identity.
  static Perm parse_cycles(const std::string& text, std::size_t degree) {
    Perm p(degree);
    std::vector<int> cycle;
    bool open = false;
    std::string token;
    auto flush = [&] {
      if (token.empty()) return;
      const int v = std::stoi(token) - 1;
      if (v < 0 || static_cast<std::size_t>(v) >= degree) throw InvalidArgument("cycle point out of range in '" + text + "'");
      cycle.push_back(v);
      token.clear();
    };
    for (char ch : text) {
      if (ch == '(') {
        if (open) throw InvalidArgument("nested cycle in '" + text + "'");
        open = true;
        cycle.clear();
      } else if (ch == ')') {
        flush();
        if (!open) throw InvalidArgument("unbalanced cycle in '" + text + "'");
        open = false;
        for (std::size_t i = 0; i < cycle.size(); ++i) {
          const auto from = static_cast<std::size_t>(cycle[i]);
          if (p.images_[from] != from) throw InvalidArgument("cycles overlap in '" + text + "'");
          p.images_[from] = static_cast<std::uint8_t>(cycle[(i + 1) % cycle.size()]);
        }
      } else if (ch == ' ' || ch == ',') {
        flush();
      } else if (std::isdigit(static_cast<unsigned char>(ch))) {
        token.push_back(ch);
      } else {
        throw InvalidArgument("unexpected character in cycle notation '" + text + "'");
      }
    }
    if (open) throw InvalidArgument("unterminated cycle in '" + text + "'");
    std::array<bool, kMaxPermDegree> seen{};
    for (std::size_t i = 0; i < degree; ++i) {
      if (seen[p.images_[i]]) throw InvalidArgument("cycles overlap in '" + text + "'");
      seen[p.images_[i]] = true;
    }
    return p;
  }

  std::size_t degree() const { return degree_; }
  std::size_t operator[](std::size_t x) const { return images_[x]; }

  Perm operator*(const Perm& b) const {
    Perm out(degree_);
    for (std::size_t x = 0; x < degree_; ++x) out.images_[x] = images_[b.images_[x]];
    return out;
  }

  Perm inverse() const {
    Perm out(degree_);
    for (std::size_t x = 0; x < degree_; ++x) out.images_[images_[x]] = static_cast<std::uint8_t>(x);
    return out;
  }

  /// h * this * h^-1.
  Perm conjugated_by(const Perm& h) const {
    Perm out(degree_);
    for (std::size_t x = 0; x < degree_; ++x) out.images_[h.images_[x]] = h.images_[images_[x]];
    return out;
  }

  bool is_identity() const {
    for (std::size_t x = 0; x < degree_; ++x)
      if (images_[x] != x) return false;
    return true;
  }

  /// Cycles in order of their smallest point, each starting at that point.
  std::vector<std::vector<std::uint8_t>> cycles() const {
    std::vector<std::vector<std::uint8_t>> out;
    std::array<bool, kMaxPermDegree> seen{};
    for (std::size_t s = 0; s < degree_; ++s) {
      if (seen[s]) continue;
      std::vector<std::uint8_t> cycle;
      for (std::size_t x = s; !seen[x]; x = images_[x]) {
        seen[x] = true;
        cycle.push_back(static_cast<std::uint8_t>(x));
      }
      out.push_back(std::move(cycle));
    }
    return out;
  }

  CycleType cycle_type() const {
    std::vector<int> parts;
    for (const auto& c : cycles()) parts.push_back(static_cast<int>(c.size()));
    return CycleType(std::move(parts));
  }

  /// Order of the permutation (lcm of cycle lengths).
  std::uint64_t order() const {
    std::uint64_t l = 1;
    for (const auto& c : cycles()) l = std::lcm(l, static_cast<std::uint64_t>(c.size()));
    return l;
  }

  /// 1-based cycle notation without fixed points, e.g. "(1 2 3)(4 5)"; "()" for
  /// the identity.
  std::string cycle_string() const {
    std::string out;
    for (const auto& c : cycles()) {
      if (c.size() == 1) continue;
      out += '(';
      for (std::size_t i = 0; i < c.size(); ++i) out += (i ? " " : "") + std::to_string(c[i] + 1);
      out += ')';
    }
    return out.empty() ? "()" : out;
  }

  /// Lehmer-code rank in [0, d!), increasing in lexicographic order.
  std::uint64_t rank() const {
    std::uint64_t r = 0;
    std::uint32_t used = 0;
    for (std::size_t i = 0; i < degree_; ++i) {
      const std::uint32_t below = static_cast<std::uint32_t>(std::popcount(used & ((1u << images_[i]) - 1)));
      r = r * (degree_ - i) + (images_[i] - below);
      used |= 1u << images_[i];
    }
    return r;
  }

  GroupElement to_element() const {
    std::vector<std::int64_t> images(degree_);
    for (std::size_t i = 0; i < degree_; ++i) images[i] = images_[i];
    return GroupElement::permutation(std::move(images));
  }

  friend bool operator==(const Perm&, const Perm&) = default;
  friend auto operator<=>(const Perm&, const Perm&) = default;

 private:
  std::uint8_t degree_ = 0;
  std::array<std::uint8_t, kMaxPermDegree> images_{};
};

inline std::uint64_t factorial(std::size_t n) {
  std::uint64_t f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= i;
  return f;
}

/// All permutations of degree d in lexicographic order.
inline std::vector<Perm> symmetric_group(std::size_t degree) {
  std::vector<int> images(degree);
  std::iota(images.begin(), images.end(), 0);
  std::vector<Perm> out;
  out.reserve(factorial(degree));
  do out.push_back(Perm::from_images(images));
  while (std::next_permutation(images.begin(), images.end()));
  return out;
}

inline bool is_transitive(const Perm& a, const Perm& b) {
  const std::size_t d = a.degree();
  if (d == 0) return true;
  std::array<bool, kMaxPermDegree> seen{};
  std::array<std::uint8_t, kMaxPermDegree> queue{};
  std::size_t tail = 0;
  queue[tail++] = 0;
  seen[0] = true;
  for (std::size_t head = 0; head < tail; ++head) {
    for (std::size_t y : {a[queue[head]], b[queue[head]]}) {
      if (!seen[y]) {
        seen[y] = true;
        queue[tail++] = static_cast<std::uint8_t>(y);
      }
    }
  }
  return tail == d;
}

/// sigma tau sigma^-1 tau^-1.
inline Perm commutator(const Perm& a, const Perm& b) { return a * b * a.inverse() * b.inverse(); }

/// A point (sigma, tau) of Hom(F_2, S_d) with cached commutator data.
class OrigamiPair {
 public:
  OrigamiPair() = default;

  OrigamiPair(Perm sigma, Perm tau) : sigma_(sigma), tau_(tau) {
    if (sigma.degree() != tau.degree()) throw InvalidArgument("origami pair degrees differ");
    commutator_ = thinlab::commutator(sigma_, tau_);
    mu_ = commutator_.cycle_type();
    transitive_ = is_transitive(sigma_, tau_);
  }

  const Perm& sigma() const { return sigma_; }
  const Perm& tau() const { return tau_; }
  const Perm& commutator() const { return commutator_; }
  const CycleType& mu() const { return mu_; }
  bool transitive() const { return transitive_; }
  std::size_t degree() const { return sigma_.degree(); }

  /// Stable text form: "<sigma cycles>|<tau cycles>", 1-based.
  std::string to_string() const { return sigma_.cycle_string() + "|" + tau_.cycle_string(); }

  static OrigamiPair parse(const std::string& text, std::size_t degree) {
    const auto bar = text.find('|');
    if (bar == std::string::npos) throw InvalidArgument("origami pair needs 'sigma|tau': " + text);
    return OrigamiPair(Perm::parse_cycles(text.substr(0, bar), degree),
                       Perm::parse_cycles(text.substr(bar + 1), degree));
  }

  friend bool operator==(const OrigamiPair& a, const OrigamiPair& b) {
    return a.sigma_ == b.sigma_ && a.tau_ == b.tau_;
  }
  friend bool operator<(const OrigamiPair& a, const OrigamiPair& b) {
    return std::tie(a.sigma_, a.tau_) < std::tie(b.sigma_, b.tau_);
  }

 private:
  Perm sigma_, tau_, commutator_;
  CycleType mu_;
  bool transitive_ = false;
};

/// Genus of the square-tiled surface: 1 + sum (e_i - 1)/2 over the cycle
/// lengths e_i of the commutator.
inline int genus(const OrigamiPair& p) {
  if (!p.transitive()) throw InvalidArgument("genus: pair " + p.to_string() + " is not transitive");
  const std::size_t branching = p.degree() - p.mu().cycle_count();
  if (branching % 2 != 0) throw InternalError("commutator with odd branching");
  return 1 + static_cast<int>(branching / 2);
}

// ---------------------------------------------------------------------------
// Nielsen moves
// ---------------------------------------------------------------------------

enum class NielsenMove : std::uint8_t { T, T_inverse, S, S_inverse };

inline constexpr std::array<NielsenMove, 4> kNielsenMoves = {NielsenMove::T, NielsenMove::T_inverse,
                                                             NielsenMove::S, NielsenMove::S_inverse};

/// T: (a, b) -> (a, b a); S: (a, b) -> (b^-1, a); and their inverses, for any
/// group given by `mul` and `inv`.
template <class E, class Mul, class Inv>
std::pair<E, E> apply_nielsen(NielsenMove move, const E& a, const E& b, Mul&& mul, Inv&& inv) {
  switch (move) {
    case NielsenMove::T: return {a, mul(b, a)};
    case NielsenMove::T_inverse: return {a, mul(b, inv(a))};
    case NielsenMove::S: return {inv(b), a};
    case NielsenMove::S_inverse: return {b, inv(a)};
  }
  throw InternalError("unknown Nielsen move");
}

inline OrigamiPair apply_nielsen(NielsenMove move, const OrigamiPair& p) {
  auto [a, b] = apply_nielsen(
      move, p.sigma(), p.tau(), [](const Perm& x, const Perm& y) { return x * y; },
      [](const Perm& x) { return x.inverse(); });
  OrigamiPair out(a, b);
  if (out.mu() != p.mu()) throw InternalError("Nielsen move changed the commutator cycle type");
  return out;
}

/// Images under T, T^-1, S, S^-1, in that order.
inline std::vector<OrigamiPair> nielsen_moves(const OrigamiPair& p) {
  std::vector<OrigamiPair> out;
  for (auto m : kNielsenMoves) out.push_back(apply_nielsen(m, p));
  return out;
}

// ---------------------------------------------------------------------------
// Canonical forms under simultaneous conjugation
// ---------------------------------------------------------------------------

/// Canonical representative of (sigma, tau) under simultaneous conjugation:
/// the lexicographically least pair in the orbit. The least sigma in a
/// conjugacy class is precomputed; tau is then minimized over its centralizer.
class Canonicalizer {
 public:
  explicit Canonicalizer(std::size_t degree) : degree_(degree), all_(symmetric_group(degree)) {
    for (const auto& p : all_) {
      auto type = p.cycle_type();
      if (!class_min_.count(type)) class_min_.emplace(type, p);
    }
    for (const auto& [type, rep] : class_min_) {
      auto& cent = centralizer_[type];
      for (const auto& h : all_)
        if (rep.conjugated_by(h) == rep) cent.push_back(h);
    }
  }

  std::size_t degree() const { return degree_; }
  const std::vector<Perm>& elements() const { return all_; }
  const std::map<CycleType, Perm>& class_minima() const { return class_min_; }
  const Perm& class_min(const CycleType& type) const { return class_min_.at(type); }
  const std::vector<Perm>& centralizer(const CycleType& type) const { return centralizer_.at(type); }

  /// Some h with h sigma h^-1 == class_min(type(sigma)).
  Perm conjugator_to_min(const Perm& sigma) const {
    const Perm& target = class_min(sigma.cycle_type());
    auto by_length = [](std::vector<std::vector<std::uint8_t>> cs) {
      std::stable_sort(cs.begin(), cs.end(), [](const auto& x, const auto& y) { return x.size() < y.size(); });
      return cs;
    };
    const auto from = by_length(sigma.cycles());
    const auto to = by_length(target.cycles());
    std::vector<int> images(degree_);
    for (std::size_t c = 0; c < from.size(); ++c)
      for (std::size_t i = 0; i < from[c].size(); ++i) images[from[c][i]] = to[c][i];
    return Perm::from_images(images);
  }

  std::pair<Perm, Perm> canonical(const Perm& sigma, const Perm& tau) const {
    const Perm h = conjugator_to_min(sigma);
    const Perm s = sigma.conjugated_by(h);
    const Perm t = tau.conjugated_by(h);
    Perm best = t;
    for (const auto& c : centralizer(s.cycle_type())) best = std::min(best, t.conjugated_by(c));
    return {s, best};
  }

  OrigamiPair canonical(const OrigamiPair& p) const {
    auto [s, t] = canonical(p.sigma(), p.tau());
    return OrigamiPair(s, t);
  }

 private:
  std::size_t degree_;
  std::vector<Perm> all_;
  std::map<CycleType, Perm> class_min_;
  std::map<CycleType, std::vector<Perm>> centralizer_;
};

// ---------------------------------------------------------------------------
// Image groups
// ---------------------------------------------------------------------------

/// Conjugation invariants of a permutation group: order, orbit count on
/// unordered pairs of points, and the multiset of element orders.
struct ImageFingerprint {
  std::size_t order = 0;
  std::size_t pair_orbits = 0;
  std::vector<std::uint64_t> element_orders;  // sorted

  friend auto operator<=>(const ImageFingerprint&, const ImageFingerprint&) = default;
};

struct ImageGroup {
  std::vector<Perm> elements;  // sorted
  ImageFingerprint fingerprint;
};

inline ImageGroup image_group(const Perm& sigma, const Perm& tau) {
  const auto group = bfs_closure(GeneratorSet({sigma.to_element(), tau.to_element()}), factorial(sigma.degree()));
  ImageGroup out;
  const std::size_t d = sigma.degree();
  out.elements.reserve(group.order());
  for (std::size_t i = 0; i < group.order(); ++i) {
    const auto e = group.element(i);
    std::vector<int> images(d);
    for (std::size_t x = 0; x < d; ++x) images[x] = static_cast<int>(e.image(x));
    out.elements.push_back(Perm::from_images(images));
  }
  std::sort(out.elements.begin(), out.elements.end());
  auto& fp = out.fingerprint;
  fp.order = out.elements.size();
  for (const auto& p : out.elements) fp.element_orders.push_back(p.order());
  std::sort(fp.element_orders.begin(), fp.element_orders.end());
  // Orbits on unordered pairs {x, y}, x < y, under the two generators.
  std::vector<std::uint32_t> parent(d * d);
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto pair_id = [d](std::size_t x, std::size_t y) {
    return static_cast<std::uint32_t>(std::min(x, y) * d + std::max(x, y));
  };
  for (std::size_t x = 0; x < d; ++x)
    for (std::size_t y = x + 1; y < d; ++y)
      for (const Perm* g : {&sigma, &tau}) parent[find(pair_id(x, y))] = find(pair_id((*g)[x], (*g)[y]));
  for (std::size_t x = 0; x < d; ++x)
    for (std::size_t y = x + 1; y < d; ++y)
      if (find(pair_id(x, y)) == pair_id(x, y)) ++fp.pair_orbits;
  return out;
}

/// Exact test whether two permutation groups are conjugate in S_d.
inline bool conjugate_in_symmetric_group(const ImageGroup& a, const ImageGroup& b,
                                         const std::vector<Perm>& symmetric) {
  if (a.fingerprint != b.fingerprint) return false;
  if (a.elements == b.elements) return true;
  std::vector<Perm> image(a.elements.size());
  for (const auto& h : symmetric) {
    for (std::size_t i = 0; i < a.elements.size(); ++i) image[i] = a.elements[i].conjugated_by(h);
    std::sort(image.begin(), image.end());
    if (image == b.elements) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Census
// ---------------------------------------------------------------------------

/// One simultaneous-conjugation orbit of transitive pairs.
struct CensusClass {
  OrigamiPair representative;  // lexicographically least pair in the orbit
  std::size_t orbit_size = 0;
  std::size_t image_order = 0;
  std::uint32_t image_class = 0;  // index of the image group up to S_d conjugacy
  int genus = 1;
};

struct CensusOptions {
  std::size_t max_degree = kDefaultOrigamiDegreeCap;
  /// Exact conjugacy test between image groups with equal fingerprints is
  /// run up to this degree; above it the fingerprint alone decides.
  std::size_t exact_image_degree = 7;
  std::size_t jobs = 1;
};

struct Census {
  std::size_t degree = 0;
  std::vector<CensusClass> classes;          // sorted by representative
  std::vector<ImageFingerprint> image_groups;  // indexed by CensusClass::image_class
};

/// All transitive pairs in S_d up to simultaneous conjugation, optionally
/// restricted to commutator cycle type `mu`.
inline Census census(std::size_t degree, const std::optional<CycleType>& mu = std::nullopt,
                     const CensusOptions& opts = {}) {
  if (degree == 0) throw InvalidArgument("census: degree must be >= 1");
  if (degree > opts.max_degree || degree > kMaxPermDegree)
    throw BudgetExceeded("census: degree above the configured cap", degree, opts.max_degree);
  if (mu && mu->degree() != degree) throw InvalidArgument("census: mu is not a partition of d");
  const Canonicalizer canon(degree);
  const std::uint64_t total = factorial(degree);
  std::vector<std::pair<CycleType, Perm>> types(canon.class_minima().begin(), canon.class_minima().end());

  struct Found {
    CensusClass cls;
    ImageGroup image;
  };
  std::vector<std::vector<Found>> per_type(types.size());
  parallel_for(types.size(), opts.jobs, [&](std::size_t ti) {
    const auto& [type, sigma] = types[ti];
    const auto& cent = canon.centralizer(type);
    const std::uint64_t class_size = total / cent.size();
    std::vector<char> visited(total, 0);
    for (const auto& tau : canon.elements()) {
      if (visited[tau.rank()]) continue;
      Perm least = tau;
      std::size_t orbit = 0;
      for (const auto& c : cent) {
        const Perm t = tau.conjugated_by(c);
        auto& mark = visited[t.rank()];
        if (!mark) {
          mark = 1;
          ++orbit;
          least = std::min(least, t);
        }
      }
      OrigamiPair pair(sigma, least);
      if (!pair.transitive() || (mu && pair.mu() != *mu)) continue;
      Found f;
      f.cls.representative = pair;
      f.cls.orbit_size = static_cast<std::size_t>(class_size * orbit);
      f.cls.genus = thinlab::genus(pair);
      f.image = image_group(sigma, least);
      f.cls.image_order = f.image.fingerprint.order;
      per_type[ti].push_back(std::move(f));
    }
  });

  std::vector<Found> found;
  for (auto& v : per_type)
    for (auto& f : v) found.push_back(std::move(f));
  std::sort(found.begin(), found.end(),
            [](const Found& a, const Found& b) { return a.cls.representative < b.cls.representative; });

  Census out;
  out.degree = degree;
  std::vector<const ImageGroup*> reps;
  const bool exact = degree <= opts.exact_image_degree;
  for (auto& f : found) {
    std::optional<std::uint32_t> id;
    for (std::uint32_t g = 0; g < reps.size() && !id; ++g) {
      if (reps[g]->fingerprint != f.image.fingerprint) continue;
      if (!exact || conjugate_in_symmetric_group(f.image, *reps[g], canon.elements())) id = g;
    }
    if (!id) {
      id = static_cast<std::uint32_t>(reps.size());
      reps.push_back(&f.image);
      out.image_groups.push_back(f.image.fingerprint);
    }
    f.cls.image_class = *id;
    out.classes.push_back(f.cls);
  }
  return out;
}

struct OrigamiGraph {
  std::vector<CensusClass> classes;
  MultiGraph graph;
};

/// X(d, mu, G): census classes with commutator type mu (and image order, when
/// given) joined by the Nielsen moves T, T^-1, S, S^-1; k = 4.
inline OrigamiGraph origami_graph(std::size_t degree, const CycleType& mu,
                                  std::optional<std::size_t> image_order = std::nullopt,
                                  const CensusOptions& opts = {}) {
  OrigamiGraph out;
  for (const auto& c : census(degree, mu, opts).classes)
    if (!image_order || c.image_order == *image_order) out.classes.push_back(c);
  const Canonicalizer canon(degree);
  std::map<std::pair<Perm, Perm>, std::uint32_t> vertex;
  for (std::uint32_t v = 0; v < out.classes.size(); ++v) {
    const auto& rep = out.classes[v].representative;
    vertex.emplace(std::pair{rep.sigma(), rep.tau()}, v);
  }
  constexpr std::size_t k = kNielsenMoves.size();
  std::vector<std::uint32_t> adjacency(out.classes.size() * k);
  std::vector<std::string> labels;
  for (std::uint32_t v = 0; v < out.classes.size(); ++v) {
    const auto& rep = out.classes[v].representative;
    for (std::size_t t = 0; t < k; ++t) {
      const auto moved = apply_nielsen(kNielsenMoves[t], rep);
      auto it = vertex.find(canon.canonical(moved.sigma(), moved.tau()));
      if (it == vertex.end()) throw InternalError("Nielsen move left the census class set");
      adjacency[v * k + t] = it->second;
    }
    labels.push_back(rep.to_string());
  }
  std::string id = "origami-d" + std::to_string(degree) + "-mu" + mu.to_string();
  if (image_order) id += "-G" + std::to_string(*image_order);
  out.graph = MultiGraph(out.classes.size(), k, std::move(adjacency), std::move(labels), std::move(id));
  return out;
}

}  // namespace thinlab
