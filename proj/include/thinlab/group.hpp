#pragma once

// Exact arithmetic and breadth-first enumeration for finite permutation and
// matrix groups: S_d, Z/nZ, SL_2(Z/m) and Sp_2g(Z/m).
//
// Convention: every element acts on the left, so (a*b).v == a.(b.v). For
// permutations this means (a*b)[x] == a[b[x]].

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <functional>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "thinlab/error.hpp"

namespace thinlab {

enum class ElementKind : std::uint8_t { permutation, matrix };

/// Default cap on the number of elements bfs_closure may discover.
inline constexpr std::size_t kDefaultElementBudget = 2'000'000;

/// Kind, degree/dimension and modulus shared by all elements of one group.
/// A modulus of 0 means exact integer arithmetic (matrices only).
struct ElementShape {
  ElementKind kind = ElementKind::permutation;
  std::uint32_t size = 0;
  std::int64_t modulus = 0;

  std::size_t entry_count() const {
    return kind == ElementKind::permutation ? size : std::size_t{size} * size;
  }

  /// Bytes per entry in the canonical encoding.
  std::size_t entry_width() const {
    if (kind == ElementKind::permutation) {
      if (size <= 256) return 1;
      if (size <= 65536) return 2;
      return 4;
    }
    if (modulus == 0) return 8;
    if (modulus <= 256) return 1;
    if (modulus <= 65536) return 2;
    if (modulus <= (std::int64_t{1} << 32)) return 4;
    return 8;
  }

  std::size_t encoded_size() const { return entry_count() * entry_width(); }

  friend bool operator==(const ElementShape&, const ElementShape&) = default;
};

namespace detail {

inline std::int64_t reduce(std::int64_t x, std::int64_t m) {
  if (m == 0) return x;
  x %= m;
  return x < 0 ? x + m : x;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw ArithmeticOverflow("integer matrix entry overflow");
  return r;
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw ArithmeticOverflow("integer matrix entry overflow");
  return r;
}

inline std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m) {
  if (m == 0) return checked_mul(a, b);
  return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % m);
}

inline std::int64_t add_mod(std::int64_t a, std::int64_t b, std::int64_t m) {
  if (m == 0) return checked_add(a, b);
  std::int64_t s = a + b;  // both in [0, m), m < 2^62
  return s >= m ? s - m : s;
}

/// Inverse of a modulo m, if gcd(a, m) == 1.
inline std::optional<std::int64_t> inverse_mod(std::int64_t a, std::int64_t m) {
  std::int64_t old_r = reduce(a, m), r = m;
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    std::int64_t q = old_r / r;
    std::tie(old_r, r) = std::pair{r, old_r - q * r};
    std::tie(old_s, s) = std::pair{s, old_s - q * s};
  }
  if (old_r != 1) return std::nullopt;
  return reduce(old_s, m);
}

/// out = a * b under the left-action convention. `out` must not alias.
inline void compose(const ElementShape& shape, std::span<const std::int64_t> a,
                    std::span<const std::int64_t> b, std::span<std::int64_t> out) {
  if (shape.kind == ElementKind::permutation) {
    for (std::size_t x = 0; x < shape.size; ++x) out[x] = a[static_cast<std::size_t>(b[x])];
    return;
  }
  const std::size_t n = shape.size;
  const std::int64_t m = shape.modulus;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      std::int64_t acc = 0;
      for (std::size_t t = 0; t < n; ++t) acc = add_mod(acc, mul_mod(a[r * n + t], b[t * n + c], m), m);
      out[r * n + c] = acc;
    }
  }
}

inline void encode_into(const ElementShape& shape, std::span<const std::int64_t> entries,
                        std::uint8_t* out) {
  const std::size_t w = shape.entry_width();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto v = static_cast<std::uint64_t>(entries[i]);
    for (std::size_t b = 0; b < w; ++b) out[i * w + b] = static_cast<std::uint8_t>(v >> (8 * b));
  }
}

inline void decode_from(const ElementShape& shape, const std::uint8_t* in,
                        std::span<std::int64_t> entries) {
  const std::size_t w = shape.entry_width();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    std::uint64_t v = 0;
    for (std::size_t b = 0; b < w; ++b) v |= std::uint64_t{in[i * w + b]} << (8 * b);
    entries[i] = static_cast<std::int64_t>(v);
  }
}

/// Determinant via the subset dynamic program (division free, so it works
/// over any Z/m and over Z).
inline std::int64_t determinant(std::span<const std::int64_t> a, std::size_t n, std::int64_t m) {
  if (n == 0) return reduce(1, m);
  if (n > 20) throw InvalidArgument("determinant: dimension too large");
  std::vector<std::int64_t> f(std::size_t{1} << n, 0);
  f[0] = reduce(1, m);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (f[mask] == 0) continue;
    const auto row = static_cast<std::size_t>(std::popcount(mask));
    if (row == n) continue;
    for (std::size_t c = 0; c < n; ++c) {
      if (mask & (1u << c)) continue;
      const int above = std::popcount(mask >> c);  // used columns greater than c
      std::int64_t term = mul_mod(f[mask], a[row * n + c], m);
      if (above % 2 == 1) term = m == 0 ? checked_mul(term, -1) : reduce(-term, m);
      f[mask | (1u << c)] = add_mod(f[mask | (1u << c)], term, m);
    }
  }
  return f[(std::size_t{1} << n) - 1];
}

/// Open-addressing index from fixed-width byte keys to dense ids. The keys
/// live in one contiguous arena, in insertion order.
class EncodingIndex {
 public:
  explicit EncodingIndex(std::size_t width) : width_(width), slots_(64, kEmpty) {}

  std::size_t size() const { return count_; }
  std::size_t width() const { return width_; }
  const std::uint8_t* key(std::size_t id) const { return arena_.data() + id * width_; }

  std::optional<std::uint32_t> find(const std::uint8_t* k) const {
    const std::size_t mask = slots_.size() - 1;
    for (std::size_t s = hash(k) & mask;; s = (s + 1) & mask) {
      const std::uint32_t id = slots_[s];
      if (id == kEmpty) return std::nullopt;
      if (std::memcmp(key(id), k, width_) == 0) return id;
    }
  }

  /// Returns the id of `k` and whether it was newly inserted.
  std::pair<std::uint32_t, bool> insert(const std::uint8_t* k) {
    if ((count_ + 1) * 2 > slots_.size()) grow();
    const std::size_t mask = slots_.size() - 1;
    for (std::size_t s = hash(k) & mask;; s = (s + 1) & mask) {
      const std::uint32_t id = slots_[s];
      if (id == kEmpty) {
        if (count_ >= kEmpty) throw InvalidArgument("EncodingIndex: too many keys");
        const auto fresh = static_cast<std::uint32_t>(count_++);
        arena_.insert(arena_.end(), k, k + width_);
        slots_[s] = fresh;
        return {fresh, true};
      }
      if (std::memcmp(key(id), k, width_) == 0) return {id, false};
    }
  }

 private:
  static constexpr std::uint32_t kEmpty = std::numeric_limits<std::uint32_t>::max();

  std::size_t hash(const std::uint8_t* k) const {
    return std::hash<std::string_view>{}(
        std::string_view(reinterpret_cast<const char*>(k), width_));
  }

  void grow() {
    std::vector<std::uint32_t> old(slots_.size() * 2, kEmpty);
    old.swap(slots_);
    const std::size_t mask = slots_.size() - 1;
    for (std::uint32_t id = 0; id < count_; ++id) {
      std::size_t s = hash(key(id)) & mask;
      while (slots_[s] != kEmpty) s = (s + 1) & mask;
      slots_[s] = id;
    }
  }

  std::size_t width_;
  std::size_t count_ = 0;
  std::vector<std::uint8_t> arena_;
  std::vector<std::uint32_t> slots_;
};

}  // namespace detail

/// A permutation of {0..d-1} or a square matrix with entries in Z/m (m == 0
/// for integer matrices).
class GroupElement {
 public:
  GroupElement() = default;

  static GroupElement permutation(std::vector<std::int64_t> images) {
    const std::size_t d = images.size();
    std::vector<bool> seen(d, false);
    for (auto x : images) {
      if (x < 0 || static_cast<std::size_t>(x) >= d || seen[static_cast<std::size_t>(x)])
        throw InvalidArgument("permutation images are not a bijection of [0, d)");
      seen[static_cast<std::size_t>(x)] = true;
    }
    return GroupElement(ElementShape{ElementKind::permutation, static_cast<std::uint32_t>(d), 0},
                        std::move(images));
  }

  static GroupElement identity_permutation(std::size_t degree) {
    std::vector<std::int64_t> images(degree);
    for (std::size_t i = 0; i < degree; ++i) images[i] = static_cast<std::int64_t>(i);
    return GroupElement(
        ElementShape{ElementKind::permutation, static_cast<std::uint32_t>(degree), 0},
        std::move(images));
  }

  /// Row-major entries; reduced into [0, m) when m > 0.
  static GroupElement matrix(std::size_t dim, std::int64_t modulus,
                             std::vector<std::int64_t> entries) {
    if (modulus < 0) throw InvalidArgument("matrix modulus must be >= 0");
    if (entries.size() != dim * dim) throw InvalidArgument("matrix entry count is not dim^2");
    for (auto& e : entries) e = detail::reduce(e, modulus);
    return GroupElement(ElementShape{ElementKind::matrix, static_cast<std::uint32_t>(dim), modulus},
                        std::move(entries));
  }

  static GroupElement matrix(std::int64_t modulus,
                             std::initializer_list<std::initializer_list<std::int64_t>> rows) {
    std::vector<std::int64_t> entries;
    for (const auto& row : rows) {
      if (row.size() != rows.size()) throw InvalidArgument("matrix rows must be square");
      entries.insert(entries.end(), row.begin(), row.end());
    }
    return matrix(rows.size(), modulus, std::move(entries));
  }

  static GroupElement identity_matrix(std::size_t dim, std::int64_t modulus) {
    std::vector<std::int64_t> entries(dim * dim, 0);
    for (std::size_t i = 0; i < dim; ++i) entries[i * dim + i] = 1;
    return matrix(dim, modulus, std::move(entries));
  }

  static GroupElement identity(const ElementShape& shape) {
    return shape.kind == ElementKind::permutation ? identity_permutation(shape.size)
                                                  : identity_matrix(shape.size, shape.modulus);
  }

  /// Builds an element from raw entries that are already valid for `shape`.
  static GroupElement from_entries(const ElementShape& shape, std::vector<std::int64_t> entries) {
    return GroupElement(shape, std::move(entries));
  }

  const ElementShape& shape() const { return shape_; }
  ElementKind kind() const { return shape_.kind; }
  /// Degree for permutations, dimension for matrices.
  std::size_t size() const { return shape_.size; }
  std::int64_t modulus() const { return shape_.modulus; }
  std::span<const std::int64_t> entries() const { return entries_; }

  std::int64_t operator()(std::size_t r, std::size_t c) const { return entries_[r * shape_.size + c]; }
  std::int64_t image(std::size_t x) const { return entries_[x]; }

  bool composable_with(const GroupElement& other) const { return shape_ == other.shape_; }

  bool is_identity() const { return *this == identity(shape_); }

  /// Integer or finer-modulus matrix reduced to modulus m.
  GroupElement reduced(std::int64_t m) const {
    if (shape_.kind != ElementKind::matrix) throw IncompatibleElements("only matrices can be reduced");
    if (shape_.modulus != 0 && (m == 0 || shape_.modulus % m != 0))
      throw IncompatibleElements("cannot reduce mod " + std::to_string(m));
    return matrix(shape_.size, m, entries_);
  }

  /// Canonical byte encoding: little-endian fixed-width entries, row-major for
  /// matrices and the image array for permutations.
  std::string encode() const {
    std::string out(shape_.encoded_size(), '\0');
    detail::encode_into(shape_, entries_, reinterpret_cast<std::uint8_t*>(out.data()));
    return out;
  }

  std::string to_string() const {
    std::ostringstream os;
    if (shape_.kind == ElementKind::permutation) {
      os << '[';
      for (std::size_t i = 0; i < entries_.size(); ++i) os << (i ? " " : "") << entries_[i];
      os << ']';
      return os.str();
    }
    os << '[';
    for (std::size_t r = 0; r < shape_.size; ++r) {
      os << (r ? ",[" : "[");
      for (std::size_t c = 0; c < shape_.size; ++c) os << (c ? "," : "") << (*this)(r, c);
      os << ']';
    }
    os << ']';
    if (shape_.modulus != 0) os << " mod " << shape_.modulus;
    return os.str();
  }

  friend bool operator==(const GroupElement&, const GroupElement&) = default;

 private:
  GroupElement(ElementShape shape, std::vector<std::int64_t> entries)
      : shape_(shape), entries_(std::move(entries)) {}

  ElementShape shape_{};
  std::vector<std::int64_t> entries_;
};

inline GroupElement multiply(const GroupElement& a, const GroupElement& b) {
  if (!a.composable_with(b))
    throw IncompatibleElements("cannot multiply " + a.to_string() + " by " + b.to_string());
  std::vector<std::int64_t> out(a.shape().entry_count());
  detail::compose(a.shape(), a.entries(), b.entries(), out);
  return GroupElement::from_entries(a.shape(), std::move(out));
}

inline GroupElement operator*(const GroupElement& a, const GroupElement& b) { return multiply(a, b); }

inline std::int64_t determinant(const GroupElement& a) {
  if (a.kind() != ElementKind::matrix) throw IncompatibleElements("determinant of a permutation");
  return detail::determinant(a.entries(), a.size(), a.modulus());
}

inline GroupElement inverse(const GroupElement& a) {
  if (a.kind() == ElementKind::permutation) {
    std::vector<std::int64_t> inv(a.size());
    for (std::size_t x = 0; x < a.size(); ++x) inv[static_cast<std::size_t>(a.image(x))] = static_cast<std::int64_t>(x);
    return GroupElement::from_entries(a.shape(), std::move(inv));
  }
  const std::size_t n = a.size();
  const std::int64_t m = a.modulus();
  const std::int64_t det = determinant(a);
  std::int64_t det_inv;
  if (m == 0) {
    if (det != 1 && det != -1) throw NonInvertible("integer matrix with determinant " + std::to_string(det));
    det_inv = det;
  } else {
    auto inv = detail::inverse_mod(det, m);
    if (!inv) throw NonInvertible("determinant " + std::to_string(det) + " is not a unit mod " + std::to_string(m));
    det_inv = *inv;
  }
  if (n == 1) return GroupElement::matrix(1, m, {det_inv});
  std::vector<std::int64_t> minor((n - 1) * (n - 1));
  std::vector<std::int64_t> out(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t t = 0;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == i) continue;
        for (std::size_t c = 0; c < n; ++c)
          if (c != j) minor[t++] = a(r, c);
      }
      std::int64_t cof = detail::determinant(minor, n - 1, m);
      if ((i + j) % 2 == 1) cof = m == 0 ? detail::checked_mul(cof, -1) : detail::reduce(-cof, m);
      out[j * n + i] = detail::mul_mod(cof, det_inv, m);
    }
  }
  return GroupElement::matrix(n, m, std::move(out));
}

/// The standard symplectic form on Z^{2g}. Basis order is interleaved:
/// index 2i is e_{i+1}, index 2i+1 is f_{i+1}, with <e_i, f_i> = 1.
class SymplecticForm {
 public:
  explicit SymplecticForm(std::size_t genus) : genus_(genus) {
    if (genus == 0) throw InvalidArgument("symplectic form needs genus >= 1");
  }

  std::size_t genus() const { return genus_; }
  std::size_t dimension() const { return 2 * genus_; }
  static std::size_t e(std::size_t i) { return 2 * i; }
  static std::size_t f(std::size_t i) { return 2 * i + 1; }

  /// Gram matrix J over the integers.
  GroupElement gram() const {
    const std::size_t n = dimension();
    std::vector<std::int64_t> j(n * n, 0);
    for (std::size_t i = 0; i < genus_; ++i) {
      j[e(i) * n + f(i)] = 1;
      j[f(i) * n + e(i)] = -1;
    }
    return GroupElement::matrix(n, 0, std::move(j));
  }

  /// <x, y> = x^T J y over the integers.
  std::int64_t pairing(std::span<const std::int64_t> x, std::span<const std::int64_t> y) const {
    if (x.size() != dimension() || y.size() != dimension())
      throw IncompatibleElements("vector dimension does not match the symplectic form");
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < genus_; ++i) {
      acc = detail::checked_add(acc, detail::checked_mul(x[e(i)], y[f(i)]));
      acc = detail::checked_add(acc, -detail::checked_mul(x[f(i)], y[e(i)]));
    }
    return acc;
  }

 private:
  std::size_t genus_;
};

/// True iff a^T J a == J modulo a.modulus().
inline bool is_symplectic(const GroupElement& a, const SymplecticForm& form) {
  if (a.kind() != ElementKind::matrix || a.size() != form.dimension())
    throw IncompatibleElements("is_symplectic: dimension mismatch with form");
  const std::size_t n = a.size();
  const std::int64_t m = a.modulus();
  std::vector<std::int64_t> at(n * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) at[r * n + c] = a(c, r);
  const auto transpose = GroupElement::matrix(n, m, std::move(at));
  const auto j = form.gram().reduced(m == 0 ? 0 : m);
  return transpose * j * a == j;
}

/// A vector of residues mod m (m == 0 for integer vectors).
struct ModVector {
  std::vector<std::int64_t> entries;
  std::int64_t modulus = 0;

  friend bool operator==(const ModVector&, const ModVector&) = default;
};

inline ModVector act_on_vectors(const GroupElement& a, const ModVector& v) {
  if (a.kind() != ElementKind::matrix) throw IncompatibleElements("act_on_vectors needs a matrix");
  if (v.entries.size() != a.size() || v.modulus != a.modulus())
    throw IncompatibleElements("act_on_vectors: dimension or modulus mismatch");
  const std::size_t n = a.size();
  const std::int64_t m = a.modulus();
  ModVector out{std::vector<std::int64_t>(n, 0), m};
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      out.entries[r] = detail::add_mod(out.entries[r], detail::mul_mod(a(r, c), v.entries[c], m), m);
  return out;
}

/// Generators gamma_1..gamma_r together with the symmetrized multiset
/// gamma_1, gamma_1^-1, ..., gamma_r, gamma_r^-1. Involutions and the identity
/// appear twice, so every Cayley graph built from the set is 2r-regular.
class GeneratorSet {
 public:
  GeneratorSet() = default;

  explicit GeneratorSet(std::vector<GroupElement> generators, std::string label = {})
      : generators_(std::move(generators)), label_(std::move(label)) {
    if (generators_.empty()) throw InvalidArgument("generator set must be nonempty");
    for (const auto& g : generators_) {
      if (!g.composable_with(generators_.front()))
        throw IncompatibleElements("generators have different shapes");
      symmetrized_.push_back(g);
      symmetrized_.push_back(inverse(g));
    }
  }

  const std::vector<GroupElement>& generators() const { return generators_; }
  const std::vector<GroupElement>& symmetrized() const { return symmetrized_; }
  const std::string& label() const { return label_; }
  const ElementShape& shape() const { return generators_.front().shape(); }
  /// Regular degree k of the associated Cayley graph.
  std::size_t degree() const { return symmetrized_.size(); }

 private:
  std::vector<GroupElement> generators_;
  std::vector<GroupElement> symmetrized_;
  std::string label_;
};

/// A fully enumerated finite group. Element 0 is the identity; elements are
/// stored in breadth-first discovery order as canonical encodings.
class FiniteGroup {
 public:
  const ElementShape& shape() const { return shape_; }
  std::size_t order() const { return index_.size(); }
  const GeneratorSet& generators() const { return generators_; }
  /// Positions of the listed generators in the element order.
  const std::vector<std::size_t>& generator_indices() const { return generator_indices_; }

  GroupElement element(std::size_t i) const {
    std::vector<std::int64_t> entries(shape_.entry_count());
    detail::decode_from(shape_, index_.key(i), entries);
    return GroupElement::from_entries(shape_, std::move(entries));
  }

  std::string encoding(std::size_t i) const {
    return std::string(reinterpret_cast<const char*>(index_.key(i)), shape_.encoded_size());
  }

  std::optional<std::size_t> index_of(const GroupElement& x) const {
    if (x.shape() != shape_) return std::nullopt;
    std::vector<std::uint8_t> key(shape_.encoded_size());
    detail::encode_into(shape_, x.entries(), key.data());
    auto id = index_.find(key.data());
    if (!id) return std::nullopt;
    return *id;
  }

  bool contains(const GroupElement& x) const { return index_of(x).has_value(); }

  /// Index of element(i) * right.
  std::size_t product_index(std::size_t i, const GroupElement& right) const {
    if (right.shape() != shape_) throw IncompatibleElements("product_index: shape mismatch");
    const std::size_t count = shape_.entry_count();
    std::vector<std::int64_t> left(count), out(count);
    std::vector<std::uint8_t> key(shape_.encoded_size());
    detail::decode_from(shape_, index_.key(i), left);
    detail::compose(shape_, left, right.entries(), out);
    detail::encode_into(shape_, out, key.data());
    auto id = index_.find(key.data());
    if (!id) throw InvalidArgument("product_index: element is not in the group");
    return *id;
  }

  std::size_t product_index(std::size_t i, std::size_t j) const { return product_index(i, element(j)); }

 private:
  friend FiniteGroup bfs_closure(const GeneratorSet& gens, std::size_t budget);

  FiniteGroup(ElementShape shape, GeneratorSet gens)
      : shape_(shape), generators_(std::move(gens)), index_(shape.encoded_size()) {}

  ElementShape shape_;
  GeneratorSet generators_;
  detail::EncodingIndex index_;
  std::vector<std::size_t> generator_indices_;
};

/// Enumerates the subgroup generated by `gens` breadth-first from the
/// identity, using right multiplication by the symmetrized generators.
inline FiniteGroup bfs_closure(const GeneratorSet& gens, std::size_t budget = kDefaultElementBudget) {
  if (gens.generators().empty()) throw InvalidArgument("bfs_closure: empty generator set");
  const ElementShape shape = gens.shape();
  if (shape.kind == ElementKind::matrix && shape.modulus == 0)
    throw InvalidArgument("bfs_closure: integer matrix groups are infinite; reduce modulo m first");
  FiniteGroup group(shape, gens);
  auto& index = group.index_;
  const std::size_t count = shape.entry_count();
  std::vector<std::int64_t> current(count), product(count);
  std::vector<std::uint8_t> key(shape.encoded_size());

  const auto identity = GroupElement::identity(shape);
  detail::encode_into(shape, identity.entries(), key.data());
  index.insert(key.data());
  for (std::size_t head = 0; head < index.size(); ++head) {
    detail::decode_from(shape, index.key(head), current);
    for (const auto& s : gens.symmetrized()) {
      detail::compose(shape, current, s.entries(), product);
      detail::encode_into(shape, product, key.data());
      if (index.insert(key.data()).second && index.size() > budget)
        throw BudgetExceeded("bfs_closure: group larger than the element budget", index.size(), budget);
    }
  }
  for (const auto& g : gens.generators()) group.generator_indices_.push_back(*group.index_of(g));
  return group;
}

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// |Sp_2g(F_p)| = p^{g^2} prod_{i=1..g} (p^{2i} - 1).
inline boost::multiprecision::cpp_int sp_order(std::size_t genus, std::int64_t p) {
  if (genus == 0) throw InvalidArgument("sp_order: genus must be >= 1");
  if (!is_prime(p)) throw InvalidArgument("sp_order: " + std::to_string(p) + " is not prime");
  using boost::multiprecision::cpp_int;
  using boost::multiprecision::pow;
  const cpp_int q = p;
  cpp_int order = pow(q, static_cast<unsigned>(genus * genus));
  for (unsigned i = 1; i <= genus; ++i) order *= pow(q, 2 * i) - 1;
  return order;
}

/// T = [[1,1],[0,1]] and S = [[0,-1],[1,0]] reduced mod m.
inline GeneratorSet sl2_generators(std::int64_t m) {
  return GeneratorSet({GroupElement::matrix(m, {{1, 1}, {0, 1}}),
                       GroupElement::matrix(m, {{0, -1}, {1, 0}})},
                      "SL2{T,S}");
}

/// The n-cycle x -> x+1 on n points: a faithful model of Z/nZ.
inline GroupElement cyclic_generator(std::size_t n) {
  std::vector<std::int64_t> images(n);
  for (std::size_t i = 0; i < n; ++i) images[i] = static_cast<std::int64_t>((i + 1) % n);
  return GroupElement::permutation(std::move(images));
}

/// Dense multiplication table of a small group, indexed by element position.
class MultiplicationTable {
 public:
  explicit MultiplicationTable(const FiniteGroup& group, std::size_t max_order = 4096)
      : order_(group.order()) {
    if (order_ > max_order)
      throw BudgetExceeded("MultiplicationTable: group too large", order_, max_order);
    std::vector<GroupElement> elements;
    elements.reserve(order_);
    for (std::size_t i = 0; i < order_; ++i) elements.push_back(group.element(i));
    table_.resize(order_ * order_);
    inverse_.resize(order_);
    for (std::size_t i = 0; i < order_; ++i) {
      for (std::size_t j = 0; j < order_; ++j) {
        const auto p = static_cast<std::uint32_t>(group.product_index(i, elements[j]));
        table_[i * order_ + j] = p;
        if (p == 0) inverse_[i] = static_cast<std::uint32_t>(j);
      }
    }
  }

  std::size_t order() const { return order_; }
  std::uint32_t multiply(std::uint32_t a, std::uint32_t b) const { return table_[a * order_ + b]; }
  std::uint32_t inverse(std::uint32_t a) const { return inverse_[a]; }

  /// Size of the subgroup generated by the given element indices.
  std::size_t generated_order(std::span<const std::uint32_t> gens) const {
    std::vector<char> seen(order_, 0);
    std::vector<std::uint32_t> queue{0};
    seen[0] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (auto g : gens) {
        const std::uint32_t next = multiply(queue[head], g);
        if (!seen[next]) {
          seen[next] = 1;
          queue.push_back(next);
        }
      }
    }
    return queue.size();
  }

 private:
  std::size_t order_;
  std::vector<std::uint32_t> table_;
  std::vector<std::uint32_t> inverse_;
};

}  // namespace thinlab
