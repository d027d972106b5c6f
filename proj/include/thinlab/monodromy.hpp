#pragma once

// Chain-transvection representation of the braid group Br_{2g+1} on Z^{2g}:
// the homological monodromy of the hyperelliptic family y^2 = f(x)(x - t).
// The braid generator sigma_i maps to the transvection along the i-th chain
// vector c_i.

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "thinlab/error.hpp"
#include "thinlab/group.hpp"

namespace thinlab {

/// 2g+1 primitive vectors in Z^{2g} with <c_i, c_{i+1}> = 1 and
/// <c_i, c_j> = 0 whenever |i - j| >= 2.
struct ChainConfiguration {
  std::size_t genus = 0;
  std::vector<std::vector<std::int64_t>> cycles;
  SymplecticForm form{1};
};

/// Throws InternalError unless the chain intersection pattern holds and every
/// vector is primitive.
inline void verify_chain(const ChainConfiguration& chain) {
  const std::size_t count = chain.cycles.size();
  if (count != 2 * chain.genus + 1) throw InternalError("chain must have 2g+1 vectors");
  for (std::size_t i = 0; i < count; ++i) {
    std::int64_t content = 0;
    for (auto x : chain.cycles[i]) content = std::gcd(content, x);
    if (content != 1) throw InternalError("chain vector " + std::to_string(i + 1) + " is not primitive");
    for (std::size_t j = i + 1; j < count; ++j) {
      const std::int64_t expected = (j == i + 1) ? 1 : 0;
      if (chain.form.pairing(chain.cycles[i], chain.cycles[j]) != expected)
        throw InternalError("chain pairing <c_" + std::to_string(i + 1) + ", c_" +
                            std::to_string(j + 1) + "> is wrong");
    }
  }
}

/// c_{2i-1} = e_i, c_{2i} = f_i - f_{i+1} (f_{g+1} = 0), c_{2g+1} = -(e_1 + ... + e_g).
inline ChainConfiguration build_chain(std::size_t genus) {
  if (genus == 0) throw InvalidArgument("build_chain: genus must be >= 1");
  ChainConfiguration chain{genus, {}, SymplecticForm(genus)};
  const std::size_t n = 2 * genus;
  for (std::size_t i = 0; i < genus; ++i) {
    std::vector<std::int64_t> e(n, 0), f(n, 0);
    e[SymplecticForm::e(i)] = 1;
    f[SymplecticForm::f(i)] = 1;
    if (i + 1 < genus) f[SymplecticForm::f(i + 1)] = -1;
    chain.cycles.push_back(std::move(e));
    chain.cycles.push_back(std::move(f));
  }
  std::vector<std::int64_t> last(n, 0);
  for (std::size_t i = 0; i < genus; ++i) last[SymplecticForm::e(i)] = -1;
  chain.cycles.push_back(std::move(last));
  verify_chain(chain);
  return chain;
}

/// Matrix of x -> x + power * <x, v> v, reduced mod m (m == 0 keeps integers).
/// power = 1 is the transvection T_v, power = -1 its inverse.
inline GroupElement transvection(std::span<const std::int64_t> v, const SymplecticForm& form,
                                 std::int64_t modulus, std::int64_t power = 1) {
  const std::size_t n = form.dimension();
  if (v.size() != n) throw IncompatibleElements("transvection: vector dimension mismatch");
  // <x, v> = sum_c x_c * w_c with w_c = <u_c, v>.
  std::vector<std::int64_t> w(n);
  std::vector<std::int64_t> unit(n, 0);
  for (std::size_t c = 0; c < n; ++c) {
    unit[c] = 1;
    w[c] = form.pairing(unit, v);
    unit[c] = 0;
  }
  std::vector<std::int64_t> entries(n * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      entries[r * n + c] = (r == c ? 1 : 0) + power * v[r] * w[c];
  return GroupElement::matrix(n, modulus, std::move(entries));
}

/// A word in the Artin generators sigma_1..sigma_{strands-1}; letter +i is
/// sigma_i, letter -i its inverse. The leftmost letter acts first.
class BraidWord {
 public:
  BraidWord(std::size_t strands, std::vector<int> letters) : strands_(strands), letters_(std::move(letters)) {
    if (strands < 2) throw InvalidArgument("braid word needs at least two strands");
    for (int l : letters_)
      if (l == 0 || static_cast<std::size_t>(l < 0 ? -l : l) >= strands_)
        throw InvalidArgument("braid letter " + std::to_string(l) + " out of range");
  }

  std::size_t strands() const { return strands_; }
  const std::vector<int>& letters() const { return letters_; }

  BraidWord inverse() const {
    std::vector<int> inv(letters_.rbegin(), letters_.rend());
    for (int& l : inv) l = -l;
    return BraidWord(strands_, std::move(inv));
  }

  friend BraidWord operator*(const BraidWord& a, const BraidWord& b) {
    if (a.strands_ != b.strands_) throw InvalidArgument("braid words on different strand counts");
    std::vector<int> letters = a.letters_;
    letters.insert(letters.end(), b.letters_.begin(), b.letters_.end());
    return BraidWord(a.strands_, std::move(letters));
  }

  friend bool operator==(const BraidWord&, const BraidWord&) = default;

 private:
  std::size_t strands_;
  std::vector<int> letters_;
};

/// T(last) * ... * T(first): the image of the word in Sp_2g(Z/m).
inline GroupElement braid_to_matrix(const BraidWord& word, const ChainConfiguration& chain,
                                    std::int64_t modulus) {
  if (word.strands() != chain.cycles.size())
    throw InvalidArgument("braid_to_matrix: strand count must be 2g+1");
  const SymplecticForm& form = chain.form;
  GroupElement result = GroupElement::identity_matrix(form.dimension(), modulus);
  for (int letter : word.letters()) {
    const std::size_t i = static_cast<std::size_t>(letter < 0 ? -letter : letter) - 1;
    result = transvection(chain.cycles[i], form, modulus, letter < 0 ? -1 : 1) * result;
  }
  return result;
}

/// A_{i,j} = (s_{j-1} ... s_{i+1}) s_i^2 (s_{j-1} ... s_{i+1})^-1, 1-based i < j.
inline BraidWord pure_braid(std::size_t strands, std::size_t i, std::size_t j) {
  if (i < 1 || j <= i || j > strands) throw InvalidArgument("pure_braid: need 1 <= i < j <= strands");
  std::vector<int> prefix;
  for (std::size_t t = j - 1; t > i; --t) prefix.push_back(static_cast<int>(t));
  const BraidWord conj(strands, prefix);
  const BraidWord square(strands, {static_cast<int>(i), static_cast<int>(i)});
  return conj * square * conj.inverse();
}

/// All A_{i,j} with 1 <= i < j <= 2g+1, ordered by (i, j).
inline std::vector<BraidWord> pure_braid_generators(std::size_t genus) {
  if (genus == 0) throw InvalidArgument("pure_braid_generators: genus must be >= 1");
  const std::size_t strands = 2 * genus + 1;
  std::vector<BraidWord> out;
  for (std::size_t i = 1; i <= strands; ++i)
    for (std::size_t j = i + 1; j <= strands; ++j) out.push_back(pure_braid(strands, i, j));
  return out;
}

/// A_{i,2g+1}, i = 1..2g: the last strand winding once around each other strand.
inline std::vector<BraidWord> point_pushing_generators(std::size_t genus) {
  if (genus == 0) throw InvalidArgument("point_pushing_generators: genus must be >= 1");
  const std::size_t strands = 2 * genus + 1;
  std::vector<BraidWord> out;
  for (std::size_t i = 1; i < strands; ++i) out.push_back(pure_braid(strands, i, strands));
  return out;
}

inline std::vector<GroupElement> braid_images(const std::vector<BraidWord>& words,
                                              const ChainConfiguration& chain, std::int64_t modulus) {
  std::vector<GroupElement> out;
  out.reserve(words.size());
  for (const auto& w : words) out.push_back(braid_to_matrix(w, chain, modulus));
  return out;
}

/// Images of sigma_1..sigma_{2g}: the standard Sp_2g generators.
inline GeneratorSet braid_generators(std::size_t genus, std::int64_t modulus) {
  const auto chain = build_chain(genus);
  std::vector<GroupElement> gens;
  for (std::size_t i = 0; i < 2 * genus; ++i) gens.push_back(transvection(chain.cycles[i], chain.form, modulus));
  return GeneratorSet(std::move(gens), "braid");
}

/// All 2g+1 chain transvections.
inline GeneratorSet chain_generators(std::size_t genus, std::int64_t modulus) {
  const auto chain = build_chain(genus);
  std::vector<GroupElement> gens;
  for (const auto& c : chain.cycles) gens.push_back(transvection(c, chain.form, modulus));
  return GeneratorSet(std::move(gens), "chain");
}

inline GeneratorSet point_pushing_images(std::size_t genus, std::int64_t modulus) {
  const auto chain = build_chain(genus);
  return GeneratorSet(braid_images(point_pushing_generators(genus), chain, modulus), "pointpush");
}

struct PrimeSurjectivity {
  std::int64_t prime = 0;
  std::size_t generated_order = 0;
  boost::multiprecision::cpp_int expected_order;
  bool surjective = false;
};

struct CongruenceLevelReport {
  bool trivial_mod2 = true;
  bool trivial_mod4 = true;
  std::vector<PrimeSurjectivity> primes;
};

/// Level-2/level-4 triviality of integer matrices and, per prime, whether
/// their reductions generate all of Sp_2g(F_p).
inline CongruenceLevelReport congruence_report(const std::vector<GroupElement>& mats,
                                               const std::vector<std::int64_t>& primes,
                                               std::size_t budget = kDefaultElementBudget) {
  if (mats.empty()) throw InvalidArgument("congruence_report: no matrices");
  const auto& shape = mats.front().shape();
  if (shape.kind != ElementKind::matrix || shape.modulus != 0 || shape.size % 2 != 0)
    throw InvalidArgument("congruence_report: expects even-dimensional integer matrices");
  CongruenceLevelReport report;
  for (const auto& a : mats) {
    report.trivial_mod2 = report.trivial_mod2 && a.reduced(2).is_identity();
    report.trivial_mod4 = report.trivial_mod4 && a.reduced(4).is_identity();
  }
  for (auto p : primes) {
    std::vector<GroupElement> reduced;
    for (const auto& a : mats) reduced.push_back(a.reduced(p));
    const auto group = bfs_closure(GeneratorSet(std::move(reduced)), budget);
    PrimeSurjectivity row{p, group.order(), sp_order(shape.size / 2, p), false};
    row.surjective = row.expected_order == group.order();
    report.primes.push_back(std::move(row));
  }
  return report;
}

}  // namespace thinlab
