#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "qdf/cayley_table.hpp"
#include "qdf/dfbq.hpp"
#include "qdf/errors.hpp"
#include "qdf/permutation.hpp"

namespace qdf {

// A block: a nonempty set of carrier elements, stored strictly increasing.
struct Block {
  std::vector<int> elems;

  Block() = default;
  explicit Block(std::vector<int> xs) : elems(std::move(xs)) {
    if (elems.empty()) throw bad_parameters("block must be nonempty");
    std::sort(elems.begin(), elems.end());
    if (std::adjacent_find(elems.begin(), elems.end()) != elems.end())
      throw bad_parameters("block elements must be distinct");
  }

  int size() const { return static_cast<int>(elems.size()); }
  bool contains(int x) const {
    return std::binary_search(elems.begin(), elems.end(), x);
  }

  friend bool operator==(const Block&, const Block&) = default;
  friend auto operator<=>(const Block& a, const Block& b) {
    return a.elems <=> b.elems;
  }
};

// Base blocks. Blocks are pairwise distinct as sets; size constancy is a
// hypothesis the verifiers check (and must be able to falsify), so it is
// not enforced here.
struct BlockFamily {
  int order = 0;
  std::vector<Block> blocks;

  BlockFamily() = default;
  BlockFamily(int order_, std::vector<Block> blocks_)
      : order(order_), blocks(std::move(blocks_)) {
    for (const Block& b : blocks) {
      if (b.elems.back() >= order || b.elems.front() < 0)
        throw bad_parameters("block element out of range");
    }
    for (size_t i = 0; i < blocks.size(); ++i)
      for (size_t j = i + 1; j < blocks.size(); ++j)
        if (blocks[i] == blocks[j])
          throw bad_parameters("base blocks must be pairwise distinct");
  }

  int size() const { return static_cast<int>(blocks.size()); }
};

// Developed blocks, deduplicated, with the multiplicity each block picked up.
struct Design {
  int points = 0;
  std::vector<std::pair<Block, int>> blocks;  // sorted by block

  std::vector<Block> block_set() const {
    std::vector<Block> out;
    out.reserve(blocks.size());
    for (const auto& [b, m] : blocks) out.push_back(b);
    return out;
  }
  int distinct_blocks() const { return static_cast<int>(blocks.size()); }
};

struct DeltaTriple {
  int block;
  int a;
  int b;
  friend bool operator==(const DeltaTriple&, const DeltaTriple&) = default;
};

// Delta(d): all (block, a, b) with a,b in the block, a != b, sub(a,b) = d,
// in lexicographic order.
inline std::vector<DeltaTriple> delta(const BlockFamily& fam,
                                      const CayleyTable& sub, int d) {
  if (!is_latin(sub)) throw not_a_quasigroup();
  if (fam.order != sub.order()) throw order_mismatch();
  std::vector<DeltaTriple> out;
  for (int i = 0; i < fam.size(); ++i)
    for (int a : fam.blocks[i].elems)
      for (int b : fam.blocks[i].elems)
        if (a != b && sub.at(a, b) == d) out.push_back({i, a, b});
  return out;
}

struct DifferenceCertificate {
  int lambda = 0;
  int k = 0;
  std::map<int, int> per_difference;  // d != e -> ordered pair count
};

struct QdfVerification {
  std::optional<DifferenceCertificate> certificate;
  ViolationList violations;
  bool ok() const { return certificate.has_value(); }
};

namespace detail {

inline Block translate_block(const Block& b, const CayleyTable& add, int t) {
  std::vector<int> im;
  im.reserve(b.elems.size());
  for (int x : b.elems) im.push_back(add.at(x, t));
  return Block(std::move(im));
}

inline Block map_block(const Block& b, const Permutation& t) {
  std::vector<int> im;
  im.reserve(b.elems.size());
  for (int x : b.elems) im.push_back(t(x));
  return Block(std::move(im));
}

}  // namespace detail

// QDF check over a DFBQ: constant block size k >= 2, constant |Delta(d)|
// for every d != e (in a quasigroup every such d is representable with
// a != b), and distinct add-translates B+b. Classical group difference
// families are the special case (group, subtraction_quasigroup(group)).
inline QdfVerification verify_qdf(const Dfbq& d, const BlockFamily& fam) {
  if (d.order() != fam.order) throw order_mismatch();
  if (fam.size() == 0) throw bad_parameters("family must be nonempty");
  const int n = d.order();
  QdfVerification r;

  const int k = fam.blocks[0].size();
  for (int i = 1; i < fam.size(); ++i)
    if (fam.blocks[i].size() != k) {
      r.violations.push_back(
          make_violation(Violation::Kind::UnequalBlockSizes, {0, i}));
      break;
    }
  if (k < 2)
    r.violations.push_back(
        make_violation(Violation::Kind::BlockSizeTooSmall, {k},
                       "no ordered pairs exist, lambda is undefined"));

  std::vector<int> count(n, 0);
  for (const Block& b : fam.blocks)
    for (int x : b.elems)
      for (int y : b.elems)
        if (x != y) ++count[d.sub.at(x, y)];
  std::map<int, int> per_difference;
  int lambda = -1, baseline = -1;
  bool constant = true;
  for (int diff = 0; diff < n; ++diff) {
    if (diff == d.e) continue;
    per_difference[diff] = count[diff];
    if (lambda < 0) {
      lambda = count[diff];
      baseline = diff;
    } else if (constant && count[diff] != lambda) {
      constant = false;
      r.violations.push_back(make_violation(
          Violation::Kind::NonConstantLambda, {baseline, diff},
          "counts " + std::to_string(lambda) + " vs " +
              std::to_string(count[diff])));
    }
  }

  std::map<Block, std::pair<int, int>> seen;  // translate -> first (B, b)
  bool collision_found = false;
  for (int i = 0; i < fam.size() && !collision_found; ++i)
    for (int t = 0; t < n && !collision_found; ++t) {
      Block img = detail::translate_block(fam.blocks[i], d.add, t);
      auto [it, inserted] = seen.emplace(std::move(img), std::make_pair(i, t));
      if (!inserted) {
        r.violations.push_back(
            make_violation(Violation::Kind::TranslateCollision,
                           {it->second.first, it->second.second, i, t}));
        collision_found = true;
      }
    }

  if (r.violations.empty())
    r.certificate =
        DifferenceCertificate{lambda, k, std::move(per_difference)};
  return r;
}

// Right-translation development {B+t}: deduplicated, multiplicities kept.
inline Design develop(const BlockFamily& fam, const CayleyTable& add) {
  if (!is_latin(add)) throw not_a_quasigroup();
  if (fam.order != add.order()) throw order_mismatch();
  std::map<Block, int> bag;
  for (const Block& b : fam.blocks)
    for (int t = 0; t < add.order(); ++t)
      ++bag[detail::translate_block(b, add, t)];
  Design dsg;
  dsg.points = add.order();
  dsg.blocks.assign(bag.begin(), bag.end());
  return dsg;
}

struct DesignCertificate {
  int k = 0;
  int lambda = 0;
};

struct DesignVerification {
  std::optional<DesignCertificate> certificate;
  ViolationList violations;
  bool ok() const { return certificate.has_value(); }
};

// Direct pair-count check of the 2-design property: constant block size and
// every unordered pair of distinct points in exactly lambda blocks.
inline DesignVerification is_2design(int v, const std::vector<Block>& blocks) {
  if (blocks.empty()) throw bad_parameters("design must have blocks");
  if (v < 2) throw bad_parameters("a 2-design needs at least two points");
  for (const Block& b : blocks)
    if (b.elems.front() < 0 || b.elems.back() >= v)
      throw bad_parameters("block element out of range");
  DesignVerification r;

  const int k = blocks[0].size();
  for (size_t i = 1; i < blocks.size(); ++i)
    if (blocks[i].size() != k) {
      r.violations.push_back(make_violation(
          Violation::Kind::UnequalBlockSizes, {0, static_cast<int>(i)}));
      break;
    }

  std::vector<int> pair_count(static_cast<size_t>(v) * v, 0);
  for (const Block& blk : blocks)
    for (size_t i = 0; i < blk.elems.size(); ++i)
      for (size_t j = i + 1; j < blk.elems.size(); ++j)
        ++pair_count[blk.elems[i] * v + blk.elems[j]];

  const int lambda = pair_count[0 * v + 1];
  bool constant = true;
  for (int a = 0; a < v && constant; ++a)
    for (int b = a + 1; b < v && constant; ++b)
      if (pair_count[a * v + b] != lambda) {
        constant = false;
        r.violations.push_back(make_violation(
            Violation::Kind::NonConstantPairCount, {0, 1, a, b},
            "counts " + std::to_string(lambda) + " vs " +
                std::to_string(pair_count[a * v + b])));
      }

  if (r.violations.empty()) r.certificate = DesignCertificate{k, lambda};
  return r;
}

inline DesignVerification is_2design(const Design& d) {
  return is_2design(d.points, d.block_set());
}

struct GeneralizedDevelopment {
  std::optional<Design> design;
  std::optional<DesignCertificate> certificate;
  ViolationList violations;
  // lambda constancy is checked over differences representable as sub(a,b)
  // with a != b; a diagonal-only-representable d is excluded
  bool ok() const { return design.has_value(); }
};

// Checks all six hypotheses of the generalized development construction and,
// when they hold, returns the design {t(B)} together with its certificate.
// Hypotheses are checked independently; each violated one reports its first
// witness.
inline GeneralizedDevelopment generalized_develop(
    int n, const std::vector<Permutation>& translations,
    const CayleyTable& sub, const BlockFamily& fam) {
  if (sub.order() != n || fam.order != n) throw order_mismatch();
  for (const Permutation& t : translations)
    if (t.order() != n) throw order_mismatch();
  if (fam.size() == 0) throw bad_parameters("family must be nonempty");
  GeneralizedDevelopment r;

  // (1) sharp transitivity: exactly one t with t(a) = b
  {
    bool bad = false;
    for (int a = 0; a < n && !bad; ++a)
      for (int b = 0; b < n && !bad; ++b) {
        int hits = 0;
        for (const Permutation& t : translations)
          if (t(a) == b) ++hits;
        if (hits != 1) {
          bad = true;
          r.violations.push_back(make_violation(
              Violation::Kind::NotSharplyTransitive, {a, b},
              std::to_string(hits) + " translations send a to b"));
        }
      }
  }

  // (2) a - x = b uniquely solvable: every row of sub is a permutation
  for (int a = 0; a < n; ++a) {
    std::vector<char> seen(n, 0);
    bool ok = true;
    for (int x = 0; x < n && ok; ++x) {
      int v = sub.at(a, x);
      if (seen[v]) ok = false;
      seen[v] = 1;
    }
    if (!ok) {
      r.violations.push_back(
          make_violation(Violation::Kind::DifferenceNotSolvable, {a}));
      break;
    }
  }

  // (3) invariance: sub(t a, t b) = sub(a, b)
  {
    bool bad = false;
    for (size_t ti = 0; ti < translations.size() && !bad; ++ti)
      for (int a = 0; a < n && !bad; ++a)
        for (int b = 0; b < n && !bad; ++b)
          if (sub.at(translations[ti](a), translations[ti](b)) !=
              sub.at(a, b)) {
            bad = true;
            r.violations.push_back(
                make_violation(Violation::Kind::TranslationVariance,
                               {static_cast<int>(ti), a, b}));
          }
  }

  // (4) constant |Delta(d)| over the d representable as sub(a,b), a != b
  {
    std::vector<int> count(n, 0), representable(n, 0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (a != b) representable[sub.at(a, b)] = 1;
    for (const Block& blk : fam.blocks)
      for (int x : blk.elems)
        for (int y : blk.elems)
          if (x != y) ++count[sub.at(x, y)];
    int lambda = -1, baseline = -1;
    for (int diff = 0; diff < n; ++diff) {
      if (!representable[diff]) continue;
      if (lambda < 0) {
        lambda = count[diff];
        baseline = diff;
      } else if (count[diff] != lambda) {
        r.violations.push_back(make_violation(
            Violation::Kind::NonConstantLambda, {baseline, diff},
            "counts " + std::to_string(lambda) + " vs " +
                std::to_string(count[diff])));
        break;
      }
    }
  }

  // (5) |t B| = k; translations are bijections, so this is size constancy
  const int k = fam.blocks[0].size();
  for (int i = 1; i < fam.size(); ++i)
    if (fam.blocks[i].size() != k) {
      r.violations.push_back(
          make_violation(Violation::Kind::UnequalBlockSizes, {0, i}));
      break;
    }

  // (6) t_i B = t_j C only for i = j, B = C
  std::map<Block, std::pair<int, int>> seen;  // image -> first (B, t)
  {
    bool collision = false;
    for (int i = 0; i < fam.size() && !collision; ++i)
      for (size_t ti = 0; ti < translations.size() && !collision; ++ti) {
        Block img = detail::map_block(fam.blocks[i], translations[ti]);
        auto [it, inserted] =
            seen.emplace(std::move(img), std::make_pair(i, static_cast<int>(ti)));
        if (!inserted) {
          collision = true;
          r.violations.push_back(make_violation(
              Violation::Kind::TranslateCollision,
              {it->second.first, it->second.second, i, static_cast<int>(ti)}));
        }
      }
  }

  if (!r.violations.empty()) return r;

  // hypotheses hold; the conclusion and the identity-translation lemma are
  // now theorem contracts
  bool has_identity = false;
  for (const Permutation& t : translations)
    if (t.is_identity()) has_identity = true;
  detail::contract(has_identity, {}, "no identity translation exists");

  Design dsg;
  dsg.points = n;
  for (auto& [img, origin] : seen) dsg.blocks.emplace_back(img, 1);
  auto check = is_2design(dsg);
  detail::contract(check.ok(), {}, "generalized development is not a 2-design");
  r.design = std::move(dsg);
  r.certificate = check.certificate;
  return r;
}

// x + y := t_y(x) where t_y is the unique translation with t_y(a0) = y.
// The base point a0 defaults to 0.
inline CayleyTable translations_to_addition(
    int n, const std::vector<Permutation>& translations, int a0 = 0) {
  std::vector<const Permutation*> by_target(n, nullptr);
  for (const Permutation& t : translations) {
    int y = t(a0);
    if (by_target[y])
      throw bad_parameters("several translations send the base point to " +
                           std::to_string(y));
    by_target[y] = &t;
  }
  for (int y = 0; y < n; ++y)
    if (!by_target[y])
      throw bad_parameters("no translation sends the base point to " +
                           std::to_string(y));
  return CayleyTable::from_function(
      n, [&](int x, int y) { return (*by_target[y])(x); });
}

// Development equality: the quasigroup development through d.add and the
// group development through the decomposed group coincide as block sets.
// Returns the smallest mismatching block, or nullopt when they agree.
inline std::optional<Block> dev_equality(const Dfbq& d,
                                         const BlockFamily& fam) {
  Decomposition dec = general_decompose(d);
  std::vector<Block> via_add = develop(fam, d.add).block_set();
  std::vector<Block> via_group = develop(fam, dec.group.table).block_set();
  if (via_add == via_group) return std::nullopt;
  std::vector<Block> diff;
  std::set_symmetric_difference(via_add.begin(), via_add.end(),
                                via_group.begin(), via_group.end(),
                                std::back_inserter(diff));
  return diff.front();
}

}  // namespace qdf
