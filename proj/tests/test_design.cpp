#include <catch2/catch_amalgamated.hpp>
#include <map>
#include <random>

#include "helpers.hpp"
#include "qdf/qdf.hpp"

using namespace qdf;
using testutil::dfbq_of;
using testutil::family;
using testutil::group_dfbq;
using testutil::shifted_z3_add;
using testutil::zn_add;
using testutil::zn_sub;

namespace {

bool contains_block(const std::vector<Block>& blocks,
                    std::vector<int> elems) {
  return std::find(blocks.begin(), blocks.end(), Block(std::move(elems))) !=
         blocks.end();
}

}  // namespace

TEST_CASE("block and family invariants") {
  CHECK(Block({4, 1, 2}).elems == std::vector<int>{1, 2, 4});
  CHECK_THROWS_AS(Block({1, 1, 2}), bad_parameters);
  CHECK_THROWS_AS(Block(std::vector<int>{}), bad_parameters);
  CHECK_THROWS_AS(family(3, {{0, 3}}), bad_parameters);
  CHECK_THROWS_AS(family(5, {{0, 1}, {1, 0}}), bad_parameters);
}

TEST_CASE("delta lists ordered in-block difference triples") {
  auto fam = family(7, {{1, 2, 4}});
  auto triples = delta(fam, zn_sub(7), 1);
  REQUIRE(triples.size() == 1);
  CHECK(triples[0] == DeltaTriple{0, 2, 1});

  CHECK(delta(fam, zn_sub(7), 0).empty());

  auto two = family(5, {{0, 1}, {0, 2}});
  auto d3 = delta(two, zn_sub(5), 3);
  REQUIRE(d3.size() == 1);
  CHECK(d3[0] == DeltaTriple{1, 0, 2});

  CHECK_THROWS_AS(delta(fam, zn_sub(5), 1), order_mismatch);
  CHECK_THROWS_AS(delta(family(2, {{0, 1}}), CayleyTable(2, {0, 0, 1, 0}), 1),
                  not_a_quasigroup);
}

TEST_CASE("delta counts sum to |fam| * k * (k-1)") {
  std::mt19937_64 rng(17);
  const auto squares = all_latin_squares(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto& sub = squares[rng() % squares.size()];
    const int k = 2 + static_cast<int>(rng() % 3);
    std::vector<int> elems;
    while (static_cast<int>(elems.size()) < k) {
      int x = static_cast<int>(rng() % 5);
      if (std::find(elems.begin(), elems.end(), x) == elems.end())
        elems.push_back(x);
    }
    auto fam = BlockFamily(5, {Block(elems)});
    size_t total = 0;
    for (int d = 0; d < 5; ++d) total += delta(fam, sub, d).size();
    CHECK(total == static_cast<size_t>(k) * (k - 1));
  }
}

TEST_CASE("verify_qdf certifies the classic difference families") {
  auto z7 = verify_qdf(group_dfbq(7), family(7, {{1, 2, 4}}));
  REQUIRE(z7.ok());
  CHECK(z7.certificate->k == 3);
  CHECK(z7.certificate->lambda == 1);
  for (const auto& [d, c] : z7.certificate->per_difference) CHECK(c == 1);
  CHECK(z7.certificate->per_difference.size() == 6);

  auto z5 = verify_qdf(group_dfbq(5), family(5, {{0, 1}, {0, 2}}));
  REQUIRE(z5.ok());
  CHECK(z5.certificate->k == 2);
  CHECK(z5.certificate->lambda == 1);
}

TEST_CASE("verify_qdf reports non-constant lambda and collisions") {
  auto thin = verify_qdf(group_dfbq(5), family(5, {{0, 1}}));
  REQUIRE_FALSE(thin.ok());
  REQUIRE(thin.violations.size() == 1);
  CHECK(thin.violations[0].kind == Violation::Kind::NonConstantLambda);
  CHECK(thin.violations[0].witness[0] == 1);
  CHECK(thin.violations[0].witness[1] == 2);

  // {0,2}+2 = {0,2}+0 over Z_4, and its difference counts are lopsided
  auto crooked = verify_qdf(group_dfbq(4), family(4, {{0, 2}}));
  REQUIRE_FALSE(crooked.ok());
  bool lambda_bad = false, collision = false;
  for (const auto& v : crooked.violations) {
    if (v.kind == Violation::Kind::NonConstantLambda) lambda_bad = true;
    if (v.kind == Violation::Kind::TranslateCollision) {
      collision = true;
      CHECK(v.witness == std::array<int, 4>{0, 0, 0, 2});
    }
  }
  CHECK(lambda_bad);
  CHECK(collision);

  auto ragged = verify_qdf(group_dfbq(5), family(5, {{0, 1}, {0, 2, 3}}));
  bool size_bad = false;
  for (const auto& v : ragged.violations)
    if (v.kind == Violation::Kind::UnequalBlockSizes) size_bad = true;
  CHECK(size_bad);

  auto singleton = verify_qdf(group_dfbq(5), family(5, {{0}}));
  bool too_small = false;
  for (const auto& v : singleton.violations)
    if (v.kind == Violation::Kind::BlockSizeTooSmall) too_small = true;
  CHECK(too_small);
}

TEST_CASE("develop translates base blocks") {
  auto fano = develop(family(7, {{1, 2, 4}}), zn_add(7));
  CHECK(fano.distinct_blocks() == 7);
  for (const auto& [b, m] : fano.blocks) CHECK(m == 1);

  auto whole = develop(family(3, {{0, 1, 2}}), zn_add(3));
  REQUIRE(whole.distinct_blocks() == 1);
  CHECK(whole.blocks[0].first == Block({0, 1, 2}));
  CHECK(whole.blocks[0].second == 3);

  auto shifted = develop(family(3, {{0, 1}}), shifted_z3_add());
  auto blocks = shifted.block_set();
  REQUIRE(blocks.size() == 3);
  CHECK(contains_block(blocks, {0, 1}));
  CHECK(contains_block(blocks, {0, 2}));
  CHECK(contains_block(blocks, {1, 2}));
}

TEST_CASE("develop accepts k=1 blocks that verify_qdf rejects") {
  auto singles = develop(family(3, {{0}}), zn_add(3));
  CHECK(singles.distinct_blocks() == 3);
  auto rejected = verify_qdf(group_dfbq(3), family(3, {{0}}));
  CHECK_FALSE(rejected.ok());
}

TEST_CASE("generalized development flags unsolvable differences and collisions") {
  std::vector<Permutation> right_adds;
  for (int t = 0; t < 3; ++t) {
    std::vector<int> im(3);
    for (int x = 0; x < 3; ++x) im[x] = (x + t) % 3;
    right_adds.emplace_back(std::move(im));
  }

  // row 0 repeats a value, so 0 - x = b is not uniquely solvable
  auto bad_sub = CayleyTable(3, {0, 0, 1, 1, 2, 0, 2, 1, 0});
  auto res = generalized_develop(3, right_adds, bad_sub, family(3, {{0, 1}}));
  REQUIRE_FALSE(res.ok());
  bool unsolvable = false;
  for (const auto& v : res.violations)
    if (v.kind == Violation::Kind::DifferenceNotSolvable) {
      unsolvable = true;
      CHECK(v.witness[0] == 0);
    }
  CHECK(unsolvable);

  // the whole carrier is fixed by every translation: t_i B = t_j B
  auto whole = generalized_develop(3, right_adds, zn_sub(3),
                                   family(3, {{0, 1, 2}}));
  REQUIRE_FALSE(whole.ok());
  bool collision = false;
  for (const auto& v : whole.violations)
    if (v.kind == Violation::Kind::TranslateCollision) {
      collision = true;
      CHECK(v.witness == std::array<int, 4>{0, 0, 0, 1});
    }
  CHECK(collision);
}

TEST_CASE("translations of a DFBQ rebuild a DFBQ through the base point") {
  // right translations of any DFBQ satisfy the development hypotheses; the
  // addition they induce at base point 0 forms a DFBQ with o = 0 again
  auto d = testutil::dfbq_of(shifted_z3_add(), zn_sub(3));
  std::vector<Permutation> translations;
  for (int t = 0; t < 3; ++t) {
    std::vector<int> im(3);
    for (int x = 0; x < 3; ++x) im[x] = d.add.at(x, t);
    translations.emplace_back(std::move(im));
  }
  auto rebuilt_add = translations_to_addition(3, translations, 0);
  CHECK(classify(rebuilt_add).at_least_quasigroup());
  auto check = verify_dfbq(rebuilt_add, d.sub);
  REQUIRE(check.ok());
  CHECK(check.dfbq->o == 0);
  CHECK(check.dfbq->e == d.e);
}

TEST_CASE("develop multiplicities over a group divide the order") {
  std::mt19937_64 rng(23);
  for (int n = 2; n <= 5; ++n)
    for (const auto& g : all_group_tables(n)) {
      // random 2-element base block
      int a = static_cast<int>(rng() % n);
      int b = static_cast<int>(rng() % (n - 1));
      if (b >= a) ++b;
      auto dsg = develop(BlockFamily(n, {Block({std::min(a, b), std::max(a, b)})}), g);
      for (const auto& [blk, m] : dsg.blocks) CHECK(n % m == 0);
    }
}

TEST_CASE("is_2design certifies and rejects") {
  auto fano = develop(family(7, {{1, 2, 4}}), zn_add(7));
  auto cert = is_2design(fano);
  REQUIRE(cert.ok());
  CHECK(cert.certificate->k == 3);
  CHECK(cert.certificate->lambda == 1);

  std::vector<Block> all_pairs;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) all_pairs.push_back(Block({a, b}));
  auto complete = is_2design(4, all_pairs);
  REQUIRE(complete.ok());
  CHECK(complete.certificate->k == 2);
  CHECK(complete.certificate->lambda == 1);

  auto ragged = is_2design(3, {Block({0, 1, 2}), Block({0, 1})});
  REQUIRE_FALSE(ragged.ok());
  CHECK(ragged.violations[0].kind == Violation::Kind::UnequalBlockSizes);

  auto uneven = is_2design(4, {Block({0, 1}), Block({0, 2})});
  REQUIRE_FALSE(uneven.ok());
  bool found = false;
  for (const auto& v : uneven.violations)
    if (v.kind == Violation::Kind::NonConstantPairCount) found = true;
  CHECK(found);

  CHECK_THROWS_AS(is_2design(3, {}), bad_parameters);
}

TEST_CASE("certificate lambda matches design lambda on every order-4 DFBQ") {
  // sweep every DFBQ of order 4 with the two feasible (k, lambda) settings
  enumerate_dfbq(4, DfbqEnumMode::brute, [&](const Dfbq& d) {
    for (SearchParams params : {SearchParams{2, 2, 3}, SearchParams{3, 2, 1}}) {
      auto res = find_difference_families(d, params);
      for (const auto& fam : res.families) {
        auto cert = verify_qdf(d, fam);
        REQUIRE(cert.ok());
        auto dsg = is_2design(develop(fam, d.add));
        REQUIRE(dsg.ok());
        CHECK(dsg.certificate->k == cert.certificate->k);
        CHECK(dsg.certificate->lambda == cert.certificate->lambda);
        CHECK(cert.certificate->lambda == params.lambda);
      }
    }
  });
}

TEST_CASE("certificate lambda matches design lambda for found QDFs") {
  // classical case over cyclic groups, k in {2,3}
  for (int n = 3; n <= 7; ++n) {
    auto d = group_dfbq(n);
    for (int k = 2; k <= 3; ++k) {
      if (k > n) continue;
      for (int lambda = 1; lambda <= 2; ++lambda) {
        const long long pairs = static_cast<long long>(lambda) * (n - 1);
        if (pairs % (k * (k - 1)) != 0) continue;
        SearchParams params;
        params.k = k;
        params.lambda = lambda;
        params.max_blocks = static_cast<int>(pairs / (k * (k - 1)));
        auto res = find_difference_families(d, params);
        for (const auto& fam : res.families) {
          auto cert = verify_qdf(d, fam);
          REQUIRE(cert.ok());
          auto dsg = is_2design(develop(fam, d.add));
          REQUIRE(dsg.ok());
          CHECK(dsg.certificate->k == cert.certificate->k);
          CHECK(dsg.certificate->lambda == cert.certificate->lambda);
        }
      }
    }
  }
}

TEST_CASE("generalized development reproduces the Fano plane") {
  std::vector<Permutation> right_adds;
  for (int t = 0; t < 7; ++t) {
    std::vector<int> im(7);
    for (int x = 0; x < 7; ++x) im[x] = (x + t) % 7;
    right_adds.emplace_back(std::move(im));
  }
  auto res = generalized_develop(7, right_adds, zn_sub(7),
                                 family(7, {{1, 2, 4}}));
  REQUIRE(res.ok());
  CHECK(res.design->distinct_blocks() == 7);
  CHECK(res.certificate->k == 3);
  CHECK(res.certificate->lambda == 1);
  CHECK(res.design->block_set() ==
        develop(family(7, {{1, 2, 4}}), zn_add(7)).block_set());
}

TEST_CASE("generalized development rejects broken hypotheses") {
  std::vector<Permutation> dup(7, Permutation::identity(7));
  auto res = generalized_develop(7, dup, zn_sub(7), family(7, {{1, 2, 4}}));
  REQUIRE_FALSE(res.ok());
  bool sharp = false;
  for (const auto& v : res.violations)
    if (v.kind == Violation::Kind::NotSharplyTransitive) sharp = true;
  CHECK(sharp);

  // addition is not invariant under its own right translations
  std::vector<Permutation> right_adds;
  for (int t = 0; t < 7; ++t) {
    std::vector<int> im(7);
    for (int x = 0; x < 7; ++x) im[x] = (x + t) % 7;
    right_adds.emplace_back(std::move(im));
  }
  auto varies = generalized_develop(7, right_adds, zn_add(7),
                                    family(7, {{1, 2, 4}}));
  REQUIRE_FALSE(varies.ok());
  bool invariance = false;
  for (const auto& v : varies.violations)
    if (v.kind == Violation::Kind::TranslationVariance) {
      invariance = true;
      CHECK(v.witness[0] == 1);
      CHECK(v.witness[1] == 0);
      CHECK(v.witness[2] == 0);
    }
  CHECK(invariance);
}

TEST_CASE("generalized development agrees with develop over groups") {
  // families that satisfy the difference-family hypotheses
  struct Case {
    int n;
    std::vector<std::vector<int>> blocks;
  };
  for (const Case& c : {Case{5, {{0, 1}, {0, 2}}},
                        Case{7, {{1, 2, 4}}},
                        Case{13, {{0, 1, 3, 9}}}}) {
    const auto g = zn_add(c.n);
    std::vector<Permutation> right_adds;
    for (int t = 0; t < c.n; ++t) {
      std::vector<int> im(c.n);
      for (int x = 0; x < c.n; ++x) im[x] = g.at(x, t);
      right_adds.emplace_back(std::move(im));
    }
    auto fam = family(c.n, c.blocks);
    auto res = generalized_develop(c.n, right_adds,
                                   subtraction_quasigroup(g), fam);
    REQUIRE(res.ok());
    CHECK(res.design->block_set() == develop(fam, g).block_set());
  }

  // a family violating lambda-constancy is rejected, not developed: over the
  // Klein four-group both ordered differences of {0,1} coincide
  auto v4 = testutil::v4();
  std::vector<Permutation> v4_adds;
  for (int t = 0; t < 4; ++t) {
    std::vector<int> im(4);
    for (int x = 0; x < 4; ++x) im[x] = v4.at(x, t);
    v4_adds.emplace_back(std::move(im));
  }
  auto rejected = generalized_develop(4, v4_adds, subtraction_quasigroup(v4),
                                      family(4, {{0, 1}}));
  REQUIRE_FALSE(rejected.ok());
  bool lambda_bad = false;
  for (const auto& v : rejected.violations)
    if (v.kind == Violation::Kind::NonConstantLambda) lambda_bad = true;
  CHECK(lambda_bad);
}

TEST_CASE("translations_to_addition recovers the group operation") {
  std::vector<Permutation> right_adds;
  for (int t = 0; t < 7; ++t) {
    std::vector<int> im(7);
    for (int x = 0; x < 7; ++x) im[x] = (x + t) % 7;
    right_adds.emplace_back(std::move(im));
  }
  CHECK(translations_to_addition(7, right_adds) == zn_add(7));
  CHECK_THROWS_AS(
      translations_to_addition(7, {Permutation::identity(7)}),
      bad_parameters);
}

TEST_CASE("dev_equality holds on the worked examples") {
  auto shifted = dfbq_of(shifted_z3_add(), zn_sub(3));
  CHECK_FALSE(dev_equality(shifted, family(3, {{0, 1}})).has_value());

  CHECK_FALSE(dev_equality(group_dfbq(5), family(5, {{0, 1}, {0, 2}}))
                  .has_value());

  auto doubly = dfbq_of(zn_sub(3), zn_sub(3));
  CHECK_FALSE(dev_equality(doubly, family(3, {{0, 1}})).has_value());
}

TEST_CASE("dev_equality holds for random DFBQs and families") {
  std::mt19937_64 rng(31);
  for (int n = 3; n <= 5; ++n) {
    const auto groups = all_group_tables(n);
    for (int trial = 0; trial < 25; ++trial) {
      auto g = GroupPresentation::from_table(groups[rng() % groups.size()]);
      // random alpha fixing the identity, random beta
      std::vector<int> a_im(n), b_im(n);
      for (int i = 0; i < n; ++i) a_im[i] = b_im[i] = i;
      for (int i = n - 1; i > 0; --i)
        std::swap(b_im[i], b_im[rng() % static_cast<uint64_t>(i + 1)]);
      std::vector<int> nonid;
      for (int i = 0; i < n; ++i)
        if (i != g.identity) nonid.push_back(i);
      for (int i = static_cast<int>(nonid.size()) - 1; i > 0; --i)
        std::swap(nonid[i], nonid[rng() % static_cast<uint64_t>(i + 1)]);
      for (size_t i = 0, pos = 0; i < a_im.size(); ++i)
        if (static_cast<int>(i) != g.identity) a_im[i] = nonid[pos++];
      auto d = general_construct(g, Permutation(a_im), Permutation(b_im));

      int x = static_cast<int>(rng() % n);
      int y = static_cast<int>(rng() % (n - 1));
      if (y >= x) ++y;
      auto fam = BlockFamily(n, {Block({std::min(x, y), std::max(x, y)})});
      CHECK_FALSE(dev_equality(d, fam).has_value());
    }
  }
}
