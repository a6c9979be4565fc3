#pragma once

#include <bit>
#include <chrono>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "qdf/cayley_table.hpp"
#include "qdf/design.hpp"
#include "qdf/dfbq.hpp"
#include "qdf/errors.hpp"

namespace qdf {

namespace detail {

inline constexpr uint64_t kFnvOffset = 14695981039346656037ULL;
inline constexpr uint64_t kFnvPrime = 1099511628211ULL;

inline uint64_t fnv_mix(uint64_t h, int v) {
  auto u = static_cast<uint32_t>(v);
  for (int i = 0; i < 4; ++i) {
    h ^= (u >> (8 * i)) & 0xff;
    h *= kFnvPrime;
  }
  return h;
}

inline uint64_t hash_cells(int n, std::span<const int> cells) {
  uint64_t h = fnv_mix(kFnvOffset, n);
  for (int c : cells) h = fnv_mix(h, c);
  return h;
}

inline uint64_t hash_dfbq(const Dfbq& d) {
  uint64_t h = fnv_mix(kFnvOffset, d.order());
  for (int c : d.add.cells()) h = fnv_mix(h, c);
  h = fnv_mix(h, 255);
  for (int c : d.sub.cells()) h = fnv_mix(h, c);
  return h;
}

// deterministic index pick, independent of the standard library's
// distribution implementations
inline int pick(std::mt19937_64& rng, int m) {
  return static_cast<int>(rng() % static_cast<uint64_t>(m));
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    auto d = std::chrono::steady_clock::now() - start_;
    return std::chrono::duration<double, std::milli>(d).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

struct EnumerationReport {
  int order = 0;
  std::string mode;  // "brute" | "constructive"
  uint64_t count = 0;
  uint64_t checksum = 0;  // order-independent: wrapping sum of object hashes
  double elapsed_ms = 0.0;
  std::vector<std::string> notes;

  std::string to_line() const {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "order=%d mode=%s count=%llu checksum=%016llx elapsed_ms=%.1f",
                  order, mode.c_str(),
                  static_cast<unsigned long long>(count),
                  static_cast<unsigned long long>(checksum), elapsed_ms);
    return buf;
  }
};

inline constexpr int kLatinOrderCap = 6;
inline constexpr int kBruteDfbqOrderCap = 4;
inline constexpr int kConstructiveDfbqOrderCap = 5;

namespace detail {

// Row-by-row backtracking with per-row/per-column availability bitmasks.
// One machine word per row and column suffices for the supported orders.
template <class Consumer>
struct LatinBacktracker {
  int n;
  uint32_t full;
  std::vector<int> cells;
  std::vector<uint32_t> row_used, col_used;
  uint64_t count = 0;
  uint64_t checksum = 0;
  Consumer& consumer;

  LatinBacktracker(int n_, Consumer& c)
      : n(n_), full((1u << n_) - 1), cells(static_cast<size_t>(n_) * n_, 0),
        row_used(n_, 0), col_used(n_, 0), consumer(c) {}

  void run(int pos) {
    if (pos == n * n) {
      ++count;
      checksum += hash_cells(n, cells);
      consumer(std::span<const int>(cells));
      return;
    }
    const int r = pos / n, c = pos % n;
    uint32_t avail = full & ~row_used[r] & ~col_used[c];
    while (avail) {
      const int v = std::countr_zero(avail);
      avail &= avail - 1;
      const uint32_t bit = 1u << v;
      cells[pos] = v;
      row_used[r] |= bit;
      col_used[c] |= bit;
      run(pos + 1);
      row_used[r] &= ~bit;
      col_used[c] &= ~bit;
    }
  }
};

inline std::vector<std::vector<int>> all_permutation_images(int n) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  std::vector<std::vector<int>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace detail

// Emits every n x n Latin square exactly once. Sequential mode emits in
// lexicographic row-major order; with jobs > 1 the search fans out over
// first-row choices and the consumer must be safe to call concurrently.
template <class Consumer>
EnumerationReport enumerate_latin(int n, Consumer&& consumer, int jobs = 1) {
  if (n < 1) throw bad_parameters("order must be positive");
  if (n > kLatinOrderCap) throw order_too_large(n, kLatinOrderCap);
  detail::Stopwatch sw;
  EnumerationReport rep;
  rep.order = n;
  rep.mode = "brute";

  if (jobs <= 1) {
    detail::LatinBacktracker<Consumer> bt(n, consumer);
    bt.run(0);
    rep.count = bt.count;
    rep.checksum = bt.checksum;
  } else {
    const auto first_rows = detail::all_permutation_images(n);
    const int workers =
        std::min<int>(jobs, static_cast<int>(first_rows.size()));
    std::vector<uint64_t> counts(workers, 0), sums(workers, 0);
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        detail::LatinBacktracker<Consumer> bt(n, consumer);
        for (size_t idx = w; idx < first_rows.size(); idx += workers) {
          const auto& row = first_rows[idx];
          for (int c = 0; c < n; ++c) {
            bt.cells[c] = row[c];
            bt.row_used[0] |= 1u << row[c];
            bt.col_used[c] |= 1u << row[c];
          }
          bt.run(n);
          bt.row_used[0] = 0;
          for (int c = 0; c < n; ++c) bt.col_used[c] &= ~(1u << row[c]);
        }
        counts[w] = bt.count;
        sums[w] = bt.checksum;
      });
    }
    for (auto& t : pool) t.join();
    for (int w = 0; w < workers; ++w) {
      rep.count += counts[w];
      rep.checksum += sums[w];
    }
  }
  rep.elapsed_ms = sw.elapsed_ms();
  return rep;
}

inline EnumerationReport enumerate_latin_count(int n, int jobs = 1) {
  return enumerate_latin(n, [](std::span<const int>) {}, jobs);
}

inline std::vector<CayleyTable> all_latin_squares(int n) {
  std::vector<CayleyTable> out;
  enumerate_latin(n, [&](std::span<const int> cells) {
    out.emplace_back(n, std::vector<int>(cells.begin(), cells.end()));
  });
  return out;
}

// All labeled group tables on {0..n-1}, by Latin + associativity filtering.
inline std::vector<CayleyTable> all_group_tables(int n) {
  std::vector<CayleyTable> out;
  enumerate_latin(n, [&](std::span<const int> cells) {
    CayleyTable t(n, std::vector<int>(cells.begin(), cells.end()));
    if (is_associative(t)) out.push_back(std::move(t));
  });
  return out;
}

enum class DfbqEnumMode { brute, constructive };

// Emits every DFBQ of order n exactly once, either by filtering all
// (add, sub) Latin pairs through the axioms (brute) or by ranging the
// explicit group construction over all (group, alpha, beta) and
// deduplicating (constructive). Both modes produce the same object set;
// the constructive report notes the observed presentation multiplicities.
template <class Consumer>
EnumerationReport enumerate_dfbq(int n, DfbqEnumMode mode, Consumer&& consumer,
                                 int jobs = 1) {
  if (n < 1) throw bad_parameters("order must be positive");
  detail::Stopwatch sw;
  EnumerationReport rep;
  rep.order = n;

  if (mode == DfbqEnumMode::brute) {
    if (n > kBruteDfbqOrderCap) throw order_too_large(n, kBruteDfbqOrderCap);
    rep.mode = "brute";
    const auto latins = all_latin_squares(n);
    const size_t m = latins.size();
    auto scan = [&](size_t begin, size_t step, uint64_t& count,
                    uint64_t& sum) {
      for (size_t i = begin; i < m; i += step)
        for (size_t j = 0; j < m; ++j) {
          auto check = verify_dfbq(latins[i], latins[j]);
          if (check.ok()) {
            ++count;
            sum += detail::hash_dfbq(*check.dfbq);
            consumer(*check.dfbq);
          }
        }
    };
    if (jobs <= 1) {
      scan(0, 1, rep.count, rep.checksum);
    } else {
      const int workers = std::min<int>(jobs, static_cast<int>(m));
      std::vector<uint64_t> counts(workers, 0), sums(workers, 0);
      std::vector<std::thread> pool;
      for (int w = 0; w < workers; ++w)
        pool.emplace_back(
            [&, w] { scan(w, workers, counts[w], sums[w]); });
      for (auto& t : pool) t.join();
      for (int w = 0; w < workers; ++w) {
        rep.count += counts[w];
        rep.checksum += sums[w];
      }
    }
  } else {
    if (n > kConstructiveDfbqOrderCap)
      throw order_too_large(n, kConstructiveDfbqOrderCap);
    rep.mode = "constructive";
    const auto groups = all_group_tables(n);
    const auto betas = detail::all_permutation_images(n);
    std::map<std::pair<std::vector<int>, std::vector<int>>, int> fibers;
    uint64_t raw = 0;
    for (const CayleyTable& gt : groups) {
      GroupPresentation g = GroupPresentation::from_table(gt);
      // alphas fixing the identity: permute the remaining points
      std::vector<int> rest;
      for (int x = 0; x < n; ++x)
        if (x != g.identity) rest.push_back(x);
      std::vector<int> alpha_im(n);
      do {
        alpha_im[g.identity] = g.identity;
        for (size_t i = 0, pos = 0; i < alpha_im.size(); ++i)
          if (static_cast<int>(i) != g.identity)
            alpha_im[i] = rest[pos++];
        const Permutation alpha{alpha_im};
        for (const auto& beta_im : betas) {
          ++raw;
          Dfbq d = general_construct(g, alpha, Permutation{beta_im});
          auto key = std::make_pair(d.add.cells(), d.sub.cells());
          auto [it, inserted] = fibers.emplace(std::move(key), 1);
          if (inserted) {
            ++rep.count;
            rep.checksum += detail::hash_dfbq(d);
            consumer(d);
          } else {
            ++it->second;
          }
        }
      } while (std::next_permutation(rest.begin(), rest.end()));
    }
    int max_fiber = 0;
    for (const auto& [key, c] : fibers) max_fiber = std::max(max_fiber, c);
    rep.notes.push_back("raw_presentations=" + std::to_string(raw) +
                        " max_fiber=" + std::to_string(max_fiber));
  }
  rep.elapsed_ms = sw.elapsed_ms();
  return rep;
}

inline EnumerationReport enumerate_dfbq_count(int n, DfbqEnumMode mode,
                                              int jobs = 1) {
  return enumerate_dfbq(n, mode, [](const Dfbq&) {}, jobs);
}

// Fixed dev_equality test battery: every 2-subset as a singleton family,
// plus one seeded random family of up to two distinct 2-subsets.
inline std::vector<BlockFamily> dev_battery(int n, uint64_t seed) {
  std::vector<BlockFamily> fams;
  if (n < 2) return fams;
  std::vector<Block> pairs;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      pairs.push_back(Block({a, b}));
      fams.emplace_back(n, std::vector<Block>{pairs.back()});
    }
  std::mt19937_64 rng(seed);
  const int i = detail::pick(rng, static_cast<int>(pairs.size()));
  if (pairs.size() == 1) {
    fams.emplace_back(n, std::vector<Block>{pairs[0]});
  } else {
    int j = detail::pick(rng, static_cast<int>(pairs.size() - 1));
    if (j >= i) ++j;
    std::vector<Block> two{pairs[std::min(i, j)], pairs[std::max(i, j)]};
    fams.emplace_back(n, std::move(two));
  }
  return fams;
}

struct StructureCheckReport {
  int order = 0;
  uint64_t total = 0;
  uint64_t passed = 0;
  std::string first_failure;
  double elapsed_ms = 0.0;
  bool ok() const { return total > 0 && passed == total; }

  std::string summary() const {
    std::string s = std::to_string(passed) + "/" + std::to_string(total) +
                    " pass (order " + std::to_string(order) + ")";
    if (!first_failure.empty()) s += "; first failure: " + first_failure;
    return s;
  }
};

// Runs the full structure-theorem battery over every brute-enumerated DFBQ:
// decomposition with exact reconstruction, breakdown/backup round-trips,
// and development equality over the block battery.
inline StructureCheckReport exhaustive_structure_check(int n,
                                                       uint64_t seed = 0) {
  detail::Stopwatch sw;
  StructureCheckReport rep;
  rep.order = n;
  enumerate_dfbq(n, DfbqEnumMode::brute, [&](const Dfbq& d) {
    const uint64_t idx = rep.total++;
    try {
      general_decompose(d);  // contracts exact reconstruction internally

      BreakdownResult bd = breakdown(d);
      Dfbq rebuilt = backup(bd.normal, bd.phi, bd.alpha);
      if (!(rebuilt == d)) throw error("backup(breakdown(d)) differs from d");
      BreakdownResult bd2 = breakdown(rebuilt);
      if (!(bd2.normal == bd.normal) || !(bd2.phi == bd.phi) ||
          !(bd2.alpha == bd.alpha))
        throw error("breakdown(backup(...)) differs from breakdown(d)");

      for (const BlockFamily& fam : dev_battery(n, seed ^ (idx * 0x9e3779b9ULL)))
        if (auto mismatch = dev_equality(d, fam))
          throw error("development mismatch on a block family");

      ++rep.passed;
    } catch (const std::exception& ex) {
      if (rep.first_failure.empty())
        rep.first_failure =
            "dfbq #" + std::to_string(idx) + ": " + ex.what();
    }
  });
  rep.elapsed_ms = sw.elapsed_ms();
  return rep;
}

struct SearchParams {
  int k = 2;
  int lambda = 1;
  int max_blocks = 1;
  enum class Dedup { none, by_development } dedup = Dedup::none;
};

struct FamilySearchResult {
  std::vector<BlockFamily> families;
  std::string infeasible_reason;  // nonempty when the counting argument fails
  int family_size = 0;            // forced by lambda*(n-1) = s*k*(k-1)
  bool feasible() const { return infeasible_reason.empty(); }
};

// Depth-first search for quasigroup difference families: blocks are chosen
// from all k-subsets in lexicographic order, a per-difference count vector
// prunes any branch exceeding lambda, and every emitted family passes
// verify_qdf (which adds the translate-distinctness check).
inline FamilySearchResult find_difference_families(const Dfbq& d,
                                                   const SearchParams& params) {
  if (params.k < 2) throw bad_parameters("k must be at least 2");
  if (params.lambda < 1) throw bad_parameters("lambda must be at least 1");
  if (params.max_blocks < 1) throw bad_parameters("max_blocks must be at least 1");
  const int n = d.order();
  FamilySearchResult res;

  if (params.k > n) {
    res.infeasible_reason = "block size k=" + std::to_string(params.k) +
                            " exceeds the order n=" + std::to_string(n);
    return res;
  }
  const long long pairs_needed =
      static_cast<long long>(params.lambda) * (n - 1);
  const long long per_block =
      static_cast<long long>(params.k) * (params.k - 1);
  if (pairs_needed == 0 || pairs_needed % per_block != 0) {
    res.infeasible_reason =
        "lambda*(n-1) = " + std::to_string(pairs_needed) +
        " is not a positive multiple of k*(k-1) = " + std::to_string(per_block);
    return res;
  }
  const long long s = pairs_needed / per_block;
  if (s > params.max_blocks) {
    res.infeasible_reason = "required family size " + std::to_string(s) +
                            " exceeds max_blocks=" +
                            std::to_string(params.max_blocks);
    return res;
  }
  res.family_size = static_cast<int>(s);

  // candidate blocks and their difference count vectors
  std::vector<Block> candidates;
  std::vector<std::vector<int>> cand_counts;
  {
    std::vector<int> pickv(params.k);
    auto emit = [&](auto&& self, int start, int depth) -> void {
      if (depth == params.k) {
        Block b(std::vector<int>(pickv.begin(), pickv.end()));
        std::vector<int> cnt(n, 0);
        for (int x : b.elems)
          for (int y : b.elems)
            if (x != y) ++cnt[d.sub.at(x, y)];
        candidates.push_back(std::move(b));
        cand_counts.push_back(std::move(cnt));
        return;
      }
      for (int v = start; v < n; ++v) {
        pickv[depth] = v;
        self(self, v + 1, depth + 1);
      }
    };
    emit(emit, 0, 0);
  }

  std::set<std::vector<Block>> seen_developments;
  std::vector<int> counts(n, 0);
  std::vector<int> chosen;
  auto dfs = [&](auto&& self, int start, int depth) -> void {
    if (depth == static_cast<int>(s)) {
      std::vector<Block> blocks;
      for (int idx : chosen) blocks.push_back(candidates[idx]);
      BlockFamily fam(n, std::move(blocks));
      auto check = verify_qdf(d, fam);
      if (!check.ok()) return;
      if (params.dedup == SearchParams::Dedup::by_development) {
        auto key = develop(fam, d.add).block_set();
        if (!seen_developments.insert(std::move(key)).second) return;
      }
      res.families.push_back(std::move(fam));
      return;
    }
    for (int idx = start; idx < static_cast<int>(candidates.size()); ++idx) {
      bool fits = true;
      for (int diff = 0; diff < n && fits; ++diff)
        if (counts[diff] + cand_counts[idx][diff] > params.lambda) fits = false;
      if (!fits) continue;
      for (int diff = 0; diff < n; ++diff) counts[diff] += cand_counts[idx][diff];
      chosen.push_back(idx);
      self(self, idx + 1, depth + 1);
      chosen.pop_back();
      for (int diff = 0; diff < n; ++diff) counts[diff] -= cand_counts[idx][diff];
    }
  };
  dfs(dfs, 0, 0);
  return res;
}

inline FamilySearchResult find_difference_families(const GroupPresentation& g,
                                                   const SearchParams& params) {
  auto check = verify_dfbq(g.table, subtraction_quasigroup(g.table));
  detail::contract(check.ok(), {}, "group subtraction pair is not a DFBQ");
  return find_difference_families(*check.dfbq, params);
}

}  // namespace qdf
