#pragma once

#include <vector>

#include "qdf/qdf.hpp"

namespace testutil {

inline qdf::CayleyTable zn_add(int n) { return qdf::cyclic_group(n); }

inline qdf::CayleyTable zn_sub(int n) {
  return qdf::CayleyTable::from_function(
      n, [n](int a, int b) { return ((a - b) % n + n) % n; });
}

// a + b + 1 mod 3: a right identity at 2, not normal
inline qdf::CayleyTable shifted_z3_add() {
  return qdf::CayleyTable::from_function(
      3, [](int a, int b) { return (a + b + 1) % 3; });
}

// Klein four-group as XOR on {0..3}
inline qdf::CayleyTable v4() {
  return qdf::CayleyTable::from_function(4, [](int a, int b) { return a ^ b; });
}

inline qdf::Permutation negation(int n) {
  std::vector<int> im(n);
  for (int i = 0; i < n; ++i) im[i] = (n - i) % n;
  return qdf::Permutation(std::move(im));
}

inline qdf::Dfbq dfbq_of(const qdf::CayleyTable& add,
                         const qdf::CayleyTable& sub) {
  auto check = qdf::verify_dfbq(add, sub);
  if (!check.ok()) throw qdf::error("fixture is not a DFBQ");
  return *check.dfbq;
}

inline qdf::Dfbq group_dfbq(int n) {
  return dfbq_of(zn_add(n), zn_sub(n));
}

inline qdf::BlockFamily family(int n, std::vector<std::vector<int>> blocks) {
  std::vector<qdf::Block> bs;
  for (auto& b : blocks) bs.emplace_back(std::move(b));
  return qdf::BlockFamily(n, std::move(bs));
}

// An order-5 quasigroup that is not isotopic to any group: none of its 25
// principal isotopes is associative.
inline qdf::CayleyTable nongroup_quasigroup5() {
  return qdf::CayleyTable(5, {0, 1, 2, 3, 4,  //
                              1, 0, 3, 4, 2,  //
                              2, 3, 4, 0, 1,  //
                              3, 4, 1, 2, 0,  //
                              4, 2, 0, 1, 3});
}

}  // namespace testutil
