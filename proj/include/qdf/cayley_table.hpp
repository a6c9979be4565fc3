#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "qdf/errors.hpp"
#include "qdf/permutation.hpp"

namespace qdf {

// A finite binary operation on {0..n-1} as an n x n table.
// Row index is the left operand, column index the right operand;
// that convention is fixed project-wide.
class CayleyTable {
 public:
  CayleyTable() = default;

  CayleyTable(int order, std::vector<int> cells)
      : n_(order), cells_(std::move(cells)) {
    if (n_ <= 0) throw bad_parameters("table order must be positive");
    if (static_cast<int>(cells_.size()) != n_ * n_)
      throw bad_parameters("table must be square with n*n entries");
    for (int x : cells_)
      if (x < 0 || x >= n_) throw bad_parameters("table entry out of range");
  }

  template <class Fn>
  static CayleyTable from_function(int order, Fn&& op) {
    std::vector<int> cells(static_cast<size_t>(order) * order);
    for (int a = 0; a < order; ++a)
      for (int b = 0; b < order; ++b) cells[a * order + b] = op(a, b);
    return CayleyTable(order, std::move(cells));
  }

  int order() const { return n_; }
  int at(int a, int b) const { return cells_[a * n_ + b]; }
  const std::vector<int>& cells() const { return cells_; }

  friend bool operator==(const CayleyTable& a, const CayleyTable& b) = default;

 private:
  int n_ = 0;
  std::vector<int> cells_;
};

// Addition table of Z_n, the workhorse example carrier.
inline CayleyTable cyclic_group(int n) {
  return CayleyTable::from_function(n, [n](int a, int b) { return (a + b) % n; });
}

inline bool is_latin(const CayleyTable& t) {
  const int n = t.order();
  std::vector<char> seen(n);
  for (int a = 0; a < n; ++a) {
    std::fill(seen.begin(), seen.end(), 0);
    for (int b = 0; b < n; ++b) {
      int v = t.at(a, b);
      if (seen[v]) return false;
      seen[v] = 1;
    }
  }
  for (int b = 0; b < n; ++b) {
    std::fill(seen.begin(), seen.end(), 0);
    for (int a = 0; a < n; ++a) {
      int v = t.at(a, b);
      if (seen[v]) return false;
      seen[v] = 1;
    }
  }
  return true;
}

// Full n^3 scan; orders here are small enough that nothing smarter pays off.
inline bool is_associative(const CayleyTable& t) {
  const int n = t.order();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const int ab = t.at(a, b);
      for (int c = 0; c < n; ++c)
        if (t.at(ab, c) != t.at(a, t.at(b, c))) return false;
    }
  return true;
}

inline std::optional<int> two_sided_identity(const CayleyTable& t) {
  const int n = t.order();
  for (int e = 0; e < n; ++e) {
    bool ok = true;
    for (int x = 0; x < n && ok; ++x)
      if (t.at(e, x) != x || t.at(x, e) != x) ok = false;
    if (ok) return e;
  }
  return std::nullopt;
}

struct AlgebraClass {
  enum class Kind { Magma, Quasigroup, Loop, Group };
  Kind kind = Kind::Magma;
  std::optional<int> identity;  // present exactly for Loop and Group

  bool at_least_quasigroup() const { return kind != Kind::Magma; }

  const char* name() const {
    switch (kind) {
      case Kind::Magma: return "magma";
      case Kind::Quasigroup: return "quasigroup";
      case Kind::Loop: return "loop";
      case Kind::Group: return "group";
    }
    return "?";
  }
};

// Magma / quasigroup / loop / group ladder. A quasigroup is a Latin table;
// a loop additionally has a two-sided identity; a group is additionally
// associative.
inline AlgebraClass classify(const CayleyTable& t) {
  AlgebraClass c;
  if (!is_latin(t)) return c;
  c.kind = AlgebraClass::Kind::Quasigroup;
  auto e = two_sided_identity(t);
  if (!e) return c;
  c.kind = AlgebraClass::Kind::Loop;
  c.identity = e;
  if (is_associative(t)) c.kind = AlgebraClass::Kind::Group;
  return c;
}

enum class Side { left, right };

// Unique division in a quasigroup: right solves a*x = b, left solves y*a = b.
inline int divide(const CayleyTable& t, int a, int b, Side side) {
  if (!is_latin(t)) throw not_a_quasigroup();
  const int n = t.order();
  if (side == Side::right) {
    for (int x = 0; x < n; ++x)
      if (t.at(a, x) == b) return x;
  } else {
    for (int y = 0; y < n; ++y)
      if (t.at(y, a) == b) return y;
  }
  throw not_a_quasigroup();  // unreachable for Latin tables
}

// Isotopy applied to a table: the result T' satisfies
// alpha(T(a,b)) = T'(beta(a), gamma(b)), i.e.
// T'(x,y) = alpha(T(beta^-1 x, gamma^-1 y)).
inline CayleyTable apply_isotopy(const CayleyTable& t, const Permutation& alpha,
                                 const Permutation& beta,
                                 const Permutation& gamma) {
  const int n = t.order();
  if (alpha.order() != n || beta.order() != n || gamma.order() != n)
    throw order_mismatch();
  const Permutation binv = beta.inverse();
  const Permutation ginv = gamma.inverse();
  return CayleyTable::from_function(
      n, [&](int x, int y) { return alpha(t.at(binv(x), ginv(y))); });
}

inline Permutation group_inverse_map(const CayleyTable& g, int identity) {
  const int n = g.order();
  std::vector<int> inv(n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b)
      if (g.at(a, b) == identity) {
        inv[a] = b;
        break;
      }
  }
  return Permutation(std::move(inv));
}

// S(a,b) = a * b^-1. For any group this is a quasigroup satisfying the
// Ward identity (a*c^-1)*(b*c^-1)^-1 = a*b^-1.
inline CayleyTable subtraction_quasigroup(const CayleyTable& g) {
  auto cls = classify(g);
  if (cls.kind != AlgebraClass::Kind::Group) throw not_a_group();
  const Permutation inv = group_inverse_map(g, *cls.identity);
  return CayleyTable::from_function(
      g.order(), [&](int a, int b) { return g.at(a, inv(b)); });
}

inline bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// a*b = k*a + (1-k)*b over Z_p. Quasigroup for every k outside {0,1}.
inline CayleyTable field_twist(int p, int k) {
  if (!is_prime(p)) throw bad_parameters("p must be prime");
  k = ((k % p) + p) % p;
  if (k == 0 || k == 1) throw bad_parameters("k must differ from 0 and 1 mod p");
  const int ik = ((1 - k) % p + p) % p;
  return CayleyTable::from_function(
      p, [&](int a, int b) { return (k * a + ik * b) % p; });
}

// Decides isotopy to a group via one principal loop isotope.
// With R0(x) = T(x,0) and L0(y) = T(0,y), the operation
// x o y = T(R0^-1 x, L0^-1 y) is a loop with identity T(0,0); a loop
// isotopic to a group is isomorphic to it, so this single isotope is
// associative exactly when T is isotopic to a group.
inline std::optional<CayleyTable> isotopic_to_group(const CayleyTable& t) {
  if (!is_latin(t)) throw not_a_quasigroup();
  const int n = t.order();
  std::vector<int> r0(n), l0(n);
  for (int x = 0; x < n; ++x) r0[x] = t.at(x, 0);
  for (int y = 0; y < n; ++y) l0[y] = t.at(0, y);
  const Permutation rinv = Permutation(std::move(r0)).inverse();
  const Permutation linv = Permutation(std::move(l0)).inverse();
  CayleyTable isotope = CayleyTable::from_function(
      n, [&](int x, int y) { return t.at(rinv(x), linv(y)); });
  if (!is_associative(isotope)) return std::nullopt;
  return isotope;
}

}  // namespace qdf
