#pragma once

#include <array>
#include <optional>
#include <utility>

#include "qdf/cayley_table.hpp"
#include "qdf/errors.hpp"
#include "qdf/permutation.hpp"

namespace qdf {

// A difference family biquasigroup (N,+,-,o,e): two quasigroup operations
// on one carrier with translation-invariant differences,
//   sub(add(a,c), add(b,c)) = sub(a,b),
// a right additive identity o and constant diagonal difference e = sub(a,a).
// Instances are produced by verify_dfbq and by the constructions below, and
// are immutable once built.
struct Dfbq {
  CayleyTable add;
  CayleyTable sub;
  int o = 0;
  int e = 0;

  int order() const { return add.order(); }

  friend bool operator==(const Dfbq&, const Dfbq&) = default;
};

struct DfbqVerification {
  std::optional<Dfbq> dfbq;
  ViolationList violations;
  bool ok() const { return dfbq.has_value(); }
};

// Checks every DFBQ axiom, recording the lexicographically first witness per
// violated axiom. All axioms are checked; nothing short-circuits.
inline DfbqVerification verify_dfbq(const CayleyTable& add,
                                    const CayleyTable& sub) {
  if (add.order() != sub.order()) throw order_mismatch();
  const int n = add.order();
  DfbqVerification r;

  if (!is_latin(add))
    r.violations.push_back(make_violation(Violation::Kind::AddNotQuasigroup, {}));
  if (!is_latin(sub))
    r.violations.push_back(make_violation(Violation::Kind::SubNotQuasigroup, {}));

  bool invariant = true;
  for (int a = 0; a < n && invariant; ++a)
    for (int b = 0; b < n && invariant; ++b)
      for (int c = 0; c < n && invariant; ++c)
        if (sub.at(add.at(a, c), add.at(b, c)) != sub.at(a, b)) {
          invariant = false;
          r.violations.push_back(make_violation(
              Violation::Kind::TranslationInvariance, {a, b, c}));
        }

  std::optional<int> o;
  for (int cand = 0; cand < n && !o; ++cand) {
    bool ok = true;
    for (int a = 0; a < n && ok; ++a)
      if (add.at(a, cand) != a) ok = false;
    if (ok) o = cand;
  }
  if (!o)
    r.violations.push_back(make_violation(Violation::Kind::NoRightIdentity, {}));

  const int e = sub.at(0, 0);
  for (int b = 1; b < n; ++b)
    if (sub.at(b, b) != e) {
      r.violations.push_back(
          make_violation(Violation::Kind::NonConstantDiagonal, {0, b}));
      break;
    }

  if (r.violations.empty()) r.dfbq = Dfbq{add, sub, *o, e};
  return r;
}

// A DFBQ in canonical position: o = e and sub(a,e) = a for all a.
struct NormalDfbq {
  Dfbq d;

  int order() const { return d.order(); }
  int e() const { return d.e; }
  const CayleyTable& oplus() const { return d.add; }
  const CayleyTable& ominus() const { return d.sub; }

  static bool is_normal(const Dfbq& d) {
    if (d.o != d.e) return false;
    for (int a = 0; a < d.order(); ++a)
      if (d.sub.at(a, d.e) != a) return false;
    return true;
  }

  static NormalDfbq from_dfbq(Dfbq d) {
    if (!is_normal(d))
      throw bad_parameters("DFBQ is not in normal form (o = e, a - e = a)");
    return NormalDfbq{std::move(d)};
  }

  friend bool operator==(const NormalDfbq&, const NormalDfbq&) = default;
};

namespace detail {

// Internal theorem-contract assertion. These fire only if one of the proved
// propositions is wrong for the given input, so they are hard errors, never
// debug-only checks.
inline void contract(bool ok, std::initializer_list<int> witness,
                     const char* what) {
  if (!ok)
    throw op_error(make_violation(Violation::Kind::StructureTheoremViolation,
                                  witness, what));
}

// First pair (a,b) with ominus(phi a, phi b) != ominus(a,b), if any.
inline std::optional<std::pair<int, int>> difference_preservation_failure(
    const CayleyTable& ominus, const Permutation& phi) {
  const int n = ominus.order();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (ominus.at(phi(a), phi(b)) != ominus.at(a, b)) return {{a, b}};
  return std::nullopt;
}

}  // namespace detail

struct BreakdownResult {
  NormalDfbq normal;
  Permutation phi;
  Permutation alpha;
};

// Normalization: with e + ebar = o, phi: x -> x + ebar and alpha: x -> x - e,
//   a (+) b = phi^-1(phi a + phi b),   a (-) b = alpha^-1(a - b)
// yield a DFBQ (N,(+),(-),e,e) with a (-) e = a.
inline BreakdownResult breakdown(const Dfbq& d) {
  const int n = d.order();
  const int ebar = divide(d.add, d.e, d.o, Side::right);

  std::vector<int> phi_im(n), alpha_im(n);
  for (int x = 0; x < n; ++x) {
    phi_im[x] = d.add.at(x, ebar);
    alpha_im[x] = d.sub.at(x, d.e);
  }
  const Permutation phi{std::move(phi_im)};
  const Permutation alpha{std::move(alpha_im)};
  const Permutation phi_inv = phi.inverse();
  const Permutation alpha_inv = alpha.inverse();

  CayleyTable oplus = CayleyTable::from_function(n, [&](int a, int b) {
    return phi_inv(d.add.at(phi(a), phi(b)));
  });
  CayleyTable ominus = CayleyTable::from_function(
      n, [&](int a, int b) { return alpha_inv(d.sub.at(a, b)); });

  auto check = verify_dfbq(oplus, ominus);
  detail::contract(check.ok(), {}, "breakdown result fails DFBQ axioms");
  detail::contract(check.dfbq->o == d.e && check.dfbq->e == d.e, {},
                   "breakdown constants differ from e");
  NormalDfbq nf = NormalDfbq::from_dfbq(*std::move(check.dfbq));
  detail::contract(!detail::difference_preservation_failure(nf.ominus(), phi),
                   {}, "phi does not preserve the normalized difference");
  return {std::move(nf), phi, alpha};
}

// Inverse of breakdown: rebuilds (N,+,-,o,e) from a normal DFBQ and the
// transported maps. phi must preserve (-) and alpha must fix e.
inline Dfbq backup(const NormalDfbq& nf, const Permutation& phi,
                   const Permutation& alpha) {
  const int n = nf.order();
  if (phi.order() != n || alpha.order() != n) throw order_mismatch();
  if (auto bad = detail::difference_preservation_failure(nf.ominus(), phi))
    throw op_error(make_violation(Violation::Kind::PhiNotDifferencePreserving,
                                  {bad->first, bad->second}));
  if (alpha(nf.e()) != nf.e())
    throw op_error(make_violation(Violation::Kind::AlphaMovesE, {nf.e()}));

  const Permutation phi_inv = phi.inverse();
  CayleyTable add = CayleyTable::from_function(n, [&](int a, int b) {
    return phi(nf.oplus().at(phi_inv(a), phi_inv(b)));
  });
  CayleyTable sub = CayleyTable::from_function(n, [&](int a, int b) {
    return alpha(nf.ominus().at(phi_inv(a), phi_inv(b)));
  });

  auto check = verify_dfbq(add, sub);
  detail::contract(check.ok(), {}, "backup result fails DFBQ axioms");
  const Dfbq& d = *check.dfbq;
  detail::contract(d.o == phi(nf.e()) && d.e == nf.e(), {},
                   "backup constants disagree");
  // the proposition pins the maps down: alpha = (x -> x-e), phi = (x -> x+ebar)
  const int ebar = divide(d.add, d.e, d.o, Side::right);
  for (int x = 0; x < n; ++x) {
    detail::contract(d.sub.at(x, d.e) == alpha(x), {x},
                     "alpha is not subtraction by e");
    detail::contract(d.add.at(x, ebar) == phi(x), {x},
                     "phi is not addition of ebar");
  }
  return d;
}

// Ward identity check: (a o c) o (b o c) = a o b over all triples.
// Returns the first violating triple in lexicographic order, if any.
inline std::optional<std::array<int, 3>> is_ward(const CayleyTable& t) {
  if (!is_latin(t)) throw not_a_quasigroup();
  const int n = t.order();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (t.at(t.at(a, c), t.at(b, c)) != t.at(a, b))
          return {{a, b, c}};
  return std::nullopt;
}

// A group given together with its identity and inverse map.
struct GroupPresentation {
  CayleyTable table;
  int identity = 0;
  Permutation inv;

  int order() const { return table.order(); }
  int op(int a, int b) const { return table.at(a, b); }

  static GroupPresentation from_table(const CayleyTable& t) {
    auto cls = classify(t);
    if (cls.kind != AlgebraClass::Kind::Group) throw not_a_group();
    return {t, *cls.identity, group_inverse_map(t, *cls.identity)};
  }

  friend bool operator==(const GroupPresentation&, const GroupPresentation&) = default;
};

// Every Ward quasigroup is a group in disguise: with e the constant diagonal,
// bar(x) = w(e,x) and x*y = w(x, bar y) define a group with x o y = x * bar y.
inline GroupPresentation ward_to_group(const CayleyTable& w) {
  if (auto witness = is_ward(w))
    throw op_error(make_violation(
        Violation::Kind::NotWard,
        {(*witness)[0], (*witness)[1], (*witness)[2]}));
  const int n = w.order();
  const int e = w.at(0, 0);
  for (int x = 1; x < n; ++x)
    if (w.at(x, x) != e)
      throw op_error(
          make_violation(Violation::Kind::NonConstantDiagonal, {0, x}));

  std::vector<int> bar(n);
  for (int x = 0; x < n; ++x) bar[x] = w.at(e, x);
  const Permutation inv{std::move(bar)};
  CayleyTable g = CayleyTable::from_function(
      n, [&](int x, int y) { return w.at(x, inv(y)); });

  auto cls = classify(g);
  detail::contract(cls.kind == AlgebraClass::Kind::Group && *cls.identity == e,
                   {}, "derived Ward operation is not a group with identity e");
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      detail::contract(w.at(x, y) == g.at(x, inv(y)), {x, y},
                       "x o y != x * bar(y)");
  return {std::move(g), e, inv};
}

struct NormalToGroupResult {
  GroupPresentation group;
  Permutation I;  // a + I(a) = e
};

// A normal DFBQ is isotopic to a group: with I(a) the solution of a+I(a)=e,
// the difference satisfies a-b = a+I(b), is Ward, and its derived group *
// reconstructs the addition as a+b = a * inv(I^-1(b)).
inline NormalToGroupResult normal_to_group(const NormalDfbq& nf) {
  const int n = nf.order();
  const int e = nf.e();

  std::vector<int> I_im(n);
  for (int a = 0; a < n; ++a) I_im[a] = divide(nf.oplus(), a, e, Side::right);
  const Permutation I{std::move(I_im)};

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      detail::contract(nf.ominus().at(a, b) == nf.oplus().at(a, I(b)), {a, b},
                       "a - b != a + I(b)");

  if (is_ward(nf.ominus()))
    throw op_error(make_violation(Violation::Kind::WardViolation, {},
                                  "normalized difference is not Ward"));
  GroupPresentation g = ward_to_group(nf.ominus());
  detail::contract(g.identity == e, {}, "derived group identity is not e");

  const Permutation I_inv = I.inverse();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      detail::contract(nf.oplus().at(a, b) == g.op(a, g.inv(I_inv(b))), {a, b},
                       "a + b != a * (I^-1 b)^-1");
  return {std::move(g), I};
}

// Converse direction: any permutation I fixing the group identity gives a
// normal DFBQ via a+b = a*(I b)^-1, a-b = a*b^-1.
inline NormalDfbq group_to_normal(const GroupPresentation& g,
                                  const Permutation& I) {
  const int n = g.order();
  if (I.order() != n) throw order_mismatch();
  if (I(g.identity) != g.identity)
    throw op_error(
        make_violation(Violation::Kind::IDoesNotFixIdentity, {g.identity}));

  CayleyTable add = CayleyTable::from_function(
      n, [&](int a, int b) { return g.op(a, g.inv(I(b))); });
  CayleyTable sub = CayleyTable::from_function(
      n, [&](int a, int b) { return g.op(a, g.inv(b)); });
  auto check = verify_dfbq(add, sub);
  detail::contract(check.ok(), {}, "group_to_normal result fails DFBQ axioms");
  detail::contract(check.dfbq->o == g.identity && check.dfbq->e == g.identity,
                   {}, "group_to_normal constants are not the group identity");
  return NormalDfbq::from_dfbq(*std::move(check.dfbq));
}

// Every difference-preserving permutation of a normal DFBQ is a right group
// shift: phi(a) = a * k with k = phi(identity). Returns k.
inline int phi_form(const NormalDfbq& nf, const Permutation& phi) {
  if (phi.order() != nf.order()) throw order_mismatch();
  if (auto bad = detail::difference_preservation_failure(nf.ominus(), phi))
    throw op_error(make_violation(Violation::Kind::PhiNotDifferencePreserving,
                                  {bad->first, bad->second}));
  auto derived = normal_to_group(nf);
  const int k = phi(derived.group.identity);
  for (int a = 0; a < nf.order(); ++a)
    detail::contract(phi(a) == derived.group.op(a, k), {a},
                     "phi(a) != a * phi(1)");
  return k;
}

// Companion constructor: a -> a*k preserves the difference for every k.
inline Permutation phi_from_shift(const NormalDfbq& nf, int k) {
  auto derived = normal_to_group(nf);
  std::vector<int> im(nf.order());
  for (int a = 0; a < nf.order(); ++a) im[a] = derived.group.op(a, k);
  return Permutation(std::move(im));
}

// (group, alpha, beta) presentation of a DFBQ. alpha fixes the group
// identity; general_construct(group, alpha, beta) rebuilds the source
// tables entry-for-entry.
struct Decomposition {
  GroupPresentation group;
  Permutation alpha;
  Permutation beta;
};

// The explicit form of every DFBQ: a+b = a * beta(b), a-b = alpha(a * b^-1),
// o = beta^-1(identity), e = identity.
inline Dfbq general_construct(const GroupPresentation& g,
                              const Permutation& alpha,
                              const Permutation& beta) {
  const int n = g.order();
  if (alpha.order() != n || beta.order() != n) throw order_mismatch();
  if (alpha(g.identity) != g.identity)
    throw op_error(
        make_violation(Violation::Kind::AlphaMovesIdentity, {g.identity}));

  CayleyTable add = CayleyTable::from_function(
      n, [&](int a, int b) { return g.op(a, beta(b)); });
  CayleyTable sub = CayleyTable::from_function(
      n, [&](int a, int b) { return alpha(g.op(a, g.inv(b))); });
  auto check = verify_dfbq(add, sub);
  detail::contract(check.ok(), {}, "general_construct result fails DFBQ axioms");
  detail::contract(check.dfbq->o == beta.inverse()(g.identity) &&
                       check.dfbq->e == g.identity,
                   {}, "general_construct constants disagree");
  return *std::move(check.dfbq);
}

// Constructive reverse direction of the structure theorem, with the canonical
// choice alpha = (x -> sub(x,e)), beta = (b -> add(e,b)), group identity = e.
// Every assertion is a hard check: a failure means the theorem broke.
inline Decomposition general_decompose(const Dfbq& d) {
  const int n = d.order();

  std::vector<int> alpha_im(n);
  for (int x = 0; x < n; ++x) alpha_im[x] = d.sub.at(x, d.e);
  const Permutation alpha{std::move(alpha_im)};
  const Permutation alpha_inv = alpha.inverse();

  CayleyTable ominus = CayleyTable::from_function(
      n, [&](int a, int b) { return alpha_inv(d.sub.at(a, b)); });
  detail::contract(!is_ward(ominus).has_value(), {},
                   "normalized difference is not Ward");

  GroupPresentation group = ward_to_group(ominus);
  detail::contract(group.identity == d.e, {}, "derived identity is not e");
  detail::contract(alpha(group.identity) == group.identity, {},
                   "alpha moves the identity");

  std::vector<int> beta_im(n);
  for (int b = 0; b < n; ++b) beta_im[b] = d.add.at(d.e, b);
  const Permutation beta{std::move(beta_im)};

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      detail::contract(d.add.at(a, b) == group.op(a, beta(b)), {a, b},
                       "a + b != a * beta(b)");
      detail::contract(d.sub.at(a, b) == alpha(group.op(a, group.inv(b))),
                       {a, b}, "a - b != alpha(a * b^-1)");
    }

  Decomposition dec{std::move(group), alpha, beta};
  detail::contract(general_construct(dec.group, dec.alpha, dec.beta) == d, {},
                   "reconstruction is not exact");
  return dec;
}

}  // namespace qdf
