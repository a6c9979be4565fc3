#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace qdf {

// Base class for everything thrown by this library.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct not_a_quasigroup : error {
  not_a_quasigroup() : error("table is not a quasigroup") {}
};

struct not_a_group : error {
  not_a_group() : error("table is not a group") {}
};

struct order_mismatch : error {
  order_mismatch() : error("operands have different orders") {}
};

struct bad_parameters : error {
  using error::error;
};

struct order_too_large : error {
  explicit order_too_large(int n, int cap)
      : error("order " + std::to_string(n) + " exceeds the enumeration cap " +
              std::to_string(cap)) {}
};

struct parse_error : error {
  int line;
  explicit parse_error(int line_, const std::string& reason)
      : error("parse error at line " + std::to_string(line_) + ": " + reason),
        line(line_) {}
};

struct range_error : parse_error {
  int entry;
  range_error(int line_, int entry_)
      : parse_error(line_, "entry " + std::to_string(entry_) +
                               " is out of range"),
        entry(entry_) {}
};

// One violated axiom / hypothesis, with the lexicographically first witness.
// Verification routines return lists of these; constructive operations whose
// preconditions fail throw them wrapped in op_error.
struct Violation {
  enum class Kind {
    // DFBQ axioms
    AddNotQuasigroup,
    SubNotQuasigroup,
    TranslationInvariance,   // (a,b,c): sub(add(a,c),add(b,c)) != sub(a,b)
    NonConstantDiagonal,     // (a,b): sub(a,a) != sub(b,b)
    NoRightIdentity,
    // normalization / structure maps
    PhiNotDifferencePreserving,  // (a,b)
    AlphaMovesE,
    AlphaMovesIdentity,
    IDoesNotFixIdentity,
    NotWard,                 // (a,b,c): Ward identity fails
    WardViolation,           // derived difference operation is not Ward
    StructureTheoremViolation,
    // block families and designs
    UnequalBlockSizes,       // (i,j): blocks i and j differ in size
    BlockSizeTooSmall,       // (k): k < 2, lambda undefined
    NonConstantLambda,       // (d1,d2): |Delta(d1)| != |Delta(d2)|
    TranslateCollision,      // (B,b,C,c): B+b == C+c as sets
    NonConstantPairCount,    // (a1,b1,a2,b2): pair counts differ
    // Theorem-2 hypothesis checks
    NotSharplyTransitive,    // (a,b): zero or several translations send a to b
    DifferenceNotSolvable,   // (a): row a of sub is not a permutation
    TranslationVariance,     // (t,a,b): sub(t a, t b) != sub(a,b)
    MissingIdentityTranslation,
  };

  Kind kind;
  std::array<int, 4> witness{};
  int arity = 0;  // how many witness slots are meaningful
  std::string note;

  std::string describe() const {
    std::string s = kind_name(kind);
    if (arity > 0) {
      s += " (";
      for (int i = 0; i < arity; ++i) {
        if (i) s += ",";
        s += std::to_string(witness[i]);
      }
      s += ")";
    }
    if (!note.empty()) s += ": " + note;
    return s;
  }

  static const char* kind_name(Kind k) {
    switch (k) {
      case Kind::AddNotQuasigroup: return "AddNotQuasigroup";
      case Kind::SubNotQuasigroup: return "SubNotQuasigroup";
      case Kind::TranslationInvariance: return "TranslationInvariance";
      case Kind::NonConstantDiagonal: return "NonConstantDiagonal";
      case Kind::NoRightIdentity: return "NoRightIdentity";
      case Kind::PhiNotDifferencePreserving: return "PhiNotDifferencePreserving";
      case Kind::AlphaMovesE: return "AlphaMovesE";
      case Kind::AlphaMovesIdentity: return "AlphaMovesIdentity";
      case Kind::IDoesNotFixIdentity: return "IDoesNotFixIdentity";
      case Kind::NotWard: return "NotWard";
      case Kind::WardViolation: return "WardViolation";
      case Kind::StructureTheoremViolation: return "StructureTheoremViolation";
      case Kind::UnequalBlockSizes: return "UnequalBlockSizes";
      case Kind::BlockSizeTooSmall: return "BlockSizeTooSmall";
      case Kind::NonConstantLambda: return "NonConstantLambda";
      case Kind::TranslateCollision: return "TranslateCollision";
      case Kind::NonConstantPairCount: return "NonConstantPairCount";
      case Kind::NotSharplyTransitive: return "NotSharplyTransitive";
      case Kind::DifferenceNotSolvable: return "DifferenceNotSolvable";
      case Kind::TranslationVariance: return "TranslationVariance";
      case Kind::MissingIdentityTranslation: return "MissingIdentityTranslation";
    }
    return "Unknown";
  }
};

using ViolationList = std::vector<Violation>;

inline Violation make_violation(Violation::Kind k,
                                std::initializer_list<int> w,
                                std::string note = {}) {
  Violation v;
  v.kind = k;
  v.arity = 0;
  for (int x : w) {
    if (v.arity == 4) break;
    v.witness[v.arity++] = x;
  }
  v.note = std::move(note);
  return v;
}

// Thrown when a constructive operation is handed input violating its
// precondition (the verification routines return ViolationList instead).
struct op_error : error {
  Violation violation;
  explicit op_error(Violation v) : error(v.describe()), violation(std::move(v)) {}
};

}  // namespace qdf
