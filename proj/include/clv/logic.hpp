#pragma once

// Abstract syntax of the coherent fragment:
//
//   forall xs. A1 & ... & An  =>  exists ys. (B1 | ... | Bm)
//
// with atoms over variables and constants only. An empty premise list is
// "true", an empty conclusion list is "false".

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace clv {

inline constexpr std::string_view kEquality = "=";
inline constexpr std::string_view kDisequality = "!=";
inline constexpr std::string_view kDefaultSort = "point";
inline constexpr std::string_view kEqualityDecidabilityName = "ax_g1";

struct Sort {
  std::string name;
  bool operator==(const Sort&) const = default;
};

struct PredicateSymbol {
  std::string name;
  std::vector<std::string> argSorts;
  bool isEquality = false;
  std::optional<std::string> negatedPartner;

  std::size_t arity() const { return argSorts.size(); }
  bool operator==(const PredicateSymbol&) const = default;
};

struct Constant {
  std::string name;
  std::string sort{kDefaultSort};
  bool operator==(const Constant&) const = default;
};

struct Variable {
  std::string name;
  std::string sort{kDefaultSort};
  bool operator==(const Variable&) const = default;
};

struct Term {
  enum class Kind { Variable, Constant };
  Kind kind = Kind::Constant;
  std::string name;

  static Term variable(std::string n) { return {Kind::Variable, std::move(n)}; }
  static Term constant(std::string n) { return {Kind::Constant, std::move(n)}; }
  bool isVariable() const { return kind == Kind::Variable; }
  bool operator==(const Term&) const = default;
  auto operator<=>(const Term&) const = default;
};

struct Atom {
  std::string predicate;
  std::vector<Term> args;
  /// Set by the frontend for `~p(..)` until the negation encoding removes it.
  bool negated = false;

  static Atom ground(std::string predicate, const std::vector<std::string>& constants);
  bool isGround() const;
  bool isEquality() const { return predicate == kEquality; }
  bool isDisequality() const { return predicate == kDisequality; }
  bool operator==(const Atom&) const = default;
  auto operator<=>(const Atom&) const = default;
};

struct Disjunct {
  std::vector<Variable> existentialVars;
  std::vector<Atom> conjuncts;
  bool operator==(const Disjunct&) const = default;
};

struct CoherentFormula {
  std::vector<Variable> universalVars;
  std::vector<Atom> premises;
  std::vector<Disjunct> conclusion;

  bool isBottom() const { return conclusion.empty(); }
  bool operator==(const CoherentFormula&) const = default;
};

enum class Role { Axiom, Theorem, Conjecture, Definition };

std::string_view toString(Role role);
std::optional<Role> roleFromString(std::string_view text);

struct NamedFormula {
  std::string name;
  Role role = Role::Axiom;
  CoherentFormula formula;
  bool operator==(const NamedFormula&) const = default;
};

struct Signature {
  std::vector<Sort> sorts;
  std::vector<PredicateSymbol> predicates;
  std::vector<Constant> constants;

  const PredicateSymbol* findPredicate(std::string_view name) const;
  const Constant* findConstant(std::string_view name) const;
  bool hasSort(std::string_view name) const;
  bool operator==(const Signature&) const = default;
};

struct Theory {
  std::string name;
  Signature signature;
  std::vector<NamedFormula> axioms;

  const NamedFormula* findAxiom(std::string_view name) const;
  bool operator==(const Theory&) const = default;
};

/// Variable-to-constant assignment, kept in insertion order.
using Substitution = std::vector<std::pair<Variable, Constant>>;

/// Variables occurring outside any binder, in order of first occurrence.
std::vector<std::string> freeVars(const Atom& atom);
std::vector<std::string> freeVars(const Disjunct& disjunct);
std::vector<std::string> freeVars(const CoherentFormula& formula);

/// Ground instance of `atom`. Throws UnboundVariable or SortMismatch.
Atom substitute(const Atom& atom, const Substitution& binding);
std::vector<Atom> substitute(std::span<const Atom> atoms, const Substitution& binding);

/// Replaces negated atoms by partner predicates and adds the incompatibility
/// and totality axioms for every predicate that occurs negated. Negated
/// equality becomes the built-in disequality, whose totality axiom is ax_g1.
/// Formulas in `extra` (typically conjectures) are rewritten in place and
/// contribute negated predicates too.
Theory encodeNegation(Theory theory, std::span<NamedFormula> extra = {});

/// Adds `forall X Y. X = Y | X != Y` (named ax_g1 for the first sort) for every
/// sort, unless already present.
void addEqualityDecidability(Theory& theory);

/// The name of the predicate standing for the negation of `predicate`.
std::string negationPartnerName(const Signature& sig, std::string_view predicate);

/// Checks the structural invariants of a formula against a signature; throws
/// WellFormednessError.
void checkWellFormed(const CoherentFormula& formula, const Signature& sig);
void checkWellFormed(const Theory& theory);

/// Fresh constants standing for the universal variables of a conjecture.
/// Each variable keeps its own name unless that clashes with a constant of the
/// theory, in which case a numeric suffix is appended.
Substitution conjectureConstants(const Theory& theory, const CoherentFormula& conjecture);

/// True for premise-free axioms of shape `R(xs) | Rbar(xs)` (including ax_g1).
bool isDecidabilityAxiom(const NamedFormula& axiom, const Signature& sig);

/// Conventional TPTP-like text, e.g. `![X]: (p(X) => ?[Y]: q(X,Y))`.
std::string toString(const Atom& atom);
std::string toString(const CoherentFormula& formula);

}  // namespace clv
