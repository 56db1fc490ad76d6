#pragma once

// Proof objects of the four-rule calculus
//
//   proof ::= mp* (cs(proof, proof, ...) | as | efq)
//
// and the independent checker that replays them.

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "clv/logic.hpp"

namespace clv {

/// Variable name -> constant name, in the variable order of the formula.
using NameBinding = std::vector<std::pair<std::string, std::string>>;

/// A ground disjunction of ground conjunctions. Empty means falsum.
using GroundDisjunction = std::vector<std::vector<Atom>>;

/// Instantiation of an axiom plus modus ponens, introducing fresh witnesses
/// for the existential variables of the conclusion.
struct ModusPonensStep {
  std::string axiom;
  NameBinding binding;            // universal variables of the axiom
  std::vector<Atom> premises;     // ground premise instances, axiom order
  std::vector<std::string> witnesses;  // existential variables, disjunct order
  GroundDisjunction derived;
  bool operator==(const ModusPonensStep&) const = default;
};

/// `derived` follows from `source` by replacing equals with equals using
/// `equations` (symmetry of = and != included). Equality axioms stay implicit.
struct EqualitySubstitutionStep {
  Atom source;
  std::vector<Atom> equations;
  Atom derived;
  bool operator==(const EqualitySubstitutionStep&) const = default;
};

struct ProofStep {
  std::variant<ModusPonensStep, EqualitySubstitutionStep> kind;
  int indentation = 0;

  bool isModusPonens() const { return std::holds_alternative<ModusPonensStep>(kind); }
  bool operator==(const ProofStep&) const = default;
};

struct ProofTree;

struct CaseSplit {
  GroundDisjunction disjunction;
  std::vector<ProofTree> branches;
  bool operator==(const CaseSplit&) const;
};

/// Closing by assumption: `facts` instantiate goal disjunct `disjunct` under
/// the conjecture constants and `witnessBinding`.
struct FromClosing {
  std::vector<Atom> facts;
  int disjunct = 0;
  NameBinding witnessBinding;
  bool operator==(const FromClosing&) const = default;
};

/// Ex falso. With `axiom` set, `facts` are the premises of that axiom (whose
/// conclusion is falsum) under `binding`; otherwise the facts contain an
/// atom and its negation (possibly modulo the listed equations), such as
/// `a != b` together with equations connecting a and b.
struct EfqClosing {
  std::vector<Atom> facts;
  std::string axiom;
  NameBinding binding;
  bool operator==(const EfqClosing&) const = default;
};

enum class Outcome { Thesis, Contradiction };

struct ProofClosing {
  std::variant<CaseSplit, FromClosing, EfqClosing> kind;
  Outcome outcome = Outcome::Thesis;
  int indentation = 0;
  bool operator==(const ProofClosing&) const = default;
};

struct ProofTree {
  std::vector<ProofStep> steps;
  ProofClosing closing;
  std::optional<std::string> name;
  bool operator==(const ProofTree&) const = default;
};

/// Indentation unit: a case-split branch body sits two levels deeper than
/// the split (one level for the "Assume" header, one for the body).
inline constexpr int kIndentUnit = 3;
inline constexpr int kBranchIndent = 2 * kIndentUnit;

/// Recomputes stored indentation from the tree structure.
void assignIndentation(ProofTree& tree, int base = 0);
bool indentationConsistent(const ProofTree& tree, int base = 0);

/// Outcome implied by the closings: a split reaches the thesis unless every
/// branch ends in contradiction.
Outcome derivedOutcome(const ProofTree& tree);

/// Number of mp and substitution steps, over all branches.
int countSteps(const ProofTree& tree);
/// Steps plus closings, over all branches.
int countStatements(const ProofTree& tree);
/// Maximum nesting of case splits.
int splitDepth(const ProofTree& tree);

struct CheckResult {
  bool ok = true;
  std::string path;  // e.g. "/split[1]/split[0]/step[2]"
  std::string rule;  // mp, subst, cs, as, efq, grammar, freshness, indentation
  std::string detail;

  static CheckResult success() { return {}; }
  explicit operator bool() const { return ok; }
  std::string message() const;
};

/// Replays `proof` against the theory. `lemmas` are additional named
/// formulas (earlier theorems) usable like axioms. Never throws for
/// malformed proofs; violations are reported in the result.
CheckResult checkProof(const Theory& theory, const NamedFormula& conjecture, const ProofTree& proof,
                       std::span<const NamedFormula> lemmas = {});

}  // namespace clv
