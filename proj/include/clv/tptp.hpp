#pragma once

// Reader for the first-order (fof) subset of TPTP used by coherent problems.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "clv/logic.hpp"

namespace clv::tptp {

/// First-order formula as written in the input, before normalization.
struct Formula {
  enum class Kind { Atom, True, False, Not, And, Or, Implies, Iff, Forall, Exists };

  Kind kind = Kind::True;
  Atom atom;                           // Kind::Atom (args may be variables)
  std::vector<std::string> variables;  // Forall / Exists
  std::vector<Formula> children;       // Not: 1, Implies/Iff: 2, And/Or: >= 2, quantifiers: 1
  int line = 0;
  int column = 0;

  bool operator==(const Formula& other) const;  // ignores source positions
};

struct AnnotatedFormula {
  std::string name;
  Role role = Role::Axiom;
  Formula formula;
  std::string file;
  int line = 0;

  bool operator==(const AnnotatedFormula& o) const {
    return name == o.name && role == o.role && formula == o.formula;
  }
};

struct SourceProblem {
  std::vector<AnnotatedFormula> formulas;
  std::vector<std::string> includes;  // resolved paths, in first-visit order

  bool operator==(const SourceProblem& o) const { return formulas == o.formulas; }
};

/// Maps an include path (already joined with the including file's directory)
/// to the file text. Must be safe to call concurrently.
using IncludeResolver = std::function<std::string(const std::string& path)>;

/// Reads files from disk; throws clv::Error when a file cannot be opened.
IncludeResolver fileResolver();

/// Parses `text` (named `path` in diagnostics; includes are resolved relative
/// to its directory). Throws SyntaxError, UnsupportedTerm, IncludeCycle,
/// DuplicateName.
SourceProblem parseProblem(const std::string& text, const IncludeResolver& resolver,
                           const std::string& path = "<input>");

SourceProblem parseFile(const std::string& path, const IncludeResolver& resolver = fileResolver());

/// Writes the problem back in the accepted grammar (includes already inlined).
std::string prettyPrint(const SourceProblem& problem);
std::string prettyPrint(const Formula& formula);

/// Normalizes a closed (after implicit universal closure) formula into the
/// coherent shape. Throws NotCoherent.
CoherentFormula toCoherent(const Formula& formula);

struct AssembleOptions {
  bool addEqualityDecidability = true;
  std::string theoryName = "theory";
};

struct AssembledProblem {
  Theory theory;
  std::vector<NamedFormula> conjectures;
};

/// Builds the theory (signature inferred from usage, negation encoded) and
/// the list of conjectures. Axioms, definitions and theorems all become
/// theory axioms. Throws NotCoherent, ArityConflict.
AssembledProblem assembleTheory(const SourceProblem& problem, const AssembleOptions& options = {});

}  // namespace clv::tptp
