#pragma once

// Shared helpers for the unit, property and acceptance tests: random problem
// generators, a brute-force oracle for Horn theories, random documents, the
// proof mutation catalog, and text utilities.

#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "clv/document.hpp"
#include "clv/engine.hpp"
#include "clv/tptp.hpp"

namespace clv::testing {

std::filesystem::path sourceDir();
std::string readFile(const std::filesystem::path& path);
void writeFile(const std::filesystem::path& path, const std::string& text);

/// A fresh empty directory under the system temp dir.
std::filesystem::path scratchDir(const std::string& tag);

/// Collapses every whitespace run to one space and trims the ends.
std::string normalizeWhitespace(const std::string& text);

struct Problem {
  std::string text;  // TPTP source
  Theory theory;
  NamedFormula conjecture;
};

Problem loadProblem(const std::string& text);

/// At most 4 predicates of arity <= 3, at most 6 constants (theory constants
/// plus conjecture variables), at most 8 axioms; no existentials, no
/// disjunctions, no equality. Some axioms conclude $false.
std::string randomHornProblem(std::mt19937& rng);

/// Coherent problems with disjunctions, existentials, equality and negated
/// atoms. About half of the conjectures are planted: they restate an axiom
/// instance, so a good share is provable.
std::string randomCoherentProblem(std::mt19937& rng);

/// Independent ground saturation over the Herbrand constants (signature plus
/// conjecture constants). Only for theories without existentials,
/// disjunctions or equality.
bool hornOracle(const Theory& theory, const NamedFormula& conjecture);

/// Limits small enough for random problems.
SearchLimits quickLimits();

/// A document built from proved random problems, with random front page
/// text (including markup characters), chapters, and conjectures.
VernacularDocument randomDocument(std::mt19937& rng);

struct Mutant {
  std::string kind;  // drop-premise, stale-witness, single-branch-split, wrong-thesis-index
  std::string site;
  ProofTree proof;
};

inline const std::vector<std::string> kMutationKinds = {"drop-premise", "stale-witness", "single-branch-split",
                                                        "wrong-thesis-index"};

/// Every mutant of the catalog at every applicable site of `proof`.
std::vector<Mutant> mutants(const ProofTree& proof, const NamedFormula& conjecture, const Theory& theory);

}  // namespace clv::testing
