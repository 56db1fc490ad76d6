#pragma once

// Interchange documents: a front page, a theory, and chapters of theorems
// (with proofs) and conjectures, stored as XML conforming to Vernacular.dtd.

#include <string>
#include <vector>

#include "clv/logic.hpp"
#include "clv/proof.hpp"
#include "clv/xml.hpp"

namespace clv {

struct Frontpage {
  std::string author;
  std::string prover;
  std::string date;
  bool operator==(const Frontpage&) const = default;
};

/// A theorem when it carries proofs, a conjecture otherwise.
struct TheoremItem {
  std::string name;
  CoherentFormula formula;
  std::vector<ProofTree> proofs;

  bool isTheorem() const { return !proofs.empty(); }
  NamedFormula asNamedFormula() const;
  bool operator==(const TheoremItem&) const = default;
};

struct Chapter {
  std::string name;
  std::vector<TheoremItem> items;
  bool operator==(const Chapter&) const = default;
};

struct VernacularDocument {
  Frontpage frontpage;
  Theory theory;
  std::vector<Chapter> chapters;

  /// Theorems that precede `item` in document order; proofs may cite them.
  std::vector<NamedFormula> lemmasBefore(const TheoremItem& item) const;
  bool operator==(const VernacularDocument&) const = default;
};

/// Whole document in one file.
std::string serializeDocument(const VernacularDocument& doc);

/// The same document split as a main file referring to frontpage.xml,
/// theory_<theory>.xml and proof_<item>.xml through includes.
struct SplitDocument {
  std::string main;
  std::vector<std::pair<std::string, std::string>> files;  // relative name, content
};
SplitDocument serializeSplit(const VernacularDocument& doc);

std::string serializeFrontpage(const Frontpage& frontpage);
std::string serializeTheory(const Theory& theory);
std::string serializeItem(const TheoremItem& item);

/// Expands includes, validates, and builds the document. Throws
/// SchemaViolation, IncludeCycle, DanglingReference, or Error for input that
/// is not well-formed.
VernacularDocument parseDocument(const std::string& xml, const xml::Resolver& resolver = xml::fileResolver(),
                                 const std::string& path = "<input>");
VernacularDocument parseDocumentFile(const std::string& path, const xml::Resolver& resolver = xml::fileResolver());

/// Schema violations after include expansion; empty means valid. Input that
/// is not well-formed yields a single violation.
std::vector<std::string> validateDocument(const std::string& xml, const xml::Resolver& resolver = xml::fileResolver(),
                                          const std::string& path = "<input>");

}  // namespace clv
