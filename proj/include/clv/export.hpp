#pragma once

// Renderers from interchange documents to Isabelle/Isar, Coq, and natural
// language (LaTeX, HTML, plain text).

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "clv/document.hpp"

namespace clv {

struct RenderedArtifact {
  std::string mainFile;
  std::vector<std::pair<std::string, std::string>> auxiliaryFiles;  // file name, content
};

enum class TextTarget { Latex, Html, Plain };

/// Notation for predicates in natural-language output. The file format has
/// one directive per line, '#' starting a comment:
///
///   cong/4 pairinfix 2,2 latex=\cong html=&cong; plain===
///   perp/2 infix latex=\perp html=&perp; plain=_|_
///   eqd/4 tupleinfix 2,2 \equiv
///
/// pairinfix writes each argument group by juxtaposition (AB), tupleinfix as
/// a parenthesized tuple ((A,B)); a symbol without backend prefix applies to
/// every backend.
struct LayoutConfig {
  struct Directive {
    enum class Kind { Functional, Infix, PairInfix, TupleInfix } kind = Kind::Functional;
    std::vector<int> groups;
    std::map<std::string, std::string> symbols;  // backend -> symbol, "" for all
    std::string symbol(TextTarget target) const;
  };
  std::map<std::string, Directive> directives;  // "name/arity"

  static LayoutConfig parse(std::string_view text);
  const Directive* find(const std::string& predicate, std::size_t arity) const;
  bool operator==(const LayoutConfig&) const = default;
};

/// Renders one atom as text of the target (without math delimiters).
/// `sig` identifies negation partners, which are shown as negations.
std::string renderAtom(const Atom& atom, const LayoutConfig& layout, TextTarget target, const Signature& sig);
/// Inverse of renderAtom: recovers the functional atom.
Atom parseRenderedAtom(std::string_view text, const LayoutConfig& layout, TextTarget target, const Signature& sig);

struct ExportOptions {
  std::string name = "Document";  // Isabelle theory name, document title
};

RenderedArtifact exportIsar(const VernacularDocument& doc, const ExportOptions& options = {});
RenderedArtifact exportCoq(const VernacularDocument& doc, const ExportOptions& options = {});
RenderedArtifact exportNaturalLanguage(const VernacularDocument& doc, const LayoutConfig& layout, TextTarget target,
                                       const ExportOptions& options = {});

}  // namespace clv
