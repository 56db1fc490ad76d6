#pragma once

// Helpers shared by the exporters.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "clv/document.hpp"
#include "clv/export.hpp"

namespace clv::render {

void checkLayout(const LayoutConfig& layout, const Signature& sig);
std::string identifier(std::string_view name, TextTarget target);

/// For a partner predicate introduced by the negation encoding, the
/// predicate it negates.
std::optional<std::string> positiveOf(const Signature& sig, const std::string& predicate);

/// Atom of the form R(..) or a = b whose negation is `negative`.
bool negates(const Atom& negative, const Atom& positive, const Signature& sig);

/// A two-way split `P | ~P` with P first.
bool complementary(const GroundDisjunction& d, const Signature& sig);

/// `R & Rbar => false` as added by the negation encoding.
bool isIncompatibilityAxiom(const NamedFormula& axiom, const Signature& sig);
/// Axioms that targets with native negation and excluded middle do not need.
bool isHelperAxiom(const NamedFormula& axiom, const Signature& sig);

/// Orders two contradictory facts as (negative, positive) when they are
/// literally complementary.
std::optional<std::pair<Atom, Atom>> literalContradiction(const std::vector<Atom>& facts, const Signature& sig);

/// Constants standing for the universal variables in the statement of `item`.
Substitution itemConstants(const VernacularDocument& doc, const TheoremItem& item);

/// Universal binding of an mp step as constants in the axiom's variable order.
std::vector<std::string> bindingValues(const ModusPonensStep& step);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace clv::render
