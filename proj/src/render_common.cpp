#include "render_common.hpp"

namespace clv::render {

bool negates(const Atom& negative, const Atom& positive, const Signature& sig) {
  if (negative.args != positive.args) return false;
  if (negative.isDisequality()) return positive.isEquality();
  auto pos = positiveOf(sig, negative.predicate);
  return pos && *pos == positive.predicate;
}

bool complementary(const GroundDisjunction& d, const Signature& sig) {
  return d.size() == 2 && d[0].size() == 1 && d[1].size() == 1 && negates(d[1][0], d[0][0], sig);
}

bool isIncompatibilityAxiom(const NamedFormula& axiom, const Signature& sig) {
  const auto& f = axiom.formula;
  if (!f.isBottom() || f.premises.size() != 2) return false;
  return negates(f.premises[1], f.premises[0], sig) || negates(f.premises[0], f.premises[1], sig);
}

bool isHelperAxiom(const NamedFormula& axiom, const Signature& sig) {
  return isDecidabilityAxiom(axiom, sig) || isIncompatibilityAxiom(axiom, sig);
}

std::optional<std::pair<Atom, Atom>> literalContradiction(const std::vector<Atom>& facts, const Signature& sig) {
  if (facts.size() != 2) return std::nullopt;
  if (negates(facts[0], facts[1], sig)) return std::pair{facts[0], facts[1]};
  if (negates(facts[1], facts[0], sig)) return std::pair{facts[1], facts[0]};
  return std::nullopt;
}

Substitution itemConstants(const VernacularDocument& doc, const TheoremItem& item) {
  return conjectureConstants(doc.theory, item.formula);
}

std::vector<std::string> bindingValues(const ModusPonensStep& step) {
  std::vector<std::string> out;
  for (const auto& [var, value] : step.binding) out.push_back(value);
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace clv::render
