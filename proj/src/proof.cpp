#include "clv/proof.hpp"

#include <algorithm>

namespace clv {

bool CaseSplit::operator==(const CaseSplit& o) const {
  return disjunction == o.disjunction && branches == o.branches;
}

void assignIndentation(ProofTree& tree, int base) {
  for (auto& s : tree.steps) s.indentation = base;
  tree.closing.indentation = base;
  if (auto* cs = std::get_if<CaseSplit>(&tree.closing.kind))
    for (auto& b : cs->branches) assignIndentation(b, base + kBranchIndent);
}

bool indentationConsistent(const ProofTree& tree, int base) {
  for (const auto& s : tree.steps)
    if (s.indentation != base) return false;
  if (tree.closing.indentation != base) return false;
  if (const auto* cs = std::get_if<CaseSplit>(&tree.closing.kind))
    for (const auto& b : cs->branches)
      if (!indentationConsistent(b, base + kBranchIndent)) return false;
  return true;
}

Outcome derivedOutcome(const ProofTree& tree) {
  if (std::holds_alternative<FromClosing>(tree.closing.kind)) return Outcome::Thesis;
  if (std::holds_alternative<EfqClosing>(tree.closing.kind)) return Outcome::Contradiction;
  const auto& cs = std::get<CaseSplit>(tree.closing.kind);
  bool all = !cs.branches.empty() && std::all_of(cs.branches.begin(), cs.branches.end(), [](const ProofTree& b) {
    return derivedOutcome(b) == Outcome::Contradiction;
  });
  return all ? Outcome::Contradiction : Outcome::Thesis;
}

int countSteps(const ProofTree& tree) {
  int n = static_cast<int>(tree.steps.size());
  if (const auto* cs = std::get_if<CaseSplit>(&tree.closing.kind))
    for (const auto& b : cs->branches) n += countSteps(b);
  return n;
}

int countStatements(const ProofTree& tree) {
  int n = static_cast<int>(tree.steps.size()) + 1;
  if (const auto* cs = std::get_if<CaseSplit>(&tree.closing.kind))
    for (const auto& b : cs->branches) n += countStatements(b);
  return n;
}

int splitDepth(const ProofTree& tree) {
  const auto* cs = std::get_if<CaseSplit>(&tree.closing.kind);
  if (!cs) return 0;
  int d = 0;
  for (const auto& b : cs->branches) d = std::max(d, splitDepth(b));
  return d + 1;
}

std::string CheckResult::message() const {
  if (ok) return "ok";
  return "violation at " + (path.empty() ? std::string("/") : path) + " [" + rule + "]: " + detail;
}

}  // namespace clv
