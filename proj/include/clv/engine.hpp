#pragma once

// Forward-chaining prover for coherent theories: saturation by modus ponens,
// union-find equality with explicit rewrite steps, case splits on derived
// disjunctions, and iterative deepening over (mp steps per branch, split depth).

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "clv/logic.hpp"
#include "clv/proof.hpp"

namespace clv {

struct SearchLimits {
  int maxMpSteps = 8192;     // per branch, counted along the path from the root
  int maxSplitDepth = 10;
  std::chrono::milliseconds wallClock{10000};
  /// Explicit (maxMpSteps, maxSplitDepth) rounds. Empty means the default
  /// schedule (8 * 2^k, k) for k = 0, 1, ..., capped by the two maxima.
  std::vector<std::pair<int, int>> deepeningSchedule;

  /// The rounds to run; throws Error when the explicit schedule is not
  /// increasing.
  std::vector<std::pair<int, int>> schedule() const;
};

enum class ProveStatus { Proved, Exhausted, Timeout };

std::string_view toString(ProveStatus status);

struct ProveResult {
  ProveStatus status = ProveStatus::Exhausted;
  std::optional<ProofTree> proof;
  std::vector<std::pair<int, int>> limitsTried;
  std::chrono::milliseconds elapsed{0};
};

/// Proves `conjecture` from the axioms of `theory`. With `hints`, only the
/// named axioms are used, in the given order, plus the decidability axioms
/// of the theory; an unknown name throws Error.
ProveResult prove(const Theory& theory, const NamedFormula& conjecture, const SearchLimits& limits = {},
                  const std::vector<std::string>* hints = nullptr);

/// One name per line, '#' starts a comment.
std::vector<std::string> parseHints(std::string_view text);

namespace engine {

enum class MpOutcome { NewFacts, NewDisjunction, Bottom, Redundant };

/// The fact base of a single branch, exposed for inspection and testing.
class FactBase {
 public:
  /// Replaces the universal variables of the conjecture by fresh constants
  /// and asserts its premises.
  FactBase(const Theory& theory, const NamedFormula& conjecture);
  ~FactBase();
  FactBase(FactBase&&) noexcept;
  FactBase& operator=(FactBase&&) noexcept;

  /// Active facts in canonical form, in creation order. Equations are kept
  /// in the union-find structure and are not listed.
  std::vector<Atom> facts() const;
  std::vector<Disjunct> goal() const;
  bool bottom() const;
  bool goalReached() const;
  std::string representative(const std::string& constant) const;
  int pendingDisjunctions() const;

  /// Every binding of the universal variables making all premises of
  /// `axiom` hold, in deterministic order.
  std::vector<NameBinding> matchPremises(const NamedFormula& axiom) const;
  MpOutcome applyMp(const NamedFormula& axiom, const NameBinding& binding);
  /// Identifies two known constants; returns the facts rewritten as a result.
  std::vector<Atom> mergeEqual(const std::string& lhs, const std::string& rhs);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace engine
}  // namespace clv
