#include <algorithm>
#include <map>
#include <set>

#include "clv/errors.hpp"
#include "clv/proof.hpp"

namespace clv {
namespace {

struct Violation {
  std::string rule;
  std::string detail;
};

// Facts available at some point of the proof: ground atoms, derived
// disjunctions, and the sorts of every constant the proof may refer to.
struct Context {
  std::set<Atom> atoms;
  std::vector<GroundDisjunction> disjunctions;
  bool bottom = false;
  std::map<std::string, std::string> sortOf;
};

std::string show(const std::vector<Atom>& atoms) {
  std::string out;
  for (const auto& a : atoms) {
    if (!out.empty()) out += " & ";
    out += toString(a);
  }
  return out.empty() ? "true" : out;
}

bool reflexive(const Atom& a) {
  return a.isEquality() && a.args.size() == 2 && a.args[0] == a.args[1];
}

bool holds(const Context& ctx, const Atom& a) { return reflexive(a) || ctx.atoms.count(a) > 0; }

// Tiny congruence structure over constant names, enough for flat atoms.
class Classes {
 public:
  void merge(const std::string& a, const std::string& b) { parent_[find(a)] = find(b); }
  std::string find(const std::string& x) {
    auto it = parent_.find(x);
    if (it == parent_.end() || it->second == x) return x;
    std::string r = find(it->second);
    parent_[x] = r;
    return r;
  }
  bool same(const std::string& a, const std::string& b) { return find(a) == find(b); }
  bool sameArgs(const Atom& a, const Atom& b) {
    if (a.args.size() != b.args.size()) return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
      if (!same(a.args[i].name, b.args[i].name)) return false;
    return true;
  }

 private:
  std::map<std::string, std::string> parent_;
};

class Checker {
 public:
  Checker(const Theory& theory, const NamedFormula& conjecture, std::span<const NamedFormula> lemmas)
      : theory_(theory), conjecture_(conjecture), lemmas_(lemmas) {}

  CheckResult run(const ProofTree& proof) {
    Context ctx;
    for (const auto& c : theory_.signature.constants) ctx.sortOf[c.name] = c.sort;
    try {
      conjConsts_ = conjectureConstants(theory_, conjecture_.formula);
      for (const auto& [v, c] : conjConsts_) ctx.sortOf[c.name] = c.sort;
      goalPremises_ = substitute(std::span<const Atom>(conjecture_.formula.premises), conjConsts_);
    } catch (const Error& e) {
      return fail("/", "grammar", std::string("conjecture cannot be instantiated: ") + e.what());
    }
    for (const auto& a : goalPremises_) ctx.atoms.insert(a);
    if (!indentationConsistent(proof)) return fail("/", "indentation", "indentation does not follow the nesting of case splits");
    return tree(proof, std::move(ctx), "");
  }

 private:
  static CheckResult fail(std::string path, std::string rule, std::string detail) {
    CheckResult r;
    r.ok = false;
    r.path = path.empty() ? "/" : std::move(path);
    r.rule = std::move(rule);
    r.detail = std::move(detail);
    return r;
  }

  const NamedFormula* lookup(const std::string& name) const {
    if (const auto* ax = theory_.findAxiom(name)) return ax;
    for (const auto& l : lemmas_)
      if (l.name == name) return &l;
    return nullptr;
  }

  // Builds the substitution for `vars` from `binding`, which must name
  // exactly these variables in this order.
  std::optional<Violation> bind(const std::vector<Variable>& vars, const NameBinding& binding,
                                const Context& ctx, Substitution& out, const std::string& rule) const {
    if (binding.size() != vars.size())
      return Violation{rule, "binding has " + std::to_string(binding.size()) + " entries, expected " +
                                 std::to_string(vars.size())};
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (binding[i].first != vars[i].name)
        return Violation{rule, "binding names variable " + binding[i].first + ", expected " + vars[i].name};
      auto it = ctx.sortOf.find(binding[i].second);
      if (it == ctx.sortOf.end()) return Violation{rule, "unknown constant " + binding[i].second};
      if (it->second != vars[i].sort)
        return Violation{rule, "constant " + binding[i].second + " has sort " + it->second + ", variable " +
                                   vars[i].name + " needs " + vars[i].sort};
      out.emplace_back(vars[i], Constant{binding[i].second, it->second});
    }
    return std::nullopt;
  }

  std::optional<Violation> modusPonens(const ModusPonensStep& mp, Context& ctx) const {
    const NamedFormula* ax = lookup(mp.axiom);
    if (!ax) return Violation{"mp", "unknown axiom " + mp.axiom};
    const auto& f = ax->formula;
    Substitution sub;
    if (auto v = bind(f.universalVars, mp.binding, ctx, sub, "mp")) return v;
    auto premises = substitute(std::span<const Atom>(f.premises), sub);
    if (premises != mp.premises)
      return Violation{"mp", "premises " + show(mp.premises) + " do not match the instance " + show(premises) +
                                 " of " + mp.axiom};
    for (const auto& p : premises)
      if (!holds(ctx, p)) return Violation{"mp", "premise " + toString(p) + " has not been established"};

    std::size_t existentials = 0;
    for (const auto& d : f.conclusion) existentials += d.existentialVars.size();
    if (mp.witnesses.size() != existentials)
      return Violation{"mp", "expected " + std::to_string(existentials) + " witnesses, got " +
                                 std::to_string(mp.witnesses.size())};
    std::set<std::string> seen;
    for (const auto& w : mp.witnesses) {
      if (ctx.sortOf.count(w) || !seen.insert(w).second)
        return Violation{"freshness", "witness " + w + " is not fresh"};
    }

    GroundDisjunction expected;
    std::size_t next = 0;
    for (const auto& d : f.conclusion) {
      Substitution full = sub;
      for (const auto& v : d.existentialVars) full.emplace_back(v, Constant{mp.witnesses[next++], v.sort});
      expected.push_back(substitute(std::span<const Atom>(d.conjuncts), full));
    }
    if (expected != mp.derived) return Violation{"mp", "derived formula is not the conclusion of " + mp.axiom};

    next = 0;
    for (const auto& d : f.conclusion)
      for (const auto& v : d.existentialVars) ctx.sortOf[mp.witnesses[next++]] = v.sort;
    if (expected.empty())
      ctx.bottom = true;
    else if (expected.size() == 1)
      ctx.atoms.insert(expected[0].begin(), expected[0].end());
    else
      ctx.disjunctions.push_back(expected);
    return std::nullopt;
  }

  std::optional<Violation> substitution(const EqualitySubstitutionStep& st, Context& ctx) const {
    if (!holds(ctx, st.source)) return Violation{"subst", "source " + toString(st.source) + " has not been established"};
    Classes cls;
    for (const auto& e : st.equations) {
      if (!e.isEquality() || e.args.size() != 2) return Violation{"subst", toString(e) + " is not an equation"};
      if (!holds(ctx, e)) return Violation{"subst", "equation " + toString(e) + " has not been established"};
      cls.merge(e.args[0].name, e.args[1].name);
    }
    const Atom& s = st.source;
    const Atom& d = st.derived;
    if (!d.isGround()) return Violation{"subst", "derived atom is not ground"};
    bool ok = false;
    if (s.isEquality() && d.isEquality() && s.args.size() == 2 && d.args.size() == 2) {
      cls.merge(s.args[0].name, s.args[1].name);
      ok = cls.same(d.args[0].name, d.args[1].name);
    } else if (s.predicate == d.predicate) {
      ok = cls.sameArgs(s, d);
      if (!ok && s.isDisequality() && s.args.size() == 2 && d.args.size() == 2)
        ok = cls.same(s.args[0].name, d.args[1].name) && cls.same(s.args[1].name, d.args[0].name);
    }
    if (!ok) return Violation{"subst", toString(d) + " does not follow from " + toString(s) + " by the equations"};
    for (const auto& t : d.args)
      if (!ctx.sortOf.count(t.name)) return Violation{"subst", "unknown constant " + t.name};
    ctx.atoms.insert(d);
    return std::nullopt;
  }

  std::optional<Violation> efq(const EfqClosing& e, const Context& ctx) const {
    for (const auto& f : e.facts)
      if (!holds(ctx, f)) return Violation{"efq", "fact " + toString(f) + " has not been established"};
    if (!e.axiom.empty()) {
      const NamedFormula* ax = lookup(e.axiom);
      if (!ax) return Violation{"efq", "unknown axiom " + e.axiom};
      if (!ax->formula.isBottom()) return Violation{"efq", e.axiom + " does not conclude falsum"};
      Substitution sub;
      if (auto v = bind(ax->formula.universalVars, e.binding, ctx, sub, "efq")) return v;
      if (substitute(std::span<const Atom>(ax->formula.premises), sub) != e.facts)
        return Violation{"efq", "facts do not match the premises of " + e.axiom};
      return std::nullopt;
    }
    if (ctx.bottom) return std::nullopt;
    Classes cls;
    for (const auto& f : e.facts)
      if (f.isEquality() && f.args.size() == 2) cls.merge(f.args[0].name, f.args[1].name);
    for (const auto& f : e.facts) {
      if (f.isDisequality() && f.args.size() == 2 && cls.same(f.args[0].name, f.args[1].name)) return std::nullopt;
      const auto* p = theory_.signature.findPredicate(f.predicate);
      if (!p || !p->negatedPartner) continue;
      for (const auto& g : e.facts)
        if (g.predicate == *p->negatedPartner && cls.sameArgs(f, g)) return std::nullopt;
    }
    return Violation{"efq", "facts " + show(e.facts) + " are not contradictory"};
  }

  std::optional<Violation> from(const FromClosing& c, const Context& ctx) const {
    const auto& goal = conjecture_.formula.conclusion;
    if (c.disjunct < 0 || c.disjunct >= static_cast<int>(goal.size()))
      return Violation{"as", "goal has no disjunct " + std::to_string(c.disjunct)};
    const Disjunct& d = goal[c.disjunct];
    Substitution sub = conjConsts_;
    if (auto v = bind(d.existentialVars, c.witnessBinding, ctx, sub, "as")) return v;
    auto expected = substitute(std::span<const Atom>(d.conjuncts), sub);
    if (expected != c.facts)
      return Violation{"as", "facts " + show(c.facts) + " are not goal disjunct " + std::to_string(c.disjunct) +
                                 " (" + show(expected) + ")"};
    for (const auto& f : c.facts)
      if (!holds(ctx, f)) return Violation{"as", "fact " + toString(f) + " has not been established"};
    return std::nullopt;
  }

  CheckResult tree(const ProofTree& t, Context ctx, const std::string& path) const {
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
      std::string here = path + "/step[" + std::to_string(i) + "]";
      std::optional<Violation> v;
      try {
        if (const auto* mp = std::get_if<ModusPonensStep>(&t.steps[i].kind))
          v = modusPonens(*mp, ctx);
        else
          v = substitution(std::get<EqualitySubstitutionStep>(t.steps[i].kind), ctx);
      } catch (const Error& e) {
        v = Violation{t.steps[i].isModusPonens() ? "mp" : "subst", e.what()};
      }
      if (v) return fail(here, v->rule, v->detail);
    }

    std::string here = path + "/closing";
    const auto& closing = t.closing;
    if (closing.outcome != derivedOutcome(t))
      return fail(here, "grammar", "stated outcome does not match the closing");

    if (const auto* cs = std::get_if<CaseSplit>(&closing.kind)) {
      if (cs->disjunction.size() < 2) return fail(here, "cs", "a case split needs at least two cases");
      if (cs->branches.size() != cs->disjunction.size())
        return fail(here, "cs", "number of branches differs from number of cases");
      if (std::find(ctx.disjunctions.begin(), ctx.disjunctions.end(), cs->disjunction) == ctx.disjunctions.end())
        return fail(here, "cs", "the split disjunction has not been derived");
      for (std::size_t i = 0; i < cs->branches.size(); ++i) {
        if (cs->disjunction[i].empty()) return fail(here, "cs", "empty case");
        Context sub = ctx;
        sub.atoms.insert(cs->disjunction[i].begin(), cs->disjunction[i].end());
        auto r = tree(cs->branches[i], std::move(sub), path + "/split[" + std::to_string(i) + "]");
        if (!r) return r;
      }
      return CheckResult::success();
    }

    std::optional<Violation> v;
    try {
      if (const auto* f = std::get_if<FromClosing>(&closing.kind))
        v = from(*f, ctx);
      else
        v = efq(std::get<EfqClosing>(closing.kind), ctx);
    } catch (const Error& e) {
      v = Violation{std::holds_alternative<FromClosing>(closing.kind) ? "as" : "efq", e.what()};
    }
    if (v) return fail(here, v->rule, v->detail);
    return CheckResult::success();
  }

  const Theory& theory_;
  const NamedFormula& conjecture_;
  std::span<const NamedFormula> lemmas_;
  Substitution conjConsts_;
  std::vector<Atom> goalPremises_;
};

}  // namespace

CheckResult checkProof(const Theory& theory, const NamedFormula& conjecture, const ProofTree& proof,
                       std::span<const NamedFormula> lemmas) {
  return Checker(theory, conjecture, lemmas).run(proof);
}

}  // namespace clv
