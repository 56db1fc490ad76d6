#include "clv/logic.hpp"

#include <algorithm>
#include <set>

#include "clv/errors.hpp"

namespace clv {

namespace {

void addUnique(std::vector<std::string>& out, const std::string& name) {
  if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
}

bool contains(const std::vector<Variable>& vars, std::string_view name) {
  return std::any_of(vars.begin(), vars.end(), [&](const Variable& v) { return v.name == name; });
}

std::string joinArgs(const std::vector<Term>& args) {
  std::string out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ",";
    out += args[i].name;
  }
  return out;
}

}  // namespace

Atom Atom::ground(std::string predicate, const std::vector<std::string>& constants) {
  Atom a;
  a.predicate = std::move(predicate);
  for (const auto& c : constants) a.args.push_back(Term::constant(c));
  return a;
}

bool Atom::isGround() const {
  return std::none_of(args.begin(), args.end(), [](const Term& t) { return t.isVariable(); });
}

std::string_view toString(Role role) {
  switch (role) {
    case Role::Axiom: return "axiom";
    case Role::Theorem: return "theorem";
    case Role::Conjecture: return "conjecture";
    case Role::Definition: return "definition";
  }
  return "axiom";
}

std::optional<Role> roleFromString(std::string_view text) {
  if (text == "axiom") return Role::Axiom;
  if (text == "theorem") return Role::Theorem;
  if (text == "conjecture") return Role::Conjecture;
  if (text == "definition") return Role::Definition;
  return std::nullopt;
}

const PredicateSymbol* Signature::findPredicate(std::string_view name) const {
  for (const auto& p : predicates)
    if (p.name == name) return &p;
  return nullptr;
}

const Constant* Signature::findConstant(std::string_view name) const {
  for (const auto& c : constants)
    if (c.name == name) return &c;
  return nullptr;
}

bool Signature::hasSort(std::string_view name) const {
  return std::any_of(sorts.begin(), sorts.end(), [&](const Sort& s) { return s.name == name; });
}

const NamedFormula* Theory::findAxiom(std::string_view name) const {
  for (const auto& a : axioms)
    if (a.name == name) return &a;
  return nullptr;
}

std::vector<std::string> freeVars(const Atom& atom) {
  std::vector<std::string> out;
  for (const auto& t : atom.args)
    if (t.isVariable()) addUnique(out, t.name);
  return out;
}

std::vector<std::string> freeVars(const Disjunct& disjunct) {
  std::vector<std::string> out;
  for (const auto& a : disjunct.conjuncts)
    for (const auto& v : freeVars(a))
      if (!contains(disjunct.existentialVars, v)) addUnique(out, v);
  return out;
}

std::vector<std::string> freeVars(const CoherentFormula& formula) {
  std::vector<std::string> out;
  auto take = [&](const std::string& v) {
    if (!contains(formula.universalVars, v)) addUnique(out, v);
  };
  for (const auto& a : formula.premises)
    for (const auto& v : freeVars(a)) take(v);
  for (const auto& d : formula.conclusion)
    for (const auto& v : freeVars(d)) take(v);
  return out;
}

Atom substitute(const Atom& atom, const Substitution& binding) {
  Atom out = atom;
  for (auto& t : out.args) {
    if (!t.isVariable()) continue;
    auto it = std::find_if(binding.begin(), binding.end(),
                           [&](const auto& kv) { return kv.first.name == t.name; });
    if (it == binding.end()) throw UnboundVariable(t.name);
    if (it->first.sort != it->second.sort)
      throw SortMismatch("variable '" + it->first.name + "' of sort " + it->first.sort +
                         " bound to constant '" + it->second.name + "' of sort " + it->second.sort);
    t = Term::constant(it->second.name);
  }
  return out;
}

std::vector<Atom> substitute(std::span<const Atom> atoms, const Substitution& binding) {
  std::vector<Atom> out;
  out.reserve(atoms.size());
  for (const auto& a : atoms) out.push_back(substitute(a, binding));
  return out;
}

std::string negationPartnerName(const Signature& sig, std::string_view predicate) {
  if (predicate == kEquality) return std::string(kDisequality);
  if (const auto* p = sig.findPredicate(predicate); p && p->negatedPartner) return *p->negatedPartner;
  std::string name = std::string(predicate) + "_bar";
  while (sig.findPredicate(name)) name += "_bar";
  return name;
}

namespace {

void collectNegated(const CoherentFormula& f, std::vector<std::string>& out) {
  auto visit = [&](const Atom& a) {
    if (a.negated) addUnique(out, a.predicate);
  };
  for (const auto& a : f.premises) visit(a);
  for (const auto& d : f.conclusion)
    for (const auto& a : d.conjuncts) visit(a);
}

void rewriteNegated(CoherentFormula& f, const Signature& sig) {
  auto fix = [&](Atom& a) {
    if (!a.negated) return;
    a.predicate = negationPartnerName(sig, a.predicate);
    a.negated = false;
  };
  for (auto& a : f.premises) fix(a);
  for (auto& d : f.conclusion)
    for (auto& a : d.conjuncts) fix(a);
}

std::vector<Variable> schemaVars(const std::vector<std::string>& sorts) {
  std::vector<Variable> vars;
  for (std::size_t i = 0; i < sorts.size(); ++i)
    vars.push_back({"X" + std::to_string(i + 1), sorts[i]});
  return vars;
}

Atom schemaAtom(const std::string& predicate, const std::vector<Variable>& vars) {
  Atom a{predicate, {}, false};
  for (const auto& v : vars) a.args.push_back(Term::variable(v.name));
  return a;
}

std::string equalityAxiomName(const Theory& t, const std::string& sort) {
  if (t.signature.sorts.empty() || t.signature.sorts.front().name == sort)
    return std::string(kEqualityDecidabilityName);
  return std::string(kEqualityDecidabilityName) + "_" + sort;
}

NamedFormula equalityDecidability(const std::string& name, const std::string& sort) {
  NamedFormula ax;
  ax.name = name;
  ax.role = Role::Axiom;
  ax.formula.universalVars = {{"X", sort}, {"Y", sort}};
  auto x = Term::variable("X"), y = Term::variable("Y");
  ax.formula.conclusion = {Disjunct{{}, {Atom{std::string(kEquality), {x, y}, false}}},
                           Disjunct{{}, {Atom{std::string(kDisequality), {x, y}, false}}}};
  return ax;
}

}  // namespace

Theory encodeNegation(Theory theory, std::span<NamedFormula> extra) {
  std::vector<std::string> negated;
  for (const auto& ax : theory.axioms) collectNegated(ax.formula, negated);
  for (const auto& f : extra) collectNegated(f.formula, negated);

  auto& sig = theory.signature;
  bool equalityNegated = false;
  for (const auto& name : negated) {
    if (name == kEquality) {
      equalityNegated = true;
      continue;
    }
    auto it = std::find_if(sig.predicates.begin(), sig.predicates.end(),
                           [&](const PredicateSymbol& p) { return p.name == name; });
    if (it == sig.predicates.end()) continue;
    if (it->negatedPartner) continue;
    std::string partner = negationPartnerName(sig, name);
    PredicateSymbol bar{partner, it->argSorts, false, name};
    it->negatedPartner = partner;
    auto argSorts = it->argSorts;
    sig.predicates.push_back(std::move(bar));

    auto vars = schemaVars(argSorts);
    NamedFormula incompat{partner + "_incompatibility", Role::Axiom, {}};
    incompat.formula.universalVars = vars;
    incompat.formula.premises = {schemaAtom(name, vars), schemaAtom(partner, vars)};
    NamedFormula total{partner + "_totality", Role::Axiom, {}};
    total.formula.universalVars = vars;
    total.formula.conclusion = {Disjunct{{}, {schemaAtom(name, vars)}},
                                Disjunct{{}, {schemaAtom(partner, vars)}}};
    if (!theory.findAxiom(incompat.name)) theory.axioms.push_back(std::move(incompat));
    if (!theory.findAxiom(total.name)) theory.axioms.push_back(std::move(total));
  }

  for (auto& ax : theory.axioms) rewriteNegated(ax.formula, sig);
  for (auto& f : extra) rewriteNegated(f.formula, sig);

  if (equalityNegated) {
    std::string sort = sig.sorts.empty() ? std::string(kDefaultSort) : sig.sorts.front().name;
    std::string name = equalityAxiomName(theory, sort);
    if (!theory.findAxiom(name)) theory.axioms.push_back(equalityDecidability(name, sort));
  }
  return theory;
}

void addEqualityDecidability(Theory& theory) {
  std::vector<std::string> sorts;
  for (const auto& s : theory.signature.sorts) sorts.push_back(s.name);
  if (sorts.empty()) sorts.push_back(std::string(kDefaultSort));
  for (const auto& sort : sorts) {
    std::string name = equalityAxiomName(theory, sort);
    if (!theory.findAxiom(name)) theory.axioms.push_back(equalityDecidability(name, sort));
  }
}

namespace {

std::string sortOfTerm(const Term& t, const std::vector<Variable>& scope, const Signature& sig) {
  if (t.isVariable()) {
    for (const auto& v : scope)
      if (v.name == t.name) return v.sort;
    throw WellFormednessError("variable '" + t.name + "' is not bound");
  }
  if (const auto* c = sig.findConstant(t.name)) return c->sort;
  throw WellFormednessError("constant '" + t.name + "' is not declared");
}

void checkAtom(const Atom& a, const std::vector<Variable>& scope, const Signature& sig) {
  if (a.negated) throw WellFormednessError("atom " + toString(a) + " still carries a negation marker");
  if (a.predicate == kEquality || a.predicate == kDisequality) {
    if (a.args.size() != 2) throw WellFormednessError("equality needs two arguments");
    if (sortOfTerm(a.args[0], scope, sig) != sortOfTerm(a.args[1], scope, sig))
      throw WellFormednessError("equality between different sorts in " + toString(a));
    return;
  }
  const auto* p = sig.findPredicate(a.predicate);
  if (!p) throw WellFormednessError("predicate '" + a.predicate + "' is not declared");
  if (p->arity() != a.args.size())
    throw WellFormednessError("arity mismatch in " + toString(a));
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (sortOfTerm(a.args[i], scope, sig) != p->argSorts[i])
      throw WellFormednessError("sort mismatch in " + toString(a));
}

}  // namespace

void checkWellFormed(const CoherentFormula& f, const Signature& sig) {
  std::set<std::string> seen;
  for (const auto& v : f.universalVars)
    if (!seen.insert(v.name).second) throw WellFormednessError("variable '" + v.name + "' bound twice");
  for (const auto& a : f.premises) checkAtom(a, f.universalVars, sig);
  for (const auto& d : f.conclusion) {
    if (d.conjuncts.empty()) throw WellFormednessError("empty conjunction in conclusion");
    std::vector<Variable> scope = f.universalVars;
    std::set<std::string> local;
    for (const auto& v : d.existentialVars) {
      if (seen.count(v.name) || !local.insert(v.name).second)
        throw WellFormednessError("variable '" + v.name + "' bound twice");
      scope.push_back(v);
    }
    for (const auto& a : d.conjuncts) checkAtom(a, scope, sig);
    for (const auto& v : d.existentialVars) {
      bool used = std::any_of(d.conjuncts.begin(), d.conjuncts.end(), [&](const Atom& a) {
        return std::any_of(a.args.begin(), a.args.end(),
                           [&](const Term& t) { return t.isVariable() && t.name == v.name; });
      });
      if (!used) throw WellFormednessError("existential variable '" + v.name + "' is unused");
    }
  }
}

void checkWellFormed(const Theory& theory) {
  const auto& sig = theory.signature;
  if (sig.sorts.empty()) throw WellFormednessError("signature has no sort");
  std::set<std::string> names;
  for (const auto& s : sig.sorts)
    if (!names.insert("sort:" + s.name).second) throw WellFormednessError("duplicate sort " + s.name);
  for (const auto& p : sig.predicates) {
    if (!names.insert("pred:" + p.name).second)
      throw WellFormednessError("duplicate predicate " + p.name);
    for (const auto& s : p.argSorts)
      if (!sig.hasSort(s)) throw WellFormednessError("unknown sort " + s);
    if (p.negatedPartner) {
      const auto* q = sig.findPredicate(*p.negatedPartner);
      if (!q || q->argSorts != p.argSorts || q->negatedPartner != p.name)
        throw WellFormednessError("negation partner of " + p.name + " is not symmetric");
    }
  }
  for (const auto& c : sig.constants) {
    if (!names.insert("const:" + c.name).second)
      throw WellFormednessError("duplicate constant " + c.name);
    if (!sig.hasSort(c.sort)) throw WellFormednessError("unknown sort " + c.sort);
  }
  for (const auto& ax : theory.axioms) {
    if (!names.insert("axiom:" + ax.name).second)
      throw WellFormednessError("duplicate axiom " + ax.name);
    checkWellFormed(ax.formula, sig);
  }
}

Substitution conjectureConstants(const Theory& theory, const CoherentFormula& conjecture) {
  Substitution out;
  std::set<std::string> taken;
  for (const auto& c : theory.signature.constants) taken.insert(c.name);
  for (const auto& v : conjecture.universalVars) {
    std::string name = v.name;
    for (int k = 1; taken.count(name); ++k) name = v.name + "_" + std::to_string(k);
    taken.insert(name);
    out.emplace_back(v, Constant{name, v.sort});
  }
  return out;
}

bool isDecidabilityAxiom(const NamedFormula& axiom, const Signature& sig) {
  const auto& f = axiom.formula;
  if (!f.premises.empty() || f.conclusion.size() != 2) return false;
  for (const auto& d : f.conclusion)
    if (!d.existentialVars.empty() || d.conjuncts.size() != 1) return false;
  const Atom& a = f.conclusion[0].conjuncts[0];
  const Atom& b = f.conclusion[1].conjuncts[0];
  if (a.args != b.args) return false;
  if (!std::all_of(a.args.begin(), a.args.end(), [](const Term& t) { return t.isVariable(); }))
    return false;
  if (a.predicate == kEquality) return b.predicate == kDisequality;
  const auto* p = sig.findPredicate(a.predicate);
  return p && p->negatedPartner && *p->negatedPartner == b.predicate;
}

std::string toString(const Atom& atom) {
  std::string body;
  if (atom.predicate == kEquality || atom.predicate == kDisequality) {
    body = atom.args.size() == 2 ? atom.args[0].name + " " + atom.predicate + " " + atom.args[1].name
                                 : atom.predicate + "(" + joinArgs(atom.args) + ")";
  } else {
    body = atom.predicate;
    if (!atom.args.empty()) body += "(" + joinArgs(atom.args) + ")";
  }
  return atom.negated ? "~" + body : body;
}

std::string toString(const CoherentFormula& f) {
  auto conj = [](const std::vector<Atom>& atoms) {
    std::string out;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (i) out += " & ";
      out += toString(atoms[i]);
    }
    return out;
  };
  auto varList = [](const std::vector<Variable>& vars) {
    std::string out;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (i) out += ",";
      out += vars[i].name;
    }
    return out;
  };
  std::string concl;
  if (f.conclusion.empty()) concl = "$false";
  for (std::size_t i = 0; i < f.conclusion.size(); ++i) {
    if (i) concl += " | ";
    const auto& d = f.conclusion[i];
    std::string body = "(" + conj(d.conjuncts) + ")";
    if (!d.existentialVars.empty()) body = "?[" + varList(d.existentialVars) + "]: " + body;
    concl += body;
  }
  std::string out = f.premises.empty() ? concl : "(" + conj(f.premises) + ") => " + concl;
  if (!f.universalVars.empty()) out = "![" + varList(f.universalVars) + "]: (" + out + ")";
  return out;
}

}  // namespace clv
