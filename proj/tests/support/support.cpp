#include "support.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <unistd.h>

#include "clv/errors.hpp"

namespace clv::testing {

namespace fs = std::filesystem;

fs::path sourceDir() { return fs::path(CLV_SOURCE_DIR); }

std::string readFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeFile(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
}

fs::path scratchDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  fs::path dir = fs::temp_directory_path() /
                 ("clv_test_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string normalizeWhitespace(const std::string& text) {
  std::string out;
  bool space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = true;
      continue;
    }
    if (space && !out.empty()) out += ' ';
    space = false;
    out += c;
  }
  return out;
}

Problem loadProblem(const std::string& text) {
  auto source = tptp::parseProblem(text, [](const std::string& p) -> std::string {
    throw Error("unexpected include " + p);
  });
  auto assembled = tptp::assembleTheory(source);
  if (assembled.conjectures.size() != 1) throw Error("expected exactly one conjecture");
  return {text, std::move(assembled.theory), std::move(assembled.conjectures.front())};
}

namespace {

int uniform(std::mt19937& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
bool chance(std::mt19937& rng, double p) { return std::bernoulli_distribution(p)(rng); }
template <class T>
const T& pick(std::mt19937& rng, const std::vector<T>& v) {
  return v[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(v.size()) - 1))];
}

// Generator-side syntax, rendered to TPTP text.
struct RAtom {
  std::string pred;  // "=" for equality
  std::vector<std::string> args;
  bool negated = false;

  std::string text() const {
    if (pred == "=") return args[0] + (negated ? " != " : " = ") + args[1];
    std::string out = (negated ? "~" : "") + pred;
    if (args.empty()) return out;
    out += "(";
    for (std::size_t i = 0; i < args.size(); ++i) out += (i ? "," : "") + args[i];
    return out + ")";
  }
};

struct RDisjunct {
  std::vector<std::string> exists;
  std::vector<RAtom> atoms;
};

struct RFormula {
  std::vector<RAtom> premises;
  std::vector<RDisjunct> conclusion;  // empty: $false

  static std::string conj(const std::vector<RAtom>& atoms) {
    std::string out;
    for (const auto& a : atoms) out += (out.empty() ? "" : " & ") + a.text();
    return atoms.size() > 1 ? "(" + out + ")" : out;
  }

  std::string text(const std::vector<std::string>& universals) const {
    std::string concl;
    if (conclusion.empty()) concl = "$false";
    for (const auto& d : conclusion) {
      std::string body = conj(d.atoms);
      if (!d.exists.empty()) {
        std::string vs;
        for (const auto& v : d.exists) vs += (vs.empty() ? "" : ",") + v;
        body = "(?[" + vs + "]: " + body + ")";
      }
      concl += (concl.empty() ? "" : " | ") + body;
    }
    if (conclusion.size() > 1) concl = "(" + concl + ")";
    std::string body = premises.empty() ? concl : "(" + conj(premises) + " => " + concl + ")";
    std::set<std::string> seen;
    std::string vs;
    for (const auto& v : universals)
      if (seen.insert(v).second) vs += (vs.empty() ? "" : ",") + v;
    return vs.empty() ? body : "![" + vs + "]: " + body;
  }
};

bool isVar(const std::string& s) { return !s.empty() && std::isupper(static_cast<unsigned char>(s[0])); }

std::vector<std::string> universalsOf(const RFormula& f) {
  std::set<std::string> bound;
  for (const auto& d : f.conclusion) bound.insert(d.exists.begin(), d.exists.end());
  std::vector<std::string> out;
  auto add = [&](const RAtom& a) {
    for (const auto& t : a.args)
      if (isVar(t) && !bound.count(t) && std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  };
  for (const auto& a : f.premises) add(a);
  for (const auto& d : f.conclusion)
    for (const auto& a : d.atoms) add(a);
  return out;
}

struct Vocabulary {
  std::vector<std::pair<std::string, int>> preds;
  std::vector<std::string> constants;
  bool equality = false;
  bool negation = false;

  RAtom atom(std::mt19937& rng, const std::vector<std::string>& terms, bool allowNeg) const {
    if (equality && terms.size() >= 1 && chance(rng, 0.15)) {
      RAtom a{"=", {pick(rng, terms), pick(rng, terms)}, chance(rng, 0.5)};
      return a;
    }
    auto [name, arity] = pick(rng, preds);
    RAtom a{name, {}, allowNeg && negation && chance(rng, 0.15)};
    for (int i = 0; i < arity; ++i) a.args.push_back(pick(rng, terms));
    return a;
  }
};

Vocabulary vocabulary(std::mt19937& rng, int maxConstants, int minArity) {
  Vocabulary v;
  int n = uniform(rng, 1, 4);
  for (int i = 0; i < n; ++i) v.preds.emplace_back("p" + std::to_string(i), uniform(rng, minArity, 3));
  int k = uniform(rng, 0, maxConstants);
  for (int i = 0; i < k; ++i) v.constants.push_back("c" + std::to_string(i));
  return v;
}

std::vector<std::string> withConstants(std::vector<std::string> terms, const Vocabulary& v, std::mt19937& rng) {
  for (const auto& c : v.constants)
    if (chance(rng, 0.5)) terms.push_back(c);
  if (terms.empty() && !v.constants.empty()) terms.push_back(v.constants.front());
  return terms;
}

std::string fof(const std::string& name, const std::string& role, const std::string& body) {
  return "fof(" + name + ", " + role + ", " + body + ").\n";
}

// Drops existential variables that no atom mentions.
void tidy(RDisjunct& d) {
  std::erase_if(d.exists, [&](const std::string& e) {
    return std::none_of(d.atoms.begin(), d.atoms.end(), [&](const RAtom& a) {
      return std::find(a.args.begin(), a.args.end(), e) != a.args.end();
    });
  });
}

}  // namespace

std::string randomHornProblem(std::mt19937& rng) {
  Vocabulary v = vocabulary(rng, 3, 0);
  int conjectureVars = uniform(rng, v.constants.empty() ? 1 : 0, 6 - static_cast<int>(v.constants.size()));
  conjectureVars = std::min(conjectureVars, 3);
  std::vector<std::string> cvars;
  for (int i = 0; i < conjectureVars; ++i) cvars.push_back("V" + std::to_string(i));

  std::string text;
  int axioms = uniform(rng, 1, 8);
  for (int i = 0; i < axioms; ++i) {
    std::vector<std::string> vars{"X", "Y", "Z"};
    vars.resize(static_cast<std::size_t>(uniform(rng, 1, 3)));
    auto terms = withConstants(vars, v, rng);
    RFormula f;
    int premises = uniform(rng, 0, 3);
    for (int j = 0; j < premises; ++j) f.premises.push_back(v.atom(rng, terms, false));
    if (premises > 0 && chance(rng, 0.1)) {
      // $false
    } else {
      std::vector<std::string> concTerms;
      for (const auto& a : f.premises)
        for (const auto& t : a.args) concTerms.push_back(t);
      if (concTerms.empty() || chance(rng, 0.15)) concTerms = terms;
      f.conclusion.push_back({{}, {v.atom(rng, concTerms, false)}});
    }
    text += fof("ax" + std::to_string(i), "axiom", f.text(universalsOf(f)));
  }

  auto terms = withConstants(cvars, v, rng);
  RFormula goal;
  int premises = uniform(rng, 0, 3);
  for (int j = 0; j < premises; ++j) goal.premises.push_back(v.atom(rng, terms, false));
  RDisjunct d;
  int atoms = uniform(rng, 1, 2);
  for (int j = 0; j < atoms; ++j) d.atoms.push_back(v.atom(rng, terms, false));
  goal.conclusion.push_back(d);
  return text + fof("goal", "conjecture", goal.text(universalsOf(goal)));
}

namespace {

RFormula randomCoherentAxiom(std::mt19937& rng, const Vocabulary& v) {
  std::vector<std::string> vars{"X", "Y", "Z"};
  vars.resize(static_cast<std::size_t>(uniform(rng, 1, 3)));
  auto terms = withConstants(vars, v, rng);
  RFormula f;
  int premises = uniform(rng, 0, 2);
  for (int j = 0; j < premises; ++j) f.premises.push_back(v.atom(rng, terms, true));
  if (premises > 0 && chance(rng, 0.08)) return f;
  std::vector<std::string> base;
  for (const auto& a : f.premises)
    for (const auto& t : a.args) base.push_back(t);
  if (base.empty()) base = terms;
  int disjuncts = uniform(rng, 1, 2);
  for (int i = 0; i < disjuncts; ++i) {
    RDisjunct d;
    auto dterms = base;
    if (chance(rng, 0.3)) {
      d.exists.push_back("W" + std::to_string(i));
      dterms.push_back(d.exists.back());
    }
    int atoms = uniform(rng, 1, 2);
    for (int j = 0; j < atoms; ++j) d.atoms.push_back(v.atom(rng, dterms, true));
    tidy(d);
    f.conclusion.push_back(d);
  }
  return f;
}

std::string key(const RDisjunct& d) {
  std::vector<std::string> parts;
  for (const auto& a : d.atoms) parts.push_back(a.text());
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const auto& e : d.exists) out += e + ",";
  for (const auto& p : parts) out += p + ";";
  return out;
}

RFormula randomConjecture(std::mt19937& rng, const Vocabulary& v, const std::vector<RFormula>& axioms) {
  std::vector<std::string> cvars;
  int n = uniform(rng, 1, 3);
  for (int i = 0; i < n; ++i) cvars.push_back("V" + std::to_string(i));
  auto terms = withConstants(cvars, v, rng);
  RFormula goal;
  if (chance(rng, 0.5)) {
    const RFormula& ax = pick(rng, axioms);
    std::map<std::string, std::string> ren;
    for (const auto& u : universalsOf(ax)) ren[u] = pick(rng, terms);
    for (const auto& d : ax.conclusion)
      for (const auto& e : d.exists) ren[e] = "E" + e.substr(1);
    auto rename = [&](RAtom a) {
      for (auto& t : a.args)
        if (ren.count(t)) t = ren[t];
      return a;
    };
    for (const auto& a : ax.premises) goal.premises.push_back(rename(a));
    if (chance(rng, 0.3)) goal.premises.push_back(v.atom(rng, terms, true));
    for (const auto& d : ax.conclusion) {
      RDisjunct g;
      for (const auto& e : d.exists) g.exists.push_back(ren[e]);
      for (const auto& a : d.atoms) g.atoms.push_back(rename(a));
      goal.conclusion.push_back(g);
    }
  } else {
    int premises = uniform(rng, 0, 3);
    for (int j = 0; j < premises; ++j) goal.premises.push_back(v.atom(rng, terms, true));
    int disjuncts = uniform(rng, 1, 2);
    for (int i = 0; i < disjuncts; ++i) {
      RDisjunct d;
      auto dterms = terms;
      if (chance(rng, 0.3)) {
        d.exists.push_back("E" + std::to_string(i));
        dterms.push_back(d.exists.back());
      }
      int atoms = uniform(rng, 1, 2);
      for (int j = 0; j < atoms; ++j) d.atoms.push_back(v.atom(rng, dterms, true));
      tidy(d);
      goal.conclusion.push_back(d);
    }
  }
  std::set<std::string> seen;
  std::vector<RDisjunct> distinct;
  for (const auto& d : goal.conclusion)
    if (seen.insert(key(d)).second) distinct.push_back(d);
  goal.conclusion = distinct;
  return goal;
}

struct CoherentSource {
  Vocabulary vocabulary;
  std::vector<RFormula> axioms;
  std::string text;
};

CoherentSource randomCoherentTheory(std::mt19937& rng) {
  CoherentSource s;
  s.vocabulary = vocabulary(rng, 2, 1);
  s.vocabulary.equality = chance(rng, 0.5);
  s.vocabulary.negation = chance(rng, 0.5);
  int axioms = uniform(rng, 1, 6);
  for (int i = 0; i < axioms; ++i) {
    s.axioms.push_back(randomCoherentAxiom(rng, s.vocabulary));
    s.text += fof("ax" + std::to_string(i), "axiom", s.axioms.back().text(universalsOf(s.axioms.back())));
  }
  return s;
}

}  // namespace

std::string randomCoherentProblem(std::mt19937& rng) {
  auto s = randomCoherentTheory(rng);
  RFormula goal = randomConjecture(rng, s.vocabulary, s.axioms);
  return s.text + fof("goal", "conjecture", goal.text(universalsOf(goal)));
}

bool hornOracle(const Theory& theory, const NamedFormula& conjecture) {
  std::vector<std::string> domain;
  for (const auto& c : theory.signature.constants) domain.push_back(c.name);
  std::map<std::string, std::string> conjConst;
  int fresh = 0;
  for (const auto& v : conjecture.formula.universalVars) {
    conjConst[v.name] = "#v" + std::to_string(fresh++);
    domain.push_back(conjConst[v.name]);
  }

  using Ground = std::vector<std::string>;  // predicate, args...
  auto ground = [](const Atom& a, const std::map<std::string, std::string>& env) {
    Ground g{a.predicate};
    for (const auto& t : a.args) g.push_back(t.isVariable() ? env.at(t.name) : t.name);
    return g;
  };

  std::set<Ground> facts;
  for (const auto& a : conjecture.formula.premises) facts.insert(ground(a, conjConst));
  bool bottom = false;

  for (bool changed = true; changed && !bottom;) {
    changed = false;
    for (const auto& ax : theory.axioms) {
      const auto& f = ax.formula;
      if (f.conclusion.size() > 1 || (f.conclusion.size() == 1 && !f.conclusion[0].existentialVars.empty()))
        throw Error("oracle: not a Horn axiom: " + ax.name);
      std::vector<std::size_t> idx(f.universalVars.size(), 0);
      if (!f.universalVars.empty() && domain.empty()) continue;
      for (;;) {
        std::map<std::string, std::string> env;
        for (std::size_t i = 0; i < idx.size(); ++i) env[f.universalVars[i].name] = domain[idx[i]];
        bool fires = std::all_of(f.premises.begin(), f.premises.end(),
                                 [&](const Atom& a) { return facts.count(ground(a, env)) > 0; });
        if (fires) {
          if (f.conclusion.empty()) bottom = true;
          else
            for (const auto& a : f.conclusion[0].conjuncts) changed |= facts.insert(ground(a, env)).second;
        }
        std::size_t i = 0;
        while (i < idx.size() && ++idx[i] == domain.size()) idx[i++] = 0;
        if (i == idx.size()) break;
      }
    }
  }
  if (bottom) return true;
  const auto& goal = conjecture.formula.conclusion;
  if (goal.empty()) return false;
  return std::any_of(goal.begin(), goal.end(), [&](const Disjunct& d) {
    return std::all_of(d.conjuncts.begin(), d.conjuncts.end(),
                       [&](const Atom& a) { return facts.count(ground(a, conjConst)) > 0; });
  });
}

SearchLimits quickLimits() {
  SearchLimits limits;
  limits.maxMpSteps = 256;
  limits.maxSplitDepth = 4;
  limits.wallClock = std::chrono::milliseconds(200);
  return limits;
}

VernacularDocument randomDocument(std::mt19937& rng) {
  static const std::vector<std::string> words{"Ada", "B. <Curry>", "R&D", "\"quoted\"", "it's", "x>y", "plain",
                                              "ArgoCLP", "clv"};
  for (;;) {
    auto s = randomCoherentTheory(rng);
    std::string text = s.text;
    int items = uniform(rng, 1, 5);
    for (int i = 0; i < items; ++i) {
      RFormula goal = randomConjecture(rng, s.vocabulary, s.axioms);
      text += fof("item_" + std::to_string(i), "conjecture", goal.text(universalsOf(goal)));
    }
    tptp::AssembledProblem assembled;
    try {
      auto source = tptp::parseProblem(text, [](const std::string&) -> std::string { throw Error("include"); });
      assembled = tptp::assembleTheory(source, {true, "random_" + std::to_string(uniform(rng, 0, 999))});
    } catch (const Error&) {
      continue;
    }
    VernacularDocument doc;
    doc.frontpage = {pick(rng, words) + " " + pick(rng, words), pick(rng, words),
                     "20" + std::to_string(uniform(rng, 10, 29)) + "-0" + std::to_string(uniform(rng, 1, 9)) + "-1" +
                         std::to_string(uniform(rng, 0, 9))};
    doc.theory = assembled.theory;
    int chapters = uniform(rng, 1, 3);
    for (int c = 0; c < chapters; ++c) doc.chapters.push_back({"chapter " + pick(rng, words), {}});
    for (const auto& conj : assembled.conjectures) {
      TheoremItem item{conj.name, conj.formula, {}};
      auto result = prove(doc.theory, conj, quickLimits());
      if (result.status == ProveStatus::Proved) {
        item.proofs.push_back(*result.proof);
        if (chance(rng, 0.3)) item.proofs.front().name = "proof_" + conj.name;
        if (chance(rng, 0.2)) item.proofs.push_back(item.proofs.front());
      }
      doc.chapters[static_cast<std::size_t>(uniform(rng, 0, chapters - 1))].items.push_back(std::move(item));
    }
    return doc;
  }
}

namespace {

void collectMutants(const ProofTree& node, const std::string& path, std::vector<std::string> known,
                    const std::function<ProofTree(const std::function<void(ProofTree&)>&)>& rebuild,
                    std::vector<Mutant>& out) {
  for (std::size_t i = 0; i < node.steps.size(); ++i) {
    const auto* mp = std::get_if<ModusPonensStep>(&node.steps[i].kind);
    std::string site = path + "/step[" + std::to_string(i) + "]";
    if (!mp) continue;
    for (std::size_t j = 0; j < mp->premises.size(); ++j)
      out.push_back({"drop-premise", site, rebuild([&](ProofTree& t) {
                       auto& m = std::get<ModusPonensStep>(t.steps[i].kind);
                       m.premises.erase(m.premises.begin() + static_cast<std::ptrdiff_t>(j));
                     })});
    for (std::size_t w = 0; w < mp->witnesses.size() && !known.empty(); ++w) {
      std::string stale = known.front();
      out.push_back({"stale-witness", site, rebuild([&](ProofTree& t) {
                       auto& m = std::get<ModusPonensStep>(t.steps[i].kind);
                       std::string old = m.witnesses[w];
                       m.witnesses[w] = stale;
                       for (auto& conj : m.derived)
                         for (auto& a : conj)
                           for (auto& arg : a.args)
                             if (arg.name == old) arg.name = stale;
                     })});
    }
    for (const auto& w : mp->witnesses) known.push_back(w);
  }
  std::string site = path + "/closing";
  if (const auto* from = std::get_if<FromClosing>(&node.closing.kind)) {
    (void)from;
    out.push_back({"wrong-thesis-index", site, rebuild([&](ProofTree& t) {
                     auto& f = std::get<FromClosing>(t.closing.kind);
                     f.disjunct += 1;
                   })});
    out.push_back({"wrong-thesis-index", site, rebuild([&](ProofTree& t) {
                     auto& f = std::get<FromClosing>(t.closing.kind);
                     f.disjunct = f.disjunct == 0 ? -1 : 0;
                   })});
  } else if (const auto* efq = std::get_if<EfqClosing>(&node.closing.kind)) {
    if (!efq->axiom.empty())
      for (std::size_t j = 0; j < efq->facts.size(); ++j)
        out.push_back({"drop-premise", site, rebuild([&](ProofTree& t) {
                         auto& e = std::get<EfqClosing>(t.closing.kind);
                         e.facts.erase(e.facts.begin() + static_cast<std::ptrdiff_t>(j));
                       })});
  } else {
    const auto& cs = std::get<CaseSplit>(node.closing.kind);
    out.push_back({"single-branch-split", site, rebuild([&](ProofTree& t) {
                     auto& c = std::get<CaseSplit>(t.closing.kind);
                     c.branches.resize(1);
                   })});
    out.push_back({"single-branch-split", site, rebuild([&](ProofTree& t) {
                     auto& c = std::get<CaseSplit>(t.closing.kind);
                     c.branches.resize(1);
                     c.disjunction.resize(1);
                   })});
    for (std::size_t b = 0; b < cs.branches.size(); ++b) {
      auto sub = [&, b](const std::function<void(ProofTree&)>& edit) {
        return rebuild([&](ProofTree& t) { edit(std::get<CaseSplit>(t.closing.kind).branches[b]); });
      };
      collectMutants(cs.branches[b], path + "/split[" + std::to_string(b) + "]", known, sub, out);
    }
  }
}

}  // namespace

std::vector<Mutant> mutants(const ProofTree& proof, const NamedFormula& conjecture, const Theory& theory) {
  std::vector<std::string> known;
  for (const auto& [v, c] : conjectureConstants(theory, conjecture.formula)) known.push_back(c.name);
  for (const auto& c : theory.signature.constants) known.push_back(c.name);
  std::vector<Mutant> out;
  auto root = [&](const std::function<void(ProofTree&)>& edit) {
    ProofTree copy = proof;
    edit(copy);
    return copy;
  };
  collectMutants(proof, "", known, root, out);
  return out;
}

}  // namespace clv::testing
