#include "clv/engine.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_map>

#include "clv/errors.hpp"
#include "clv/union_find.hpp"

namespace clv {

std::string_view toString(ProveStatus status) {
  switch (status) {
    case ProveStatus::Proved: return "PROVED";
    case ProveStatus::Exhausted: return "EXHAUSTED";
    case ProveStatus::Timeout: return "TIMEOUT";
  }
  return "?";
}

std::vector<std::pair<int, int>> SearchLimits::schedule() const {
  if (!deepeningSchedule.empty()) {
    for (std::size_t i = 0; i < deepeningSchedule.size(); ++i) {
      auto [steps, splits] = deepeningSchedule[i];
      if (steps < 0 || splits < 0) throw Error("deepening schedule entries must be non-negative");
      if (i == 0) continue;
      auto [ps, pd] = deepeningSchedule[i - 1];
      if (steps < ps || splits < pd || (steps == ps && splits == pd))
        throw Error("deepening schedule must increase from round to round");
    }
    return deepeningSchedule;
  }
  if (maxMpSteps < 0 || maxSplitDepth < 0) throw Error("search limits must be non-negative");
  std::vector<std::pair<int, int>> rounds;
  for (int k = 0;; ++k) {
    long long steps = k < 30 ? (8LL << k) : maxMpSteps;
    int s = static_cast<int>(std::min<long long>(steps, maxMpSteps));
    int d = std::min(k, maxSplitDepth);
    rounds.emplace_back(s, d);
    if (s == maxMpSteps && d == maxSplitDepth) break;
  }
  return rounds;
}

std::vector<std::string> parseHints(std::string_view text) {
  std::vector<std::string> names;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) line.remove_prefix(1);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.remove_suffix(1);
    if (!line.empty()) names.emplace_back(line);
    pos = end + 1;
  }
  return names;
}

namespace {

constexpr int kEq = 0;
constexpr int kNeq = 1;

using GAtom = std::vector<int>;  // predicate id, then constant ids

struct GAtomHash {
  std::size_t operator()(const GAtom& a) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (int x : a) h = (h ^ static_cast<std::size_t>(x + 0x9e3779b9)) * 1099511628211ull;
    return h;
  }
};

// Pattern atom: argument >= 0 is a constant id, < 0 is variable -(index + 1).
struct PAtom {
  int pred = 0;
  std::vector<int> args;
};

int varIndex(int arg) { return -arg - 1; }

struct CDisjunct {
  std::vector<int> exVars;
  std::vector<PAtom> conjuncts;
};

struct CAxiom {
  const NamedFormula* source = nullptr;
  bool generative = false;  // introduces witnesses
  std::vector<std::string> varNames;
  std::vector<int> varSort;
  int universals = 0;
  std::vector<PAtom> premises;
  std::vector<CDisjunct> conclusion;
  bool decidability = false;
};

struct Symbols {
  std::vector<std::string> preds{std::string(kEquality), std::string(kDisequality)};
  std::unordered_map<std::string, int> predId{{std::string(kEquality), kEq}, {std::string(kDisequality), kNeq}};
  std::vector<int> partner{-1, -1};
  std::vector<std::string> consts;
  std::vector<int> constSort;
  std::unordered_map<std::string, int> constId;
  std::vector<std::string> sorts;
  std::unordered_map<std::string, int> sortId;

  int sort(const std::string& name) {
    auto [it, fresh] = sortId.emplace(name, static_cast<int>(sorts.size()));
    if (fresh) sorts.push_back(name);
    return it->second;
  }
  int pred(const std::string& name) {
    auto [it, fresh] = predId.emplace(name, static_cast<int>(preds.size()));
    if (fresh) {
      preds.push_back(name);
      partner.push_back(-1);
    }
    return it->second;
  }
  int constant(const std::string& name, int sortIndex) {
    auto [it, fresh] = constId.emplace(name, static_cast<int>(consts.size()));
    if (fresh) {
      consts.push_back(name);
      constSort.push_back(sortIndex);
    }
    return it->second;
  }
};

struct Deriv {
  enum Kind { Initial, Mp, Assume, Rewrite } kind = Initial;
  const CAxiom* axiom = nullptr;
  std::vector<int> binding;   // universal values
  std::vector<int> premises;  // fact ids, -1 for reflexive equations
  std::vector<int> witnesses;
  std::vector<std::vector<GAtom>> derived;
  int source = -1;
  std::vector<int> equations;
  GAtom produced;
};

struct Fact {
  GAtom atom;
  int deriv = -1;
};

struct Disj {
  std::vector<std::vector<GAtom>> disjuncts;
  int deriv = -1;
};

struct BottomRec {
  std::vector<int> facts;
  const CAxiom* axiom = nullptr;
  std::vector<int> binding;
};

struct State {
  std::vector<Deriv> derivs;
  std::vector<Fact> facts;
  std::vector<char> active;
  std::unordered_map<GAtom, int, GAtomHash> literal;  // every fact of the branch
  std::unordered_map<GAtom, int, GAtomHash> index;    // active canonical facts
  std::vector<std::vector<int>> byPred;
  UnionFind uf;
  std::vector<int> constants;
  std::vector<Disj> disjs;
  std::deque<int> pending;
  std::optional<BottomRec> bottom;
  bool merged = false;
  int mpCount = 0;
  int depth = 0;
};

struct TimeoutSignal {};

class Kernel {
 public:
  Symbols sym;
  std::deque<CAxiom> axioms;  // stable addresses
  std::vector<CDisjunct> goal;
  std::vector<std::string> goalVarNames;
  std::vector<int> goalVarSort;
  std::vector<int> conjConsts;
  std::vector<int> theoryConsts;
  std::vector<GAtom> initialPremises;
  const Theory* theory = nullptr;
  int witnessCounter = 0;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  long ticks = 0;

  Kernel(const Theory& th, const NamedFormula& conjecture) : theory(&th) {
    for (const auto& s : th.signature.sorts) sym.sort(s.name);
    for (const auto& p : th.signature.predicates) sym.pred(p.name);
    for (const auto& p : th.signature.predicates)
      if (p.negatedPartner) {
        int a = sym.pred(p.name), b = sym.pred(*p.negatedPartner);
        sym.partner[a] = b;
        sym.partner[b] = a;
      }
    for (const auto& c : th.signature.constants) theoryConsts.push_back(sym.constant(c.name, sym.sort(c.sort)));
    auto cc = conjectureConstants(th, conjecture.formula);
    std::unordered_map<std::string, int> universal;
    for (const auto& [v, c] : cc) {
      int id = sym.constant(c.name, sym.sort(c.sort));
      conjConsts.push_back(id);
      universal[v.name] = id;
    }
    for (const auto& a : conjecture.formula.premises) {
      GAtom g{predOf(a)};
      for (const auto& t : a.args) g.push_back(t.isVariable() ? universal.at(t.name) : constOf(t.name));
      initialPremises.push_back(std::move(g));
    }
    for (const auto& d : conjecture.formula.conclusion) {
      CDisjunct cd;
      std::unordered_map<std::string, int> local;
      for (const auto& v : d.existentialVars) {
        int idx = static_cast<int>(goalVarNames.size());
        goalVarNames.push_back(v.name);
        goalVarSort.push_back(sym.sort(v.sort));
        local[v.name] = idx;
        cd.exVars.push_back(idx);
      }
      for (const auto& a : d.conjuncts) {
        PAtom p{predOf(a), {}};
        for (const auto& t : a.args) {
          if (!t.isVariable())
            p.args.push_back(constOf(t.name));
          else if (auto it = local.find(t.name); it != local.end())
            p.args.push_back(-(it->second + 1));
          else
            p.args.push_back(universal.at(t.name));
        }
        cd.conjuncts.push_back(std::move(p));
      }
      goal.push_back(std::move(cd));
    }
  }

  int predOf(const Atom& a) {
    if (a.negated) {
      if (a.isEquality()) return kNeq;
      int p = sym.pred(a.predicate);
      if (sym.partner[p] < 0) throw Error("predicate " + a.predicate + " occurs negated without a partner");
      return sym.partner[p];
    }
    return sym.pred(a.predicate);
  }

  int constOf(const std::string& name) {
    auto it = sym.constId.find(name);
    if (it != sym.constId.end()) return it->second;
    const Constant* c = theory->signature.findConstant(name);
    return sym.constant(name, sym.sort(c ? c->sort : std::string(kDefaultSort)));
  }

  const CAxiom& compile(const NamedFormula& f) {
    CAxiom ax;
    ax.source = &f;
    ax.decidability = isDecidabilityAxiom(f, theory->signature);
    std::unordered_map<std::string, int> universal;
    for (const auto& v : f.formula.universalVars) {
      universal[v.name] = static_cast<int>(ax.varNames.size());
      ax.varNames.push_back(v.name);
      ax.varSort.push_back(sym.sort(v.sort));
    }
    ax.universals = static_cast<int>(ax.varNames.size());
    auto pattern = [&](const Atom& a, const std::unordered_map<std::string, int>& local) {
      PAtom p{predOf(a), {}};
      for (const auto& t : a.args) {
        if (!t.isVariable()) {
          p.args.push_back(constOf(t.name));
          continue;
        }
        auto it = local.find(t.name);
        if (it == local.end()) {
          it = universal.find(t.name);
          if (it == universal.end()) throw UnboundVariable(t.name);
        }
        p.args.push_back(-(it->second + 1));
      }
      return p;
    };
    for (const auto& a : f.formula.premises) ax.premises.push_back(pattern(a, {}));
    for (const auto& d : f.formula.conclusion) {
      CDisjunct cd;
      std::unordered_map<std::string, int> local;
      for (const auto& v : d.existentialVars) {
        int idx = static_cast<int>(ax.varNames.size());
        ax.varNames.push_back(v.name);
        ax.varSort.push_back(sym.sort(v.sort));
        local[v.name] = idx;
        cd.exVars.push_back(idx);
        ax.generative = true;
      }
      for (const auto& a : d.conjuncts) cd.conjuncts.push_back(pattern(a, local));
      ax.conclusion.push_back(std::move(cd));
    }
    axioms.push_back(std::move(ax));
    return axioms.back();
  }

  void tick() {
    if (deadline && (++ticks & 1023) == 0 && std::chrono::steady_clock::now() > *deadline) throw TimeoutSignal{};
  }

  // ---- basic fact-base operations ----

  static std::vector<int>& predList(State& s, int pred) {
    if (static_cast<int>(s.byPred.size()) <= pred) s.byPred.resize(pred + 1);
    return s.byPred[pred];
  }

  GAtom canonical(const State& s, GAtom a) const {
    for (std::size_t i = 1; i < a.size(); ++i) a[i] = s.uf.find(a[i]);
    return a;
  }

  static GAtom key(GAtom a) {
    if (a[0] == kNeq && a[1] > a[2]) std::swap(a[1], a[2]);
    return a;
  }

  bool holds(const State& s, const GAtom& a) const {
    GAtom c = canonical(s, a);
    if (c[0] == kEq) return c[1] == c[2];
    return s.index.count(key(c)) > 0;
  }

  int pushFact(State& s, const GAtom& a, int deriv) {
    int fid = static_cast<int>(s.facts.size());
    s.facts.push_back({a, deriv});
    s.active.push_back(0);
    s.literal.emplace(a, fid);
    return fid;
  }

  int pushDeriv(State& s, Deriv d) {
    s.derivs.push_back(std::move(d));
    return static_cast<int>(s.derivs.size()) - 1;
  }

  static void appendUnique(std::vector<int>& out, const std::vector<int>& more) {
    for (int x : more)
      if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
  }

  std::vector<int> explainArgs(const State& s, const GAtom& from, const GAtom& to) const {
    std::vector<int> eqs;
    for (std::size_t i = 1; i < from.size(); ++i)
      if (from[i] != to[i]) appendUnique(eqs, s.uf.explain(from[i], to[i]));
    return eqs;
  }

  void setBottom(State& s, BottomRec b) {
    if (!s.bottom) s.bottom = std::move(b);
  }

  // A rewritten fact takes the matching position of the fact it replaces.
  void activate(State& s, int fid, const GAtom& k, int replaces = -1) {
    s.active[fid] = 1;
    s.index[k] = fid;
    auto& list = predList(s, k[0]);
    auto slot = replaces >= 0 ? std::find(list.begin(), list.end(), replaces) : list.end();
    if (slot != list.end())
      *slot = fid;
    else
      list.push_back(fid);
    int p = k[0] >= 0 && k[0] < static_cast<int>(sym.partner.size()) ? sym.partner[k[0]] : -1;
    if (p >= 0) {
      GAtom other = k;
      other[0] = p;
      if (auto it = s.index.find(other); it != s.index.end())
        setBottom(s, BottomRec{{std::min(fid, it->second), std::max(fid, it->second)}, nullptr, {}});
    }
  }

  void addCanonical(State& s, int fid, bool inPlace = false) {
    GAtom a = s.facts[fid].atom;
    if (a[0] == kNeq && s.uf.find(a[1]) == s.uf.find(a[2])) {
      BottomRec b;
      b.facts.push_back(fid);
      appendUnique(b.facts, s.uf.explain(a[1], a[2]));
      setBottom(s, std::move(b));
      return;
    }
    GAtom c = canonical(s, a);
    GAtom k = key(c);
    if (s.index.count(k)) return;
    int target = fid;
    if (c != a) {
      if (auto it = s.literal.find(c); it != s.literal.end()) {
        target = it->second;
      } else {
        Deriv d;
        d.kind = Deriv::Rewrite;
        d.source = fid;
        d.equations = explainArgs(s, a, c);
        d.produced = c;
        int did = pushDeriv(s, std::move(d));
        target = pushFact(s, c, did);
      }
    }
    activate(s, target, k, inPlace ? fid : -1);
  }

  void rewriteAll(State& s, int retired) {
    std::size_t n = s.facts.size();
    for (std::size_t fid = 0; fid < n; ++fid) {
      if (!s.active[fid]) continue;
      const GAtom& a = s.facts[fid].atom;
      if (std::find(a.begin() + 1, a.end(), retired) == a.end()) continue;
      s.active[fid] = 0;
      s.index.erase(key(a));
      addCanonical(s, static_cast<int>(fid), true);
    }
  }

  void insertFact(State& s, const GAtom& a, int deriv) {
    if (s.literal.count(a)) return;
    int fid = pushFact(s, a, deriv);
    if (a[0] == kEq) {
      int x = s.uf.find(a[1]), y = s.uf.find(a[2]);
      if (x == y) return;
      s.uf.merge(a[1], a[2], fid);
      s.merged = true;
      rewriteAll(s, std::max(x, y));
      return;
    }
    addCanonical(s, fid);
  }

  // A fact of the branch whose atom is literally `a` (which must hold),
  // deriving it by substitution when needed. -1 for reflexive equations.
  int makeLiteral(State& s, const GAtom& a) {
    if (a[0] == kEq && a[1] == a[2]) return -1;
    if (auto it = s.literal.find(a); it != s.literal.end()) return it->second;
    Deriv d;
    d.kind = Deriv::Rewrite;
    d.produced = a;
    if (a[0] == kEq) {
      std::vector<int> path = s.uf.explain(a[1], a[2]);
      d.source = path.front();
      d.equations.assign(path.begin() + 1, path.end());
    } else {
      GAtom c = canonical(s, a);
      int src = s.index.at(key(c));
      const GAtom& sa = s.facts[src].atom;
      d.source = src;
      if (a[0] == kNeq && !(sa[1] == c[1] && sa[2] == c[2])) {
        appendUnique(d.equations, s.uf.explain(a[1], sa[2]));
        appendUnique(d.equations, s.uf.explain(a[2], sa[1]));
      } else {
        d.equations = explainArgs(s, a, sa);
      }
    }
    int did = pushDeriv(s, std::move(d));
    return pushFact(s, a, did);
  }

  int newWitness(State& s, int sortIndex) {
    std::string name;
    do name = "w" + std::to_string(++witnessCounter);
    while (sym.constId.count(name));
    int id = sym.constant(name, sortIndex);
    s.constants.push_back(id);
    s.uf.ensure(id + 1);
    return id;
  }

  static GAtom instantiate(const PAtom& p, const std::vector<int>& bind) {
    GAtom g{p.pred};
    for (int a : p.args) g.push_back(a >= 0 ? a : bind[varIndex(a)]);
    return g;
  }

  // ---- matching ----

  // While set, matching only binds variables to constants whose position in
  // the branch's constant list is at most `cap`.
  std::vector<int> capPos;
  int cap = -1;
  bool capped(int c) const { return cap >= 0 && capPos[c] > cap; }

  template <class F>
  bool enumerate(const State& s, const std::vector<int>& vars, std::size_t k, std::vector<int>& bind,
                 const std::vector<int>& varSort, F& cb) {
    if (k == vars.size()) return cb(bind);
    int v = vars[k];
    if (bind[v] >= 0) return enumerate(s, vars, k + 1, bind, varSort, cb);
    for (int c : s.constants) {
      if (s.uf.find(c) != c || sym.constSort[c] != varSort[v] || capped(c)) continue;
      bind[v] = c;
      bool go = enumerate(s, vars, k + 1, bind, varSort, cb);
      bind[v] = -1;
      if (!go) return false;
    }
    return true;
  }

  // Joins `pats` left to right against the active facts, then binds the
  // still-free variables of `tail` to every canonical constant. `cb` returns
  // false to stop; the result is false iff stopped.
  template <class F>
  bool match(const State& s, const std::vector<PAtom>& pats, std::size_t k, std::vector<int>& bind,
             const std::vector<int>& varSort, const std::vector<int>& tail, F& cb) {
    if (k == pats.size()) return enumerate(s, tail, 0, bind, varSort, cb);
    tick();
    const PAtom& p = pats[k];
    auto value = [&](int a) { return a >= 0 ? s.uf.find(a) : bind[varIndex(a)]; };
    if (p.pred == kEq) {
      int a = value(p.args[0]), b = value(p.args[1]);
      if (a >= 0 && b >= 0) return a == b ? match(s, pats, k + 1, bind, varSort, tail, cb) : true;
      if (a >= 0 || b >= 0) {
        int v = varIndex(a >= 0 ? p.args[1] : p.args[0]);
        int c = a >= 0 ? a : b;
        if (sym.constSort[c] != varSort[v] || capped(c)) return true;
        bind[v] = c;
        bool go = match(s, pats, k + 1, bind, varSort, tail, cb);
        bind[v] = -1;
        return go;
      }
      int v0 = varIndex(p.args[0]), v1 = varIndex(p.args[1]);
      for (int c : s.constants) {
        if (s.uf.find(c) != c || sym.constSort[c] != varSort[v0] || capped(c)) continue;
        bind[v0] = c;
        bind[v1] = c;
        bool go = match(s, pats, k + 1, bind, varSort, tail, cb);
        bind[v0] = -1;
        bind[v1] = -1;
        if (!go) return false;
      }
      return true;
    }
    if (p.pred >= static_cast<int>(s.byPred.size())) return true;
    const std::vector<int>& ids = s.byPred[p.pred];
    std::vector<int> fresh;
    for (int fid : ids) {
      if (!s.active[fid]) continue;
      const GAtom& f = s.facts[fid].atom;
      int orientations = p.pred == kNeq ? 2 : 1;
      for (int o = 0; o < orientations; ++o) {
        fresh.clear();
        bool ok = true;
        for (std::size_t j = 0; j < p.args.size() && ok; ++j) {
          int fa = f[1 + (o ? 1 - j : j)];
          int pa = p.args[j];
          if (pa >= 0) {
            ok = s.uf.find(pa) == fa;
          } else {
            int v = varIndex(pa);
            if (bind[v] < 0) {
              if (capped(fa)) {
                ok = false;
                break;
              }
              bind[v] = fa;
              fresh.push_back(v);
            } else {
              ok = bind[v] == fa;
            }
          }
        }
        bool go = true;
        if (ok) {
          std::vector<int> undo = fresh;
          go = match(s, pats, k + 1, bind, varSort, tail, cb);
          for (int v : undo) bind[v] = -1;
        } else {
          for (int v : fresh) bind[v] = -1;
        }
        if (!go) return false;
      }
    }
    return true;
  }

  static std::vector<int> universalsOf(const CAxiom& ax) {
    std::vector<int> vars(ax.universals);
    for (int i = 0; i < ax.universals; ++i) vars[i] = i;
    return vars;
  }

  std::vector<std::vector<int>> matchAll(const State& s, const CAxiom& ax) {
    std::vector<std::vector<int>> out;
    std::vector<int> bind(ax.varNames.size(), -1);
    auto tail = universalsOf(ax);
    auto cb = [&](const std::vector<int>& b) {
      out.push_back(b);
      return true;
    };
    match(s, ax.premises, 0, bind, ax.varSort, tail, cb);
    return out;
  }

  bool redundant(const State& s, const CAxiom& ax, const std::vector<int>& binding) {
    if (ax.conclusion.size() > 1)
      for (const auto& dj : s.disjs) {
        const Deriv& d = s.derivs[dj.deriv];
        if (d.axiom != &ax) continue;
        bool same = true;
        for (int i = 0; i < ax.universals && same; ++i) same = s.uf.find(d.binding[i]) == s.uf.find(binding[i]);
        if (same) return true;
      }
    for (const auto& d : ax.conclusion) {
      std::vector<int> bind = binding;
      for (int v : d.exVars) bind[v] = -1;
      bool found = false;
      auto cb = [&](const std::vector<int>&) {
        found = true;
        return false;
      };
      match(s, d.conjuncts, 0, bind, ax.varSort, d.exVars, cb);
      if (found) return true;
    }
    return false;
  }

  std::optional<std::pair<int, std::vector<int>>> goalMatch(const State& s) {
    for (std::size_t j = 0; j < goal.size(); ++j) {
      std::vector<int> bind(goalVarNames.size(), -1);
      std::optional<std::vector<int>> found;
      auto cb = [&](const std::vector<int>& b) {
        found = b;
        return false;
      };
      match(s, goal[j].conjuncts, 0, bind, goalVarSort, goal[j].exVars, cb);
      if (found) return std::make_pair(static_cast<int>(j), *found);
    }
    return std::nullopt;
  }

  bool disjunctionSatisfied(const State& s, const Disj& d) const {
    for (const auto& conj : d.disjuncts)
      if (std::all_of(conj.begin(), conj.end(), [&](const GAtom& a) { return holds(s, a); })) return true;
    return false;
  }

  engine::MpOutcome applyMp(State& s, const CAxiom& ax, const std::vector<int>& binding) {
    std::vector<int> premiseFacts;
    for (const auto& p : ax.premises) premiseFacts.push_back(makeLiteral(s, instantiate(p, binding)));
    std::vector<int> universals(binding.begin(), binding.begin() + ax.universals);
    ++s.mpCount;
    if (ax.conclusion.empty()) {
      setBottom(s, BottomRec{premiseFacts, &ax, universals});
      return engine::MpOutcome::Bottom;
    }
    Deriv d;
    d.kind = Deriv::Mp;
    d.axiom = &ax;
    d.binding = universals;
    d.premises = std::move(premiseFacts);
    std::vector<int> bind = binding;
    for (const auto& dj : ax.conclusion)
      for (int v : dj.exVars) {
        bind[v] = newWitness(s, ax.varSort[v]);
        d.witnesses.push_back(bind[v]);
      }
    for (const auto& dj : ax.conclusion) {
      std::vector<GAtom> conj;
      for (const auto& p : dj.conjuncts) conj.push_back(instantiate(p, bind));
      d.derived.push_back(std::move(conj));
    }
    auto derived = d.derived;
    int did = pushDeriv(s, std::move(d));
    if (derived.size() == 1) {
      for (const auto& a : derived[0]) insertFact(s, a, did);
      return engine::MpOutcome::NewFacts;
    }
    s.disjs.push_back({std::move(derived), did});
    s.pending.push_back(static_cast<int>(s.disjs.size()) - 1);
    return engine::MpOutcome::NewDisjunction;
  }

  void assume(State& s, int disj, int branch) {
    Deriv d;
    d.kind = Deriv::Assume;
    int did = pushDeriv(s, std::move(d));
    auto atoms = s.disjs[disj].disjuncts[branch];
    for (const auto& a : atoms) insertFact(s, a, did);
  }

  State initialState() {
    State s;
    for (int c : theoryConsts) s.constants.push_back(c);
    for (int c : conjConsts)
      if (std::find(s.constants.begin(), s.constants.end(), c) == s.constants.end()) s.constants.push_back(c);
    s.uf.ensure(static_cast<int>(sym.consts.size()));
    s.derivs.push_back(Deriv{});
    for (const auto& a : initialPremises) insertFact(s, a, 0);
    s.merged = false;
    return s;
  }

  // ---- conversion back to logic-core ----

  Atom toAtom(const GAtom& g) const {
    Atom a;
    a.predicate = sym.preds[g[0]];
    for (std::size_t i = 1; i < g.size(); ++i) a.args.push_back(Term::constant(sym.consts[g[i]]));
    return a;
  }

  NameBinding names(const CAxiom& ax, const std::vector<int>& universals) const {
    NameBinding b;
    for (int i = 0; i < ax.universals; ++i) b.emplace_back(ax.varNames[i], sym.consts[universals[i]]);
    return b;
  }
};

// ---- search ----

struct Trace {
  State state;
  int start = 0;
  enum Kind { From, Efq, Split } kind = From;
  int disjunct = -1;
  std::vector<int> goalBind;
  std::vector<GAtom> fromAtoms;
  std::vector<int> fromFacts;
  BottomRec bottom;
  int split = -1;
  std::vector<Trace> children;
};

class Prover : public Kernel {
 public:
  std::vector<const CAxiom*> rules;
  std::vector<const CAxiom*> deciders;
  int maxSteps = 0;
  int maxSplits = 0;
  bool limitHit = false;

  using Kernel::Kernel;

  std::optional<Trace> search(State s, int start) {
    for (;;) {
      tick();
      if (s.bottom) return efqLeaf(std::move(s), start);
      if (auto g = goalMatch(s)) return fromLeaf(std::move(s), start, g->first, g->second);
      bool progress = saturatePass(s);
      if (limitHit) return std::nullopt;
      if (progress) continue;

      while (!s.pending.empty() && disjunctionSatisfied(s, s.disjs[s.pending.front()])) s.pending.pop_front();
      if (!s.pending.empty()) return split(std::move(s), start);
      if (decide(s)) continue;
      return std::nullopt;
    }
  }

 private:
  // One round of mp: every non-redundant instance of the witness-free rules,
  // in rule and binding order. Only when none applies, a single instance of
  // a rule with existentials, preferring bindings over the oldest constants.
  bool saturatePass(State& s) {
    bool applied = false;
    for (const CAxiom* ax : rules) {
      if (ax->generative) continue;
      auto bindings = matchAll(s, *ax);
      for (const auto& b : bindings) {
        tick();
        if (redundant(s, *ax, b)) continue;
        if (!spend(s)) return false;
        s.merged = false;
        applyMp(s, *ax, b);
        applied = true;
        if (s.bottom || s.merged || goalMatch(s)) return true;
      }
    }
    if (applied) return true;
    auto next = oldestGenerative(s);
    if (!next) return false;
    if (!spend(s)) return false;
    applyMp(s, *next->first, next->second);
    return true;
  }

  bool spend(const State& s) {
    if (s.mpCount < maxSteps) return true;
    limitHit = true;
    return false;
  }

  std::optional<std::pair<const CAxiom*, std::vector<int>>> oldestGenerative(const State& s) {
    capPos.assign(sym.consts.size(), -1);
    int n = 0;
    for (int c : s.constants)
      if (s.uf.find(c) == c) capPos[c] = n++;
    std::optional<std::pair<const CAxiom*, std::vector<int>>> found;
    for (int level = 0; level < std::max(n, 1) && !found; ++level) {
      for (const CAxiom* ax : rules) {
        if (!ax->generative) continue;
        std::vector<int> bind(ax->varNames.size(), -1);
        auto tail = universalsOf(*ax);
        auto cb = [&](const std::vector<int>& b) {
          tick();
          int top = -1;
          for (int i = 0; i < ax->universals; ++i) top = std::max(top, capPos[b[i]]);
          if (top != level && !(level == 0 && top < 0)) return true;
          cap = -1;
          bool red = redundant(s, *ax, b);
          cap = level;
          if (red) return true;
          found.emplace(ax, b);
          return false;
        };
        cap = level;
        match(s, ax->premises, 0, bind, ax->varSort, tail, cb);
        cap = -1;
        if (found) break;
      }
    }
    return found;
  }

  std::optional<Trace> split(State s, int start) {
    if (s.depth >= maxSplits) {
      limitHit = true;
      return std::nullopt;
    }
    int dj = s.pending.front();
    s.pending.pop_front();
    Trace node;
    node.kind = Trace::Split;
    node.split = dj;
    node.start = start;
    for (std::size_t i = 0; i < s.disjs[dj].disjuncts.size(); ++i) {
      State c = s;
      c.depth++;
      int cstart = static_cast<int>(c.derivs.size());
      assume(c, dj, static_cast<int>(i));
      auto t = search(std::move(c), cstart);
      if (!t) return std::nullopt;
      node.children.push_back(std::move(*t));
    }
    node.state = std::move(s);
    return node;
  }

  Trace efqLeaf(State s, int start) {
    Trace t;
    t.kind = Trace::Efq;
    t.bottom = *s.bottom;
    t.start = start;
    t.state = std::move(s);
    return t;
  }

  Trace fromLeaf(State s, int start, int disjunct, std::vector<int> bind) {
    Trace t;
    t.kind = Trace::From;
    t.disjunct = disjunct;
    for (const auto& p : goal[disjunct].conjuncts) {
      GAtom a = instantiate(p, bind);
      t.fromAtoms.push_back(a);
      t.fromFacts.push_back(makeLiteral(s, a));
    }
    t.goalBind = std::move(bind);
    t.start = start;
    t.state = std::move(s);
    return t;
  }

  // Lazily instantiates a decidability axiom on an undecided, relevant
  // instance. Counts as an mp step.
  bool decide(State& s) {
    for (const CAxiom* ax : deciders) {
      auto binding = candidate(s, *ax);
      if (!binding) continue;
      if (s.mpCount >= maxSteps) {
        limitHit = true;
        return false;
      }
      applyMp(s, *ax, *binding);
      return true;
    }
    return false;
  }

  std::optional<std::vector<int>> bindingFor(const CAxiom& ax, const GAtom& instance) {
    std::vector<int> bind(ax.varNames.size(), -1);
    const PAtom& p = ax.conclusion[0].conjuncts[0];
    for (std::size_t i = 0; i < p.args.size(); ++i) {
      int a = p.args[i];
      if (a >= 0) {
        if (a != instance[i + 1]) return std::nullopt;
        continue;
      }
      int v = varIndex(a);
      if (sym.constSort[instance[i + 1]] != ax.varSort[v]) return std::nullopt;
      if (bind[v] >= 0 && bind[v] != instance[i + 1]) return std::nullopt;
      bind[v] = instance[i + 1];
    }
    for (int i = 0; i < ax.universals; ++i)
      if (bind[i] < 0) return std::nullopt;
    return bind;
  }

  std::optional<std::vector<int>> candidate(State& s, const CAxiom& ax) {
    const PAtom& pos = ax.conclusion[0].conjuncts[0];
    const PAtom& neg = ax.conclusion[1].conjuncts[0];
    if (pos.pred == kEq) {
      std::set<std::pair<int, int>> pairs;
      auto group = [&](const GAtom& a) {
        std::vector<int> cs;
        for (std::size_t i = 1; i < a.size(); ++i)
          if (a[i] >= 0) cs.push_back(s.uf.find(a[i]));
        for (std::size_t i = 0; i < cs.size(); ++i)
          for (std::size_t j = 0; j < cs.size(); ++j)
            if (cs[i] < cs[j]) pairs.emplace(cs[i], cs[j]);
      };
      for (std::size_t fid = 0; fid < s.facts.size(); ++fid)
        if (s.active[fid]) group(s.facts[fid].atom);
      for (const auto& d : goal)
        for (const auto& p : d.conjuncts) {
          GAtom g{p.pred};
          for (int a : p.args) g.push_back(a >= 0 ? a : -1);
          group(g);
        }
      for (auto [a, b] : pairs) {
        if (s.index.count(GAtom{kNeq, a, b})) continue;
        GAtom inst{kEq, a, b};
        if (auto bind = bindingFor(ax, inst)) return bind;
      }
      return std::nullopt;
    }
    auto undecided = [&](GAtom a) {
      a = canonical(s, a);
      GAtom b = a;
      a[0] = pos.pred;
      b[0] = neg.pred;
      return !s.index.count(key(a)) && !s.index.count(key(b));
    };
    for (const auto& d : goal)
      for (const auto& p : d.conjuncts) {
        if (p.pred != pos.pred && p.pred != neg.pred) continue;
        if (std::any_of(p.args.begin(), p.args.end(), [](int a) { return a < 0; })) continue;
        GAtom g = canonical(s, instantiate(p, {}));
        g[0] = pos.pred;
        if (undecided(g))
          if (auto bind = bindingFor(ax, g)) return bind;
      }
    for (const CAxiom* rule : rules)
      for (std::size_t k = 0; k < rule->premises.size(); ++k) {
        const PAtom& p = rule->premises[k];
        if (p.pred != pos.pred && p.pred != neg.pred) continue;
        std::vector<PAtom> others;
        for (std::size_t i = 0; i < rule->premises.size(); ++i)
          if (i != k) others.push_back(rule->premises[i]);
        std::vector<int> tail;
        for (int a : p.args)
          if (a < 0) tail.push_back(varIndex(a));
        std::vector<int> bind(rule->varNames.size(), -1);
        std::optional<std::vector<int>> found;
        auto cb = [&](const std::vector<int>& b) {
          GAtom g = canonical(s, instantiate(p, b));
          g[0] = pos.pred;
          if (!undecided(g)) return true;
          found = bindingFor(ax, g);
          return !found;
        };
        match(s, others, 0, bind, rule->varSort, tail, cb);
        if (found) return found;
      }
    return std::nullopt;
  }
};

// ---- proof extraction ----

class Extractor {
 public:
  explicit Extractor(const Kernel& k) : k_(k) {}

  ProofTree build(const Trace& t, std::set<int>& up) {
    const State& s = t.state;
    std::set<int> need;
    auto needFact = [&](int fid) {
      if (fid >= 0) need.insert(s.facts[fid].deriv);
    };
    ProofTree tree;
    if (t.kind == Trace::From) {
      FromClosing fc;
      for (const auto& a : t.fromAtoms) fc.facts.push_back(k_.toAtom(a));
      for (int f : t.fromFacts) needFact(f);
      fc.disjunct = t.disjunct;
      for (int v : k_.goal[t.disjunct].exVars) fc.witnessBinding.emplace_back(k_.goalVarNames[v], k_.sym.consts[t.goalBind[v]]);
      tree.closing.kind = std::move(fc);
      tree.closing.outcome = Outcome::Thesis;
    } else if (t.kind == Trace::Efq) {
      EfqClosing ec;
      if (t.bottom.axiom) {
        const CAxiom& ax = *t.bottom.axiom;
        for (const auto& p : ax.premises) ec.facts.push_back(k_.toAtom(Kernel::instantiate(p, t.bottom.binding)));
        ec.axiom = ax.source->name;
        ec.binding = k_.names(ax, t.bottom.binding);
      } else {
        for (int f : t.bottom.facts) ec.facts.push_back(k_.toAtom(s.facts[f].atom));
      }
      for (int f : t.bottom.facts) needFact(f);
      tree.closing.kind = std::move(ec);
      tree.closing.outcome = Outcome::Contradiction;
    } else {
      CaseSplit cs;
      const Disj& d = s.disjs[t.split];
      need.insert(d.deriv);
      for (const auto& conj : d.disjuncts) {
        std::vector<Atom> atoms;
        for (const auto& a : conj) atoms.push_back(k_.toAtom(a));
        cs.disjunction.push_back(std::move(atoms));
      }
      for (const auto& child : t.children) cs.branches.push_back(build(child, need));
      tree.closing.kind = std::move(cs);
      tree.closing.outcome = derivedOutcome(tree);
    }

    std::set<int> done;
    std::vector<int> work(need.begin(), need.end());
    while (!work.empty()) {
      int id = work.back();
      work.pop_back();
      if (id < t.start) {
        up.insert(id);
        continue;
      }
      if (!done.insert(id).second) continue;
      const Deriv& d = s.derivs[id];
      auto dep = [&](int fid) {
        if (fid >= 0) work.push_back(s.facts[fid].deriv);
      };
      if (d.kind == Deriv::Mp) {
        for (int f : d.premises) dep(f);
      } else if (d.kind == Deriv::Rewrite) {
        dep(d.source);
        for (int f : d.equations) dep(f);
      }
    }
    for (int id : done) {
      const Deriv& d = s.derivs[id];
      if (d.kind == Deriv::Mp) {
        ModusPonensStep mp;
        mp.axiom = d.axiom->source->name;
        mp.binding = k_.names(*d.axiom, d.binding);
        for (const auto& p : d.axiom->premises) {
          std::vector<int> bind(d.axiom->varNames.size(), -1);
          std::copy(d.binding.begin(), d.binding.end(), bind.begin());
          mp.premises.push_back(k_.toAtom(Kernel::instantiate(p, bind)));
        }
        for (int w : d.witnesses) mp.witnesses.push_back(k_.sym.consts[w]);
        for (const auto& conj : d.derived) {
          std::vector<Atom> atoms;
          for (const auto& a : conj) atoms.push_back(k_.toAtom(a));
          mp.derived.push_back(std::move(atoms));
        }
        tree.steps.push_back(ProofStep{std::move(mp), 0});
      } else if (d.kind == Deriv::Rewrite) {
        EqualitySubstitutionStep es;
        es.source = k_.toAtom(s.facts[d.source].atom);
        for (int f : d.equations) es.equations.push_back(k_.toAtom(s.facts[f].atom));
        es.derived = k_.toAtom(d.produced);
        tree.steps.push_back(ProofStep{std::move(es), 0});
      }
    }
    return tree;
  }

 private:
  const Kernel& k_;
};

}  // namespace

ProveResult prove(const Theory& theory, const NamedFormula& conjecture, const SearchLimits& limits,
                  const std::vector<std::string>* hints) {
  auto begin = std::chrono::steady_clock::now();
  auto rounds = limits.schedule();

  std::vector<const NamedFormula*> selected;
  if (hints) {
    for (const auto& name : *hints) {
      const NamedFormula* ax = theory.findAxiom(name);
      if (!ax) throw Error("hint names unknown axiom or theorem: " + name);
      if (std::find(selected.begin(), selected.end(), ax) == selected.end()) selected.push_back(ax);
    }
    // Excluded middle is added by the frontend and never named in hints.
    for (const auto& ax : theory.axioms)
      if (isDecidabilityAxiom(ax, theory.signature) &&
          std::find(selected.begin(), selected.end(), &ax) == selected.end())
        selected.push_back(&ax);
  } else {
    for (const auto& ax : theory.axioms) selected.push_back(&ax);
  }

  ProveResult result;
  auto finish = [&](ProveStatus status) {
    result.status = status;
    result.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - begin);
    return result;
  };

  for (auto [steps, splits] : rounds) {
    Prover p(theory, conjecture);
    for (const NamedFormula* f : selected) {
      const CAxiom& ax = p.compile(*f);
      (ax.decidability ? p.deciders : p.rules).push_back(&ax);
    }
    p.deadline = begin + limits.wallClock;
    p.maxSteps = steps;
    p.maxSplits = splits;
    result.limitsTried.emplace_back(steps, splits);
    std::optional<Trace> trace;
    try {
      State s = p.initialState();
      trace = p.search(std::move(s), 0);
    } catch (const TimeoutSignal&) {
      return finish(ProveStatus::Timeout);
    }
    if (trace) {
      std::set<int> up;
      ProofTree tree = Extractor(p).build(*trace, up);
      assignIndentation(tree);
      tree.name = conjecture.name;
      result.proof = std::move(tree);
      return finish(ProveStatus::Proved);
    }
    if (!p.limitHit) break;
  }
  return finish(ProveStatus::Exhausted);
}

namespace engine {

struct FactBase::Impl {
  Kernel kernel;
  State state;
  std::deque<NamedFormula> formulas;

  Impl(const Theory& th, const NamedFormula& conj) : kernel(th, conj) { state = kernel.initialState(); }

  const CAxiom& compile(const NamedFormula& f) {
    formulas.push_back(f);
    return kernel.compile(formulas.back());
  }
};

FactBase::FactBase(const Theory& theory, const NamedFormula& conjecture)
    : impl_(std::make_unique<Impl>(theory, conjecture)) {}
FactBase::~FactBase() = default;
FactBase::FactBase(FactBase&&) noexcept = default;
FactBase& FactBase::operator=(FactBase&&) noexcept = default;

std::vector<Atom> FactBase::facts() const {
  std::vector<Atom> out;
  const State& s = impl_->state;
  for (std::size_t i = 0; i < s.facts.size(); ++i)
    if (s.active[i]) out.push_back(impl_->kernel.toAtom(s.facts[i].atom));
  return out;
}

std::vector<Disjunct> FactBase::goal() const {
  const Kernel& k = impl_->kernel;
  std::vector<Disjunct> out;
  for (const auto& d : k.goal) {
    Disjunct dj;
    for (int v : d.exVars) dj.existentialVars.push_back(Variable{k.goalVarNames[v], k.sym.sorts[k.goalVarSort[v]]});
    for (const auto& p : d.conjuncts) {
      Atom a;
      a.predicate = k.sym.preds[p.pred];
      for (int x : p.args)
        a.args.push_back(x >= 0 ? Term::constant(k.sym.consts[x]) : Term::variable(k.goalVarNames[varIndex(x)]));
      dj.conjuncts.push_back(std::move(a));
    }
    out.push_back(std::move(dj));
  }
  return out;
}

bool FactBase::bottom() const { return impl_->state.bottom.has_value(); }

bool FactBase::goalReached() const { return impl_->kernel.goalMatch(impl_->state).has_value(); }

std::string FactBase::representative(const std::string& constant) const {
  const Kernel& k = impl_->kernel;
  auto it = k.sym.constId.find(constant);
  if (it == k.sym.constId.end()) throw Error("unknown constant " + constant);
  return k.sym.consts[impl_->state.uf.find(it->second)];
}

int FactBase::pendingDisjunctions() const { return static_cast<int>(impl_->state.pending.size()); }

std::vector<NameBinding> FactBase::matchPremises(const NamedFormula& axiom) const {
  const CAxiom& ax = impl_->compile(axiom);
  std::vector<NameBinding> out;
  for (const auto& b : impl_->kernel.matchAll(impl_->state, ax)) out.push_back(impl_->kernel.names(ax, b));
  return out;
}

MpOutcome FactBase::applyMp(const NamedFormula& axiom, const NameBinding& binding) {
  const CAxiom& ax = impl_->compile(axiom);
  Kernel& k = impl_->kernel;
  std::vector<int> bind(ax.varNames.size(), -1);
  for (int i = 0; i < ax.universals; ++i) {
    auto it = std::find_if(binding.begin(), binding.end(), [&](const auto& e) { return e.first == ax.varNames[i]; });
    if (it == binding.end()) throw UnboundVariable(ax.varNames[i]);
    auto c = k.sym.constId.find(it->second);
    if (c == k.sym.constId.end()) throw Error("unknown constant " + it->second);
    bind[i] = c->second;
  }
  for (const auto& p : ax.premises)
    if (!k.holds(impl_->state, Kernel::instantiate(p, bind))) throw Error("premise of " + axiom.name + " does not hold");
  if (!ax.conclusion.empty()) {
    std::vector<int> canon = bind;
    for (int i = 0; i < ax.universals; ++i) canon[i] = impl_->state.uf.find(canon[i]);
    if (k.redundant(impl_->state, ax, canon)) return MpOutcome::Redundant;
  }
  return k.applyMp(impl_->state, ax, bind);
}

std::vector<Atom> FactBase::mergeEqual(const std::string& lhs, const std::string& rhs) {
  Kernel& k = impl_->kernel;
  State& s = impl_->state;
  auto a = k.sym.constId.find(lhs), b = k.sym.constId.find(rhs);
  if (a == k.sym.constId.end() || b == k.sym.constId.end()) throw Error("unknown constant in merge");
  std::size_t before = s.facts.size();
  int did = k.pushDeriv(s, Deriv{});
  k.insertFact(s, GAtom{kEq, a->second, b->second}, did);
  std::vector<Atom> out;
  for (std::size_t i = before; i < s.facts.size(); ++i)
    if (s.active[i]) out.push_back(k.toAtom(s.facts[i].atom));
  return out;
}

}  // namespace engine
}  // namespace clv
