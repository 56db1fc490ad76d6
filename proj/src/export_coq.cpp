#include "clv/assets.hpp"
#include "clv/export.hpp"
#include "render_common.hpp"

namespace clv {

namespace {

class CoqRenderer {
 public:
  explicit CoqRenderer(const VernacularDocument& doc) : doc_(doc), sig_(doc.theory.signature) {}

  std::string document() {
    std::string out = "Require Import CLVernacularTactics.\n\n";
    for (const auto& s : sig_.sorts) out += "Parameter " + s.name + " : Set.\n";
    for (const auto& p : sig_.predicates) {
      if (p.isEquality || render::positiveOf(sig_, p.name)) continue;
      std::string type;
      for (const auto& s : p.argSorts) type += s + " -> ";
      out += "Parameter " + p.name + " : " + type + "Prop.\n";
    }
    for (const auto& c : sig_.constants) out += "Parameter " + c.name + " : " + c.sort + ".\n";
    out += "\n";
    for (const auto& ax : doc_.theory.axioms) out += "Axiom " + ax.name + " : " + axiom(ax.formula) + ".\n";
    for (const auto& chapter : doc_.chapters) {
      out += "\n(* " + chapter.name + " *)\n";
      for (const auto& item : chapter.items) out += "\n" + this->item(item);
    }
    return out;
  }

  std::string item(const TheoremItem& item) {
    Substitution consts = render::itemConstants(doc_, item);
    std::string out = "Theorem " + item.name + " : ";
    if (!consts.empty()) {
      out += "forall";
      for (const auto& [var, c] : consts) out += " (" + c.name + ":" + c.sort + ")";
      out += ", ";
    }
    if (!item.formula.premises.empty()) {
      std::vector<std::string> ps;
      for (const auto& a : substitute(item.formula.premises, consts)) ps.push_back(atom(a));
      out += "(" + render::join(ps, " /\\ ") + ") -> ";
    }
    std::vector<Disjunct> ds;
    for (const auto& d : item.formula.conclusion) {
      Substitution inner = consts;
      for (const auto& v : d.existentialVars) inner.push_back({v, Constant{v.name, v.sort}});
      ds.push_back({d.existentialVars, substitute(d.conjuncts, inner)});
    }
    out += conclusion(ds) + ".\nProof.\n";
    if (!item.isTheorem()) return out + "Admitted.\n";
    out += "intros.\n";
    proof(item.proofs.front(), out);
    out += "Qed.\n";
    if (item.proofs.size() > 1)
      out += "(* " + std::to_string(item.proofs.size() - 1) + " alternative proof(s) not shown *)\n";
    return out;
  }

 private:
  std::string atom(const Atom& a) const {
    if (a.isEquality()) return a.args[0].name + " = " + a.args[1].name;
    if (a.isDisequality()) return a.args[0].name + " <> " + a.args[1].name;
    if (auto pos = render::positiveOf(sig_, a.predicate)) return "~ " + atom(Atom{*pos, a.args});
    std::string out = a.predicate;
    for (const auto& t : a.args) out += " " + t.name;
    return out;
  }

  std::string conjunction(const std::vector<Atom>& as) const {
    if (as.empty()) return "True";
    std::vector<std::string> parts;
    for (const auto& a : as) parts.push_back(atom(a));
    return render::join(parts, " /\\ ");
  }

  std::string conclusion(const std::vector<Disjunct>& ds) const {
    if (ds.empty()) return "False";
    std::vector<std::string> parts;
    for (const auto& d : ds) {
      std::string body = conjunction(d.conjuncts);
      for (auto v = d.existentialVars.rbegin(); v != d.existentialVars.rend(); ++v)
        body = "exists " + v->name + ":" + v->sort + ", " + body;
      bool compound = d.conjuncts.size() > 1 || !d.existentialVars.empty();
      parts.push_back(ds.size() > 1 && compound ? "(" + body + ")" : body);
    }
    return render::join(parts, " \\/ ");
  }

  std::string axiom(const CoherentFormula& f) const {
    std::string out;
    if (!f.universalVars.empty()) {
      out += "forall";
      for (const auto& v : f.universalVars) out += " (" + v.name + ":" + v.sort + ")";
      out += ", ";
    }
    for (const auto& a : f.premises) out += atom(a) + " -> ";
    return out + conclusion(f.conclusion);
  }

  std::string ground(const GroundDisjunction& d) const {
    std::vector<Disjunct> ds;
    for (const auto& c : d) ds.push_back({{}, c});
    return conclusion(ds);
  }

  static std::string applying(const std::string& axiom, const NameBinding& binding) {
    std::string out = "applying (" + axiom;
    for (const auto& [var, value] : binding) out += " " + value;
    return out + " ) .";
  }

  std::string witnessSort(const ModusPonensStep& mp, std::size_t index) const {
    const NamedFormula* ax = doc_.theory.findAxiom(mp.axiom);
    if (ax) {
      std::size_t i = 0;
      for (const auto& d : ax->formula.conclusion)
        for (const auto& v : d.existentialVars)
          if (i++ == index) return v.sort;
    }
    return std::string(kDefaultSort);
  }

  std::string step(const ProofStep& s) const {
    if (const auto* mp = std::get_if<ModusPonensStep>(&s.kind)) {
      if (mp->witnesses.empty()) return "assert (" + ground(mp->derived) + ") by " + applying(mp->axiom, mp->binding);
      std::string body = ground(mp->derived);
      for (std::size_t i = mp->witnesses.size(); i-- > 0;)
        body = "exists " + mp->witnesses[i] + ":" + witnessSort(*mp, i) + ", " + body;
      std::string out = "assert (" + body + ") by " + applying(mp->axiom, mp->binding);
      for (const auto& w : mp->witnesses) out += "\nobtain " + w + ".";
      return out;
    }
    const auto& sub = std::get<EqualitySubstitutionStep>(s.kind);
    return "assert (" + atom(sub.derived) + ")  by (substitution).";
  }

  void proof(const ProofTree& tree, std::string& out) const {
    for (const auto& s : tree.steps) out += step(s) + "\n";
    const ProofClosing& c = tree.closing;
    if (std::holds_alternative<FromClosing>(c.kind)) {
      out += "conclude.\n";
    } else if (const auto* efq = std::get_if<EfqClosing>(&c.kind)) {
      if (efq->axiom.empty())
        out += "assert (False)  by (substitution).\n";
      else
        out += "assert (False) by " + applying(efq->axiom, efq->binding) + "\n";
      out += "contradict.\n";
    } else {
      const auto& cs = std::get<CaseSplit>(c.kind);
      out += "by cases on (" + ground(cs.disjunction) + ").\n";
      for (const auto& branch : cs.branches) {
        out += "- {\n";
        proof(branch, out);
        out += "}\n";
      }
    }
  }

  const VernacularDocument& doc_;
  const Signature& sig_;
};

}  // namespace

RenderedArtifact exportCoq(const VernacularDocument& doc, const ExportOptions&) {
  CoqRenderer r(doc);
  return {r.document(), {{"CLVernacularTactics.v", std::string(assets::coq_prelude())}}};
}

}  // namespace clv
