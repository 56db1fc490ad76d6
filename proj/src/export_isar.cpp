#include "clv/export.hpp"
#include "render_common.hpp"

namespace clv {

namespace {

class IsarRenderer {
 public:
  explicit IsarRenderer(const VernacularDocument& doc) : doc_(doc), sig_(doc.theory.signature) {}

  std::string document(const std::string& name) {
    std::string out = "theory " + name + "\nimports Main\nbegin\n\n";
    for (const auto& s : sig_.sorts) out += "typedecl " + s.name + "\n";
    std::vector<std::string> consts;
    for (const auto& p : sig_.predicates) {
      if (p.isEquality || render::positiveOf(sig_, p.name)) continue;
      std::string type;
      for (const auto& s : p.argSorts) type += s + " => ";
      consts.push_back("  " + p.name + " :: \"" + type + "bool\"");
    }
    for (const auto& c : sig_.constants) consts.push_back("  " + c.name + " :: \"" + c.sort + "\"");
    if (!consts.empty()) out += "\nconsts\n" + render::join(consts, "\n") + "\n";
    std::vector<std::string> axioms;
    for (const auto& ax : doc_.theory.axioms) {
      if (render::isHelperAxiom(ax, sig_)) continue;
      axioms.push_back("  " + ax.name + ": \"" + rule(ax.formula) + "\"");
    }
    if (!axioms.empty()) out += "\naxiomatization where\n" + render::join(axioms, " and\n") + "\n";
    for (const auto& chapter : doc_.chapters) {
      out += "\nsection \\<open>" + chapter.name + "\\<close>\n";
      for (const auto& item : chapter.items) out += "\n" + this->item(item);
    }
    return out + "\nend\n";
  }

  std::string item(const TheoremItem& item) {
    Substitution consts = render::itemConstants(doc_, item);
    std::string out = "lemma " + item.name + " :  ";
    if (!item.formula.premises.empty()) {
      std::vector<std::string> assumes;
      for (const auto& a : substitute(item.formula.premises, consts)) assumes.push_back(quote(atom(a)));
      out += "assumes  " + render::join(assumes, " and ") + "  ";
    }
    out += "shows " + quote(goal(item.formula, consts)) + "\n";
    if (!item.isTheorem()) return out + "sorry\n";
    out += "proof -\n";
    proof(item.proofs.front(), out);
    out += "qed\n";
    if (item.proofs.size() > 1)
      out += "(* " + std::to_string(item.proofs.size() - 1) + " alternative proof(s) not shown *)\n";
    return out;
  }

 private:
  static std::string quote(const std::string& s) { return "\"" + s + "\""; }
  static std::string ref(const std::string& s) { return "`" + s + "`"; }

  std::string atom(const Atom& a) const {
    if (a.isEquality()) return a.args[0].name + " = " + a.args[1].name;
    if (a.isDisequality()) return a.args[0].name + " ~= " + a.args[1].name;
    if (auto pos = render::positiveOf(sig_, a.predicate)) return "~ (" + atom(Atom{*pos, a.args}) + ")";
    std::string out = a.predicate;
    for (const auto& t : a.args) out += " " + t.name;
    return out;
  }

  std::string conjunction(const std::vector<Atom>& as) const {
    if (as.empty()) return "True";
    std::vector<std::string> parts;
    for (const auto& a : as) parts.push_back(atom(a));
    return render::join(parts, " \\<and> ");
  }

  std::string disjunct(const Disjunct& d, bool parens) const {
    std::string body = conjunction(d.conjuncts);
    if (!d.existentialVars.empty()) {
      std::string vars;
      for (const auto& v : d.existentialVars) vars += " " + v.name;
      body = "\\<exists>" + vars + ". " + body;
    }
    return parens ? "(" + body + ")" : body;
  }

  std::string conclusion(const std::vector<Disjunct>& ds, bool parens) const {
    if (ds.empty()) return "False";
    std::vector<std::string> parts;
    for (const auto& d : ds)
      parts.push_back(disjunct(d, parens || (ds.size() > 1 && (d.conjuncts.size() > 1 || !d.existentialVars.empty()))));
    return render::join(parts, " \\<or> ");
  }

  std::string goal(const CoherentFormula& f, const Substitution& consts) const {
    std::vector<Disjunct> ds;
    for (const auto& d : f.conclusion) {
      Substitution inner = consts;
      for (const auto& v : d.existentialVars) inner.push_back({v, Constant{v.name, v.sort}});
      ds.push_back({d.existentialVars, substitute(d.conjuncts, inner)});
    }
    return conclusion(ds, true);
  }

  std::string rule(const CoherentFormula& f) const {
    std::string concl = conclusion(f.conclusion, false);
    if (f.premises.empty()) return concl;
    std::vector<std::string> ps;
    for (const auto& a : f.premises) ps.push_back(atom(a));
    if (ps.size() == 1) return ps[0] + " ==> " + concl;
    return "[| " + render::join(ps, "; ") + " |] ==> " + concl;
  }

  std::string ground(const GroundDisjunction& d) const {
    std::vector<Disjunct> ds;
    for (const auto& c : d) ds.push_back({{}, c});
    return conclusion(ds, false);
  }

  std::string from(const std::vector<Atom>& facts) const {
    if (facts.empty()) return "";
    std::vector<std::string> refs;
    for (const auto& a : facts) refs.push_back(ref(atom(a)));
    return "from " + render::join(refs, " and ") + " ";
  }

  bool decidability(const std::string& axiom) const {
    const NamedFormula* f = doc_.theory.findAxiom(axiom);
    return f && isDecidabilityAxiom(*f, sig_);
  }

  std::string step(const ProofStep& s) const {
    if (const auto* mp = std::get_if<ModusPonensStep>(&s.kind)) {
      if (decidability(mp->axiom))
        return "have " + quote(ground(mp->derived)) + " by (subst disj_commute, rule excluded_middle)";
      if (!mp->witnesses.empty()) {
        std::string ws;
        for (const auto& w : mp->witnesses) ws += " " + w;
        std::string body;
        if (mp->derived.size() == 1) {
          std::vector<std::string> parts;
          for (const auto& a : mp->derived[0]) parts.push_back(quote(atom(a)));
          body = render::join(parts, " and ");
        } else {
          body = quote(ground(mp->derived));
        }
        return from(mp->premises) + "obtain" + ws + " where " + body + " using " + mp->axiom + " by blast";
      }
      if (mp->derived.size() == 1 && mp->derived[0].size() > 1) {
        std::vector<std::string> parts;
        for (const auto& a : mp->derived[0]) parts.push_back(quote(atom(a)));
        return from(mp->premises) + "have " + render::join(parts, " and ") + " using " + mp->axiom + " by blast+";
      }
      return from(mp->premises) + "have " + quote(ground(mp->derived)) + " by (rule " + mp->axiom + ")";
    }
    const auto& sub = std::get<EqualitySubstitutionStep>(s.kind);
    std::vector<Atom> facts{sub.source};
    facts.insert(facts.end(), sub.equations.begin(), sub.equations.end());
    std::string method = "by simp";
    if (sub.equations.empty()) method = sub.source.isDisequality() ? "by (rule not_sym)" : "by (rule sym)";
    return from(facts) + "have " + quote(atom(sub.derived)) + " " + method;
  }

  void proof(const ProofTree& tree, std::string& out) const {
    for (const auto& s : tree.steps) out += step(s) + "\n";
    const ProofClosing& c = tree.closing;
    if (const auto* fc = std::get_if<FromClosing>(&c.kind)) {
      bool single = fc->facts.size() == 1 && fc->witnessBinding.empty();
      out += from(fc->facts) + "show ?thesis by " + (single ? "assumption" : "blast") + "\n";
    } else if (const auto* efq = std::get_if<EfqClosing>(&c.kind)) {
      const NamedFormula* ax = efq->axiom.empty() ? nullptr : doc_.theory.findAxiom(efq->axiom);
      auto literal = render::literalContradiction(efq->facts, sig_);
      if (efq->facts.empty()) {
        out += "show ?thesis by blast\n";
        return;
      }
      if (literal && (!ax || render::isIncompatibilityAxiom(*ax, sig_)))
        out += from({literal->first, literal->second}) + "have \"False\" by (rule notE)\n";
      else if (!efq->axiom.empty())
        out += from(efq->facts) + "have \"False\" by (rule " + efq->axiom + ")\n";
      else
        out += from(efq->facts) + "have \"False\" by simp\n";
      out += "from this show ?thesis by (rule FalseE)\n";
    } else {
      const auto& cs = std::get<CaseSplit>(c.kind);
      if (render::complementary(cs.disjunction, sig_)) {
        out += "show ?thesis\nproof(cases " + quote(atom(cs.disjunction[0][0])) + ")\n";
        out += "case True\n";
        proof(cs.branches[0], out);
        out += "next\ncase False\n";
        proof(cs.branches[1], out);
        out += "qed\n";
        return;
      }
      out += from({}) + "from " + ref(ground(cs.disjunction)) + " show ?thesis\nproof(elim disjE conjE)\n";
      for (std::size_t i = 0; i < cs.branches.size(); ++i) {
        if (i) out += "next\n";
        std::vector<std::string> parts;
        for (const auto& a : cs.disjunction[i]) parts.push_back(quote(atom(a)));
        if (!parts.empty()) out += "assume " + render::join(parts, " and ") + "\n";
        proof(cs.branches[i], out);
      }
      out += "qed\n";
    }
  }

  const VernacularDocument& doc_;
  const Signature& sig_;
};

}  // namespace

RenderedArtifact exportIsar(const VernacularDocument& doc, const ExportOptions& options) {
  IsarRenderer r(doc);
  return {r.document(options.name), {}};
}

}  // namespace clv
