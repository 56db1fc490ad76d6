#include <cctype>

#include "clv/assets.hpp"
#include "clv/export.hpp"
#include "render_common.hpp"

namespace clv {

namespace {

class TextRenderer {
 public:
  TextRenderer(const VernacularDocument& doc, const LayoutConfig& layout, TextTarget target)
      : doc_(doc), layout_(layout), target_(target) {}

  std::string document(const ExportOptions& options) {
    std::string out;
    if (target_ == TextTarget::Latex) {
      out += "\\documentclass{article}\n\\usepackage{amsmath,amssymb,amsthm}\n\\usepackage{clvernacular}\n\n";
      out += "\\title{" + render::identifier(options.name, target_) + "}\n";
      out += "\\author{" + escape(doc_.frontpage.author) + "}\n";
      out += "\\date{" + escape(doc_.frontpage.date) + "}\n\n";
      out += "\\begin{document}\n\\maketitle\n";
      if (!doc_.frontpage.prover.empty()) out += "\nProofs generated by " + escape(doc_.frontpage.prover) + ".\n";
      for (const auto& chapter : doc_.chapters) {
        out += "\n\\section{" + escape(chapter.name) + "}\n";
        for (const auto& item : chapter.items) out += "\n" + this->item(item);
      }
      out += "\n\\end{document}\n";
    } else if (target_ == TextTarget::Html) {
      out += "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>" + escape(options.name) +
             "</title>\n<link rel=\"stylesheet\" href=\"clvernacular.css\">\n</head>\n<body>\n";
      out += "<h1>" + escape(options.name) + "</h1>\n";
      out += "<p class=\"frontpage\">" + escape(doc_.frontpage.author) + ", " + escape(doc_.frontpage.prover) +
             ", " + escape(doc_.frontpage.date) + "</p>\n";
      for (const auto& chapter : doc_.chapters) {
        out += "<h2>" + escape(chapter.name) + "</h2>\n";
        for (const auto& item : chapter.items) out += this->item(item);
      }
      out += "</body>\n</html>\n";
    } else {
      for (const auto& chapter : doc_.chapters)
        for (const auto& item : chapter.items) out += (out.empty() ? "" : "\n") + this->item(item);
    }
    return out;
  }

  std::string item(const TheoremItem& item) {
    std::string statement = this->statement(item.formula);
    std::string name = render::identifier(item.name, target_);
    std::string out;
    if (target_ == TextTarget::Latex) {
      std::string env = item.isTheorem() ? "theorem" : "conjecture";
      out += "\\begin{" + env + "}[" + name + "]\n" + statement + "\n\\end{" + env + "}\n";
      if (!item.isTheorem()) return out;
      out += "\n{\\em Proof:}\n\n";
      lines_.clear();
      proof(item.proofs.front(), 0);
      for (const auto& l : lines_) out += "\\proofstep{" + std::to_string(l.first) + "} {" + l.second + "}\n";
      out += "\nQED\n";
      if (item.proofs.size() > 1)
        out += "% " + std::to_string(item.proofs.size() - 1) + " alternative proof(s) not shown\n";
    } else if (target_ == TextTarget::Html) {
      std::string kind = item.isTheorem() ? "Theorem" : "Conjecture";
      out += "<div class=\"" + std::string(item.isTheorem() ? "theorem" : "conjecture") + "\">\n";
      out += "<p class=\"statement\"><b>" + kind + "</b> (" + name + "). " + statement + "</p>\n";
      if (item.isTheorem()) {
        out += "<p><i>Proof:</i></p>\n";
        out += htmlProof(item.proofs.front());
        out += "<p>QED</p>\n";
        if (item.proofs.size() > 1)
          out += "<!-- " + std::to_string(item.proofs.size() - 1) + " alternative proof(s) not shown -->\n";
      }
      out += "</div>\n";
    } else {
      out += std::string(item.isTheorem() ? "Theorem " : "Conjecture ") + name + ": " + statement + "\n";
      if (!item.isTheorem()) return out;
      lines_.clear();
      proof(item.proofs.front(), 0);
      for (const auto& l : lines_) out += std::string(static_cast<std::size_t>(l.first), ' ') + l.second + "\n";
    }
    return out;
  }

 private:
  std::string escape(std::string_view text) const {
    if (target_ == TextTarget::Plain) return std::string(text);
    if (target_ == TextTarget::Html) return xml::escapeText(text);
    std::string out;
    for (char c : text) {
      if (c == '_' || c == '&' || c == '%' || c == '#' || c == '$' || c == '{' || c == '}') out += '\\';
      out += c;
    }
    return out;
  }

  std::string math(const std::string& body) const {
    return target_ == TextTarget::Latex ? "$" + body + "$" : body;
  }

  std::string atom(const Atom& a) const { return math(renderAtom(a, layout_, target_, doc_.theory.signature)); }

  std::string atoms(const std::vector<Atom>& as) const {
    if (as.empty()) return math(target_ == TextTarget::Latex ? "\\top" : target_ == TextTarget::Html ? "&#8868;" : "true");
    std::vector<std::string> parts;
    for (const auto& a : as) parts.push_back(atom(a));
    return render::join(parts, " and ");
  }

  std::string disjunction(const GroundDisjunction& d) const {
    if (d.empty()) return "contradiction";
    std::vector<std::string> parts;
    for (const auto& c : d) parts.push_back(atoms(c));
    return render::join(parts, " or ");
  }

  std::string statement(const CoherentFormula& f) const {
    std::vector<std::string> disjuncts;
    for (const auto& d : f.conclusion) {
      std::string text;
      if (!d.existentialVars.empty()) {
        std::vector<std::string> vars;
        for (const auto& v : d.existentialVars) vars.push_back(math(render::identifier(v.name, target_)));
        text = std::string(vars.size() == 1 ? "there exists " : "there exist ") + render::join(vars, ", ") +
               " such that ";
      }
      disjuncts.push_back(text + atoms(d.conjuncts));
    }
    std::string goal = f.isBottom() ? "we get contradiction" : "it holds that " + render::join(disjuncts, " or ");
    if (f.premises.empty()) {
      goal[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(goal[0])));
      return goal + ".";
    }
    return "Assuming that " + atoms(f.premises) + " " + goal + ".";
  }

  bool decidability(const std::string& axiom) const {
    const NamedFormula* f = doc_.theory.findAxiom(axiom);
    return f && isDecidabilityAxiom(*f, doc_.theory.signature);
  }

  std::string using_(const std::string& axiom) const {
    return " (using " + math(render::identifier(axiom, target_)) + ")";
  }

  std::string step(const ProofStep& s) const {
    if (const auto* mp = std::get_if<ModusPonensStep>(&s.kind)) {
      std::string text = mp->premises.empty() ? "" : "From the fact(s) " + atoms(mp->premises) + " ";
      if (!mp->witnesses.empty()) {
        std::vector<std::string> ws;
        for (const auto& w : mp->witnesses) ws.push_back(math(render::identifier(w, target_)));
        text += std::string(text.empty() ? "We" : "we") + " get fresh " + render::join(ws, ", ") + " such that ";
      } else {
        text += text.empty() ? "It holds that " : "it holds that ";
      }
      text += disjunction(mp->derived);
      if (!decidability(mp->axiom)) text += using_(mp->axiom);
      return text + ".";
    }
    const auto& sub = std::get<EqualitySubstitutionStep>(s.kind);
    std::vector<Atom> facts{sub.source};
    facts.insert(facts.end(), sub.equations.begin(), sub.equations.end());
    return "From the fact(s) " + atoms(facts) + " it holds that " + atom(sub.derived) + ".";
  }

  std::string closing(const ProofClosing& c) const {
    if (const auto* from = std::get_if<FromClosing>(&c.kind)) {
      if (from->facts.empty()) return "The conclusion follows trivially.";
      return "The conclusion follows from the fact(s) " + atoms(from->facts) + ".";
    }
    if (const auto* efq = std::get_if<EfqClosing>(&c.kind)) {
      std::string text = efq->facts.empty() ? "We get contradiction" : "From the fact(s) " + atoms(efq->facts) +
                                                                          " we get contradiction";
      if (!efq->axiom.empty()) text += using_(efq->axiom);
      return text + ".";
    }
    return c.outcome == Outcome::Thesis ? "The conclusion follows in all cases."
                                        : "Contradiction follows in all cases.";
  }

  void proof(const ProofTree& tree, int base) {
    for (const auto& s : tree.steps) lines_.emplace_back(base, step(s));
    if (const auto* cs = std::get_if<CaseSplit>(&tree.closing.kind)) {
      for (std::size_t i = 0; i < cs->branches.size(); ++i) {
        lines_.emplace_back(base + kIndentUnit, "Assume that: " + atoms(cs->disjunction[i]) + ".");
        proof(cs->branches[i], base + kBranchIndent);
      }
    }
    lines_.emplace_back(base, closing(tree.closing));
  }

  std::string htmlProof(const ProofTree& tree) const {
    std::string out = "<ol class=\"proof\">\n";
    for (const auto& s : tree.steps) out += "<li class=\"step\">" + step(s) + "</li>\n";
    if (const auto* cs = std::get_if<CaseSplit>(&tree.closing.kind)) {
      for (std::size_t i = 0; i < cs->branches.size(); ++i) {
        out += "<li class=\"case\">Assume that: " + atoms(cs->disjunction[i]) + ".\n";
        out += htmlProof(cs->branches[i]);
        out += "</li>\n";
      }
    }
    out += "<li class=\"step\">" + closing(tree.closing) + "</li>\n";
    return out + "</ol>\n";
  }

  const VernacularDocument& doc_;
  const LayoutConfig& layout_;
  TextTarget target_;
  std::vector<std::pair<int, std::string>> lines_;
};

}  // namespace

RenderedArtifact exportNaturalLanguage(const VernacularDocument& doc, const LayoutConfig& layout, TextTarget target,
                                       const ExportOptions& options) {
  render::checkLayout(layout, doc.theory.signature);
  TextRenderer r(doc, layout, target);
  RenderedArtifact out{r.document(options), {}};
  if (target == TextTarget::Latex) out.auxiliaryFiles.emplace_back("clvernacular.sty", std::string(assets::latex_preamble()));
  if (target == TextTarget::Html) out.auxiliaryFiles.emplace_back("clvernacular.css", std::string(assets::html_style()));
  return out;
}

}  // namespace clv
