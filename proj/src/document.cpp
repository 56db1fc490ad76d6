#include "clv/document.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "clv/errors.hpp"

namespace clv {

NamedFormula TheoremItem::asNamedFormula() const {
  return NamedFormula{name, isTheorem() ? Role::Theorem : Role::Conjecture, formula};
}

std::vector<NamedFormula> VernacularDocument::lemmasBefore(const TheoremItem& item) const {
  std::vector<NamedFormula> out;
  for (const auto& ch : chapters)
    for (const auto& it : ch.items) {
      if (&it == &item) return out;
      if (it.isTheorem()) out.push_back(it.asNamedFormula());
    }
  return out;
}

namespace {

constexpr const char* kDeclaration = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
constexpr const char* kDoctype = "<!DOCTYPE main SYSTEM \"Vernacular.dtd\">\n";
constexpr const char* kXInclude = "http://www.w3.org/2003/XInclude";

// ---- writing ----

class Writer {
 public:
  std::string out;

  void line(int depth, const std::string& text) {
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += text;
    out += '\n';
  }
  void leaf(int depth, const std::string& name, const std::string& text) {
    line(depth, "<" + name + ">" + xml::escapeText(text) + "</" + name + ">");
  }

  static std::string attr(const std::string& k, const std::string& v) {
    return " " + k + "=\"" + xml::escapeAttribute(v) + "\"";
  }

  void atom(int d, const Atom& a) {
    if (a.args.empty()) {
      line(d, "<atom" + attr("relation", a.predicate) + "/>");
      return;
    }
    line(d, "<atom" + attr("relation", a.predicate) + ">");
    for (const auto& t : a.args)
      line(d + 1, "<arg" + attr("name", t.name) + (t.isVariable() ? attr("kind", "var") : "") + "/>");
    line(d, "</atom>");
  }

  void atoms(int d, const std::string& name, const std::vector<Atom>& list) {
    if (list.empty()) {
      line(d, "<" + name + "/>");
      return;
    }
    line(d, "<" + name + ">");
    for (const auto& a : list) atom(d + 1, a);
    line(d, "</" + name + ">");
  }

  void variables(int d, const std::string& name, const std::vector<Variable>& vars) {
    if (vars.empty()) {
      line(d, "<" + name + "/>");
      return;
    }
    line(d, "<" + name + ">");
    for (const auto& v : vars) line(d + 1, "<variable" + attr("name", v.name) + attr("type", v.sort) + "/>");
    line(d, "</" + name + ">");
  }

  void formula(int d, const CoherentFormula& f) {
    line(d, "<cl_formula>");
    variables(d + 1, "universal_vars", f.universalVars);
    atoms(d + 1, "premises", f.premises);
    if (f.conclusion.empty()) {
      line(d + 1, "<goal/>");
    } else {
      line(d + 1, "<goal>");
      for (const auto& dj : f.conclusion) {
        line(d + 2, "<disjunct>");
        variables(d + 3, "existential_vars", dj.existentialVars);
        atoms(d + 3, "conjunction", dj.conjuncts);
        line(d + 2, "</disjunct>");
      }
      line(d + 1, "</goal>");
    }
    line(d, "</cl_formula>");
  }

  void bindings(int d, const NameBinding& b) {
    for (const auto& [v, c] : b) line(d, "<binding" + attr("variable", v) + attr("constant", c) + "/>");
  }

  void step(int d, const ProofStep& s) {
    line(d, "<proof_step>");
    leaf(d + 1, "indentation", std::to_string(s.indentation));
    line(d + 1, "<modus_ponens>");
    if (const auto* mp = std::get_if<ModusPonensStep>(&s.kind)) {
      atoms(d + 2, "facts", mp->premises);
      if (mp->binding.empty()) {
        line(d + 2, "<use_axiom" + attr("name", mp->axiom) + "/>");
      } else {
        line(d + 2, "<use_axiom" + attr("name", mp->axiom) + ">");
        bindings(d + 3, mp->binding);
        line(d + 2, "</use_axiom>");
      }
      if (mp->witnesses.empty()) {
        line(d + 2, "<witnesses/>");
      } else {
        line(d + 2, "<witnesses>");
        for (const auto& w : mp->witnesses) line(d + 3, "<witness" + attr("name", w) + "/>");
        line(d + 2, "</witnesses>");
      }
      if (mp->derived.empty()) {
        line(d + 2, "<derived/>");
      } else {
        line(d + 2, "<derived>");
        for (const auto& conj : mp->derived) atoms(d + 3, "conjunction", conj);
        line(d + 2, "</derived>");
      }
    } else {
      const auto& es = std::get<EqualitySubstitutionStep>(s.kind);
      std::vector<Atom> facts{es.source};
      facts.insert(facts.end(), es.equations.begin(), es.equations.end());
      atoms(d + 2, "facts", facts);
      line(d + 2, "<by_equality/>");
      line(d + 2, "<witnesses/>");
      line(d + 2, "<derived>");
      atoms(d + 3, "conjunction", {es.derived});
      line(d + 2, "</derived>");
    }
    line(d + 1, "</modus_ponens>");
    line(d, "</proof_step>");
  }

  void proof(int d, const ProofTree& t) {
    line(d, "<proof>");
    for (const auto& s : t.steps) step(d + 1, s);
    const auto& c = t.closing;
    line(d + 1, "<proof_closing>");
    leaf(d + 2, "indentation", std::to_string(c.indentation));
    if (const auto* cs = std::get_if<CaseSplit>(&c.kind)) {
      line(d + 2, "<case_split>");
      line(d + 3, "<split_on>");
      for (const auto& conj : cs->disjunction) atoms(d + 4, "conjunction", conj);
      line(d + 3, "</split_on>");
      for (const auto& b : cs->branches) proof(d + 3, b);
      line(d + 2, "</case_split>");
    } else if (const auto* f = std::get_if<FromClosing>(&c.kind)) {
      line(d + 2, "<from" + attr("disjunct", std::to_string(f->disjunct)) + ">");
      atoms(d + 3, "facts", f->facts);
      if (f->witnessBinding.empty()) {
        line(d + 3, "<witness_binding/>");
      } else {
        line(d + 3, "<witness_binding>");
        bindings(d + 4, f->witnessBinding);
        line(d + 3, "</witness_binding>");
      }
      line(d + 2, "</from>");
    } else {
      const auto& e = std::get<EfqClosing>(c.kind);
      line(d + 2, "<efq" + (e.axiom.empty() ? std::string() : attr("axiom", e.axiom)) + ">");
      atoms(d + 3, "facts", e.facts);
      bindings(d + 3, e.binding);
      line(d + 2, "</efq>");
    }
    line(d + 2, c.outcome == Outcome::Thesis ? "<goal_reached_thesis/>" : "<goal_reached_contradiction/>");
    line(d + 1, "</proof_closing>");
    if (t.name) line(d + 1, "<proof_name" + attr("name", *t.name) + "/>");
    line(d, "</proof>");
  }

  void frontpage(int d, const Frontpage& f) {
    line(d, "<frontpage>");
    leaf(d + 1, "author", f.author);
    leaf(d + 1, "prover", f.prover);
    leaf(d + 1, "date", f.date);
    line(d, "</frontpage>");
  }

  void theory(int d, const Theory& th) {
    line(d, "<theory>");
    leaf(d + 1, "theory_name", th.name);
    const auto& sig = th.signature;
    if (sig.sorts.empty() && sig.predicates.empty() && sig.constants.empty()) {
      line(d + 1, "<signature/>");
    } else {
      line(d + 1, "<signature>");
      for (const auto& s : sig.sorts) leaf(d + 2, "type", s.name);
      for (const auto& p : sig.predicates) {
        std::string head = "<relation_symbol" + attr("name", p.name) +
                           (p.negatedPartner ? attr("negation", *p.negatedPartner) : std::string());
        if (p.argSorts.empty()) {
          line(d + 2, head + "/>");
          continue;
        }
        line(d + 2, head + ">");
        for (const auto& s : p.argSorts) leaf(d + 3, "type", s);
        line(d + 2, "</relation_symbol>");
      }
      for (const auto& c : sig.constants) {
        line(d + 2, "<constant" + attr("name", c.name) + ">");
        leaf(d + 3, "type", c.sort);
        line(d + 2, "</constant>");
      }
      line(d + 1, "</signature>");
    }
    for (const auto& ax : th.axioms) {
      std::string role;
      if (ax.role == Role::Theorem) role = attr("role", "theorem");
      if (ax.role == Role::Definition) role = attr("role", "definition");
      line(d + 1, "<axiom" + attr("name", ax.name) + role + ">");
      formula(d + 2, ax.formula);
      line(d + 1, "</axiom>");
    }
    line(d, "</theory>");
  }

  void item(int d, const TheoremItem& it) {
    if (it.isTheorem()) {
      line(d, "<theorem>");
      leaf(d + 1, "theorem_name", it.name);
      formula(d + 1, it.formula);
      for (const auto& p : it.proofs) proof(d + 1, p);
      line(d, "</theorem>");
    } else {
      line(d, "<conjecture>");
      leaf(d + 1, "name", it.name);
      formula(d + 1, it.formula);
      line(d, "</conjecture>");
    }
  }

  void include(const std::string& href) {
    out += "<xi:include" + attr("href", href) + attr("parse", "xml") + "\n    " + "xmlns:xi=\"" + kXInclude + "\"/>\n";
  }
};

std::string theoryFileName(const Theory& th) { return "theory_" + (th.name.empty() ? std::string("theory") : th.name) + ".xml"; }

// ---- reading ----

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n"), e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

class Reader {
 public:
  const xml::Dtd& dtd = xml::vernacularDtd();

  std::string attr(const xml::Node& n, const char* key) const {
    if (const std::string* v = n.attribute(key)) return *v;
    return dtd.defaultValue(n.name, key);
  }

  std::string text(const xml::Node& n, const char* child) const {
    const xml::Node* c = n.child(child);
    return c ? trim(c->text) : std::string();
  }

  Atom atom(const xml::Node& n) const {
    Atom a;
    a.predicate = attr(n, "relation");
    for (const auto* arg : n.childrenNamed("arg")) {
      std::string name = attr(*arg, "name");
      a.args.push_back(attr(*arg, "kind") == "var" ? Term::variable(name) : Term::constant(name));
    }
    return a;
  }

  std::vector<Atom> atoms(const xml::Node* n) const {
    std::vector<Atom> out;
    if (n)
      for (const auto* a : n->childrenNamed("atom")) out.push_back(atom(*a));
    return out;
  }

  std::vector<Variable> variables(const xml::Node* n) const {
    std::vector<Variable> out;
    if (n)
      for (const auto* v : n->childrenNamed("variable")) out.push_back(Variable{attr(*v, "name"), attr(*v, "type")});
    return out;
  }

  CoherentFormula formula(const xml::Node& n) const {
    CoherentFormula f;
    f.universalVars = variables(n.child("universal_vars"));
    f.premises = atoms(n.child("premises"));
    for (const auto* d : n.child("goal")->childrenNamed("disjunct"))
      f.conclusion.push_back(Disjunct{variables(d->child("existential_vars")), atoms(d->child("conjunction"))});
    return f;
  }

  NameBinding bindings(const xml::Node& n) const {
    NameBinding b;
    for (const auto* x : n.childrenNamed("binding")) b.emplace_back(attr(*x, "variable"), attr(*x, "constant"));
    return b;
  }

  int number(const xml::Node& n, const std::string& where) const {
    std::string t = trim(n.text);
    try {
      std::size_t used = 0;
      int v = std::stoi(t, &used);
      if (used == t.size() && v >= 0) return v;
    } catch (const std::exception&) {
    }
    throw SchemaViolation({where + ": expected a non-negative number, found '" + t + "'"});
  }

  ProofTree proof(const xml::Node& n, const std::string& path) const {
    ProofTree t;
    int i = 0;
    for (const auto* s : n.childrenNamed("proof_step")) {
      std::string here = path + "/proof_step[" + std::to_string(i++) + "]";
      ProofStep step;
      step.indentation = number(*s->child("indentation"), here + "/indentation");
      const xml::Node& mp = *s->child("modus_ponens");
      auto facts = atoms(mp.child("facts"));
      std::vector<std::vector<Atom>> derived;
      for (const auto* c : mp.child("derived")->childrenNamed("conjunction")) derived.push_back(atoms(c));
      if (const xml::Node* use = mp.child("use_axiom")) {
        ModusPonensStep m;
        m.axiom = attr(*use, "name");
        m.binding = bindings(*use);
        m.premises = std::move(facts);
        for (const auto* w : mp.child("witnesses")->childrenNamed("witness")) m.witnesses.push_back(attr(*w, "name"));
        m.derived = std::move(derived);
        step.kind = std::move(m);
      } else {
        if (facts.empty() || derived.size() != 1 || derived[0].size() != 1)
          throw SchemaViolation({here + ": a substitution needs a source fact and exactly one derived atom"});
        EqualitySubstitutionStep e;
        e.source = facts.front();
        e.equations.assign(facts.begin() + 1, facts.end());
        e.derived = derived[0][0];
        step.kind = std::move(e);
      }
      t.steps.push_back(std::move(step));
    }
    const xml::Node& c = *n.child("proof_closing");
    std::string here = path + "/proof_closing";
    t.closing.indentation = number(*c.child("indentation"), here + "/indentation");
    t.closing.outcome = c.child("goal_reached_thesis") ? Outcome::Thesis : Outcome::Contradiction;
    if (const xml::Node* cs = c.child("case_split")) {
      CaseSplit split;
      for (const auto* conj : cs->child("split_on")->childrenNamed("conjunction")) split.disjunction.push_back(atoms(conj));
      int b = 0;
      for (const auto* p : cs->childrenNamed("proof"))
        split.branches.push_back(proof(*p, here + "/case_split/proof[" + std::to_string(b++) + "]"));
      t.closing.kind = std::move(split);
    } else if (const xml::Node* f = c.child("from")) {
      FromClosing fc;
      fc.facts = atoms(f->child("facts"));
      xml::Node idx;
      idx.text = attr(*f, "disjunct");
      fc.disjunct = number(idx, here + "/from/@disjunct");
      fc.witnessBinding = bindings(*f->child("witness_binding"));
      t.closing.kind = std::move(fc);
    } else {
      const xml::Node& e = *c.child("efq");
      EfqClosing ec;
      ec.facts = atoms(e.child("facts"));
      ec.axiom = attr(e, "axiom");
      ec.binding = bindings(e);
      t.closing.kind = std::move(ec);
    }
    if (const xml::Node* pn = n.child("proof_name")) t.name = attr(*pn, "name");
    return t;
  }

  Theory theory(const xml::Node& n) const {
    Theory th;
    th.name = text(n, "theory_name");
    const xml::Node& sig = *n.child("signature");
    for (const auto* t : sig.childrenNamed("type")) th.signature.sorts.push_back(Sort{trim(t->text)});
    for (const auto* r : sig.childrenNamed("relation_symbol")) {
      PredicateSymbol p;
      p.name = attr(*r, "name");
      for (const auto* t : r->childrenNamed("type")) p.argSorts.push_back(trim(t->text));
      if (const std::string* neg = r->attribute("negation")) p.negatedPartner = *neg;
      th.signature.predicates.push_back(std::move(p));
    }
    for (const auto* c : sig.childrenNamed("constant"))
      th.signature.constants.push_back(Constant{attr(*c, "name"), text(*c, "type")});
    for (const auto* a : n.childrenNamed("axiom")) {
      NamedFormula f;
      f.name = attr(*a, "name");
      f.role = roleFromString(attr(*a, "role")).value_or(Role::Axiom);
      f.formula = formula(*a->child("cl_formula"));
      th.axioms.push_back(std::move(f));
    }
    return th;
  }

  VernacularDocument document(const xml::Node& root) const {
    VernacularDocument doc;
    const xml::Node& fp = *root.child("frontpage");
    auto raw = [&](const char* name) {
      const xml::Node* c = fp.child(name);
      return c ? c->text : std::string();
    };
    doc.frontpage = Frontpage{raw("author"), raw("prover"), raw("date")};
    doc.theory = theory(*root.child("theory"));
    int ci = 0;
    for (const auto* ch : root.childrenNamed("chapter")) {
      Chapter chapter;
      chapter.name = attr(*ch, "name");
      int ii = 0;
      for (const auto& it : ch->children) {
        std::string path = "/main/chapter[" + std::to_string(ci) + "]/" + it.name + "[" + std::to_string(ii++) + "]";
        TheoremItem item;
        item.name = text(it, it.name == "theorem" ? "theorem_name" : "name");
        item.formula = formula(*it.child("cl_formula"));
        int pi = 0;
        for (const auto* p : it.childrenNamed("proof")) item.proofs.push_back(proof(*p, path + "/proof[" + std::to_string(pi++) + "]"));
        chapter.items.push_back(std::move(item));
      }
      doc.chapters.push_back(std::move(chapter));
      ++ci;
    }
    return doc;
  }
};

void citedNames(const ProofTree& t, std::vector<std::string>& out) {
  for (const auto& s : t.steps)
    if (const auto* mp = std::get_if<ModusPonensStep>(&s.kind)) out.push_back(mp->axiom);
  if (const auto* cs = std::get_if<CaseSplit>(&t.closing.kind))
    for (const auto& b : cs->branches) citedNames(b, out);
  if (const auto* e = std::get_if<EfqClosing>(&t.closing.kind))
    if (!e->axiom.empty()) out.push_back(e->axiom);
}

void checkReferences(const VernacularDocument& doc) {
  std::set<std::string> known;
  for (const auto& ax : doc.theory.axioms) known.insert(ax.name);
  for (const auto& ch : doc.chapters)
    for (const auto& it : ch.items) {
      std::vector<std::string> cited;
      for (const auto& p : it.proofs) citedNames(p, cited);
      for (const auto& name : cited)
        if (!known.count(name)) throw DanglingReference(name);
      if (it.isTheorem()) known.insert(it.name);
    }
}

xml::Node load(const std::string& text, const xml::Resolver& resolver, const std::string& path) {
  xml::Node root = xml::parse(text, path);
  xml::expandIncludes(root, resolver, path);
  return root;
}

}  // namespace

std::string serializeDocument(const VernacularDocument& doc) {
  Writer w;
  w.out = std::string(kDeclaration) + kDoctype + "\n<main>\n";
  w.frontpage(0, doc.frontpage);
  w.theory(0, doc.theory);
  for (const auto& ch : doc.chapters) {
    w.line(0, "<chapter" + Writer::attr("name", ch.name) + ">");
    for (const auto& it : ch.items) w.item(1, it);
    w.line(0, "</chapter>");
  }
  w.out += "</main>\n";
  return w.out;
}

std::string serializeFrontpage(const Frontpage& frontpage) {
  Writer w;
  w.out = kDeclaration;
  w.frontpage(0, frontpage);
  return w.out;
}

std::string serializeTheory(const Theory& theory) {
  Writer w;
  w.out = kDeclaration;
  w.theory(0, theory);
  return w.out;
}

std::string serializeItem(const TheoremItem& item) {
  Writer w;
  w.out = kDeclaration;
  w.item(0, item);
  return w.out;
}

SplitDocument serializeSplit(const VernacularDocument& doc) {
  SplitDocument split;
  Writer w;
  w.out = std::string(kDeclaration) + kDoctype + "\n<main>\n";
  w.include("frontpage.xml");
  split.files.emplace_back("frontpage.xml", serializeFrontpage(doc.frontpage));
  std::string theoryFile = theoryFileName(doc.theory);
  w.include(theoryFile);
  split.files.emplace_back(theoryFile, serializeTheory(doc.theory));
  for (const auto& ch : doc.chapters) {
    w.out += "\n";
    w.line(0, "<chapter" + Writer::attr("name", ch.name) + ">");
    for (const auto& it : ch.items) {
      std::string file = "proof_" + it.name + ".xml";
      w.include(file);
      split.files.emplace_back(file, serializeItem(it));
    }
    w.line(0, "</chapter>");
  }
  w.out += "</main>\n";
  split.main = std::move(w.out);
  return split;
}

VernacularDocument parseDocument(const std::string& xmlText, const xml::Resolver& resolver, const std::string& path) {
  xml::Node root = load(xmlText, resolver, path);
  if (root.name != "main") throw SchemaViolation({"/" + root.name + ": document root must be <main>"});
  auto violations = xml::vernacularDtd().validate(root);
  if (!violations.empty()) throw SchemaViolation(std::move(violations));
  VernacularDocument doc = Reader().document(root);
  checkReferences(doc);
  return doc;
}

VernacularDocument parseDocumentFile(const std::string& path, const xml::Resolver& resolver) {
  return parseDocument(resolver(path), resolver, path);
}

std::vector<std::string> validateDocument(const std::string& xmlText, const xml::Resolver& resolver,
                                          const std::string& path) {
  xml::Node root;
  try {
    root = load(xmlText, resolver, path);
  } catch (const IncludeCycle& e) {
    return {e.what()};
  } catch (const Error& e) {
    return {e.what()};
  }
  return xml::vernacularDtd().validate(root);
}

}  // namespace clv
