#include <cctype>
#include <sstream>

#include "clv/errors.hpp"
#include "clv/export.hpp"
#include "render_common.hpp"

namespace clv {

namespace {

std::string backendKey(TextTarget target) {
  switch (target) {
    case TextTarget::Latex: return "latex";
    case TextTarget::Html: return "html";
    case TextTarget::Plain: return "plain";
  }
  return "";
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<int> parseGroups(const std::string& text, int line) {
  std::vector<int> groups;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
      throw LayoutError("line " + std::to_string(line) + ": bad argument groups '" + text + "'");
    groups.push_back(std::stoi(part));
    if (groups.back() <= 0) throw LayoutError("line " + std::to_string(line) + ": empty argument group");
  }
  return groups;
}

}  // namespace

std::string LayoutConfig::Directive::symbol(TextTarget target) const {
  if (auto it = symbols.find(backendKey(target)); it != symbols.end()) return it->second;
  if (auto it = symbols.find(""); it != symbols.end()) return it->second;
  return "";
}

LayoutConfig LayoutConfig::parse(std::string_view text) {
  LayoutConfig cfg;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineNo = 0;
  while (std::getline(in, raw)) {
    ++lineNo;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::string line = trim(raw);
    if (line.empty()) continue;
    std::istringstream words(line);
    std::string head, kind;
    words >> head >> kind;
    auto slash = head.find('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 == head.size() ||
        head.find_first_not_of("0123456789", slash + 1) != std::string::npos)
      throw LayoutError("line " + std::to_string(lineNo) + ": expected name/arity, got '" + head + "'");
    int arity = std::stoi(head.substr(slash + 1));
    Directive d;
    if (kind == "functional") d.kind = Directive::Kind::Functional;
    else if (kind == "infix") d.kind = Directive::Kind::Infix;
    else if (kind == "pairinfix") d.kind = Directive::Kind::PairInfix;
    else if (kind == "tupleinfix") d.kind = Directive::Kind::TupleInfix;
    else throw LayoutError("line " + std::to_string(lineNo) + ": unknown layout '" + kind + "'");

    std::string word;
    if (d.kind == Directive::Kind::PairInfix || d.kind == Directive::Kind::TupleInfix) {
      if (!(words >> word)) throw LayoutError("line " + std::to_string(lineNo) + ": missing argument groups");
      d.groups = parseGroups(word, lineNo);
      if (d.groups.size() != 2) throw LayoutError("line " + std::to_string(lineNo) + ": infix needs two groups");
    } else if (d.kind == Directive::Kind::Infix) {
      d.groups = {1, 1};
    }
    int total = 0;
    for (int g : d.groups) total += g;
    if (!d.groups.empty() && total != arity)
      throw LayoutError("line " + std::to_string(lineNo) + ": groups cover " + std::to_string(total) +
                        " arguments, arity is " + std::to_string(arity));
    while (words >> word) {
      auto eq = word.find('=');
      std::string key = eq == std::string::npos ? "" : word.substr(0, eq);
      if (key != "" && key != "latex" && key != "html" && key != "plain") key.clear(), eq = std::string::npos;
      d.symbols[key] = eq == std::string::npos ? word : word.substr(eq + 1);
    }
    if (d.kind != Directive::Kind::Functional && d.symbols.empty())
      throw LayoutError("line " + std::to_string(lineNo) + ": infix layout without symbol");
    if (!cfg.directives.emplace(head, std::move(d)).second)
      throw LayoutError("line " + std::to_string(lineNo) + ": duplicate directive for " + head);
  }
  return cfg;
}

const LayoutConfig::Directive* LayoutConfig::find(const std::string& predicate, std::size_t arity) const {
  auto it = directives.find(predicate + "/" + std::to_string(arity));
  return it == directives.end() ? nullptr : &it->second;
}

namespace render {

void checkLayout(const LayoutConfig& layout, const Signature& sig) {
  for (const auto& [key, d] : layout.directives) {
    auto slash = key.rfind('/');
    std::string name = key.substr(0, slash);
    std::size_t arity = std::stoul(key.substr(slash + 1));
    const PredicateSymbol* p = sig.findPredicate(name);
    if (p && p->arity() != arity)
      throw LayoutError("directive " + key + " does not match " + name + "/" + std::to_string(p->arity()));
  }
}

std::string identifier(std::string_view name, TextTarget target) {
  std::string out;
  for (char c : name) {
    if (target == TextTarget::Latex && (c == '_' || c == '&' || c == '%' || c == '#' || c == '$')) out += '\\';
    if (target == TextTarget::Html) {
      if (c == '&') { out += "&amp;"; continue; }
      if (c == '<') { out += "&lt;"; continue; }
      if (c == '>') { out += "&gt;"; continue; }
    }
    out += c;
  }
  return out;
}

std::optional<std::string> positiveOf(const Signature& sig, const std::string& predicate) {
  const PredicateSymbol* p = sig.findPredicate(predicate);
  if (!p || !p->negatedPartner) return std::nullopt;
  const PredicateSymbol* q = sig.findPredicate(*p->negatedPartner);
  if (!q) return std::nullopt;
  // The partner introduced by the negation encoding is declared later.
  if (q < p) return q->name;
  return std::nullopt;
}

}  // namespace render

namespace {

std::string unescapeIdentifier(std::string_view text, TextTarget target) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (target == TextTarget::Latex && text[i] == '\\' && i + 1 < text.size()) {
      out += text[++i];
    } else if (target == TextTarget::Html && text[i] == '&') {
      auto semi = text.find(';', i);
      std::string_view ent = text.substr(i, semi - i + 1);
      out += ent == "&amp;" ? '&' : ent == "&lt;" ? '<' : '>';
      i = semi;
    } else {
      out += text[i];
    }
  }
  return out;
}

std::string negationPrefix(TextTarget target) {
  switch (target) {
    case TextTarget::Latex: return "\\lnot ";
    case TextTarget::Html: return "&not;";
    case TextTarget::Plain: return "~";
  }
  return "";
}

std::string disequalitySymbol(TextTarget target) {
  switch (target) {
    case TextTarget::Latex: return "\\neq";
    case TextTarget::Html: return "&ne;";
    case TextTarget::Plain: return "!=";
  }
  return "";
}

bool allShort(const std::vector<Term>& args, std::size_t from, std::size_t count) {
  for (std::size_t i = from; i < from + count; ++i)
    if (args[i].name.size() != 1) return false;
  return true;
}

std::string group(const std::vector<Term>& args, std::size_t from, std::size_t count, bool tuple, TextTarget target) {
  std::string out;
  // Juxtaposition is only unambiguous for one-character names.
  bool juxtapose = !tuple && allShort(args, from, count);
  if (!juxtapose && count > 1) out += "(";
  for (std::size_t i = from; i < from + count; ++i) {
    if (i > from && !juxtapose) out += ", ";
    out += render::identifier(args[i].name, target);
  }
  if (!juxtapose && count > 1) out += ")";
  return out;
}

std::string renderPositive(const Atom& atom, const LayoutConfig& layout, TextTarget target) {
  if (atom.isEquality() || atom.isDisequality()) {
    std::string sym = atom.isEquality() ? "=" : disequalitySymbol(target);
    return render::identifier(atom.args[0].name, target) + " " + sym + " " +
           render::identifier(atom.args[1].name, target);
  }
  const LayoutConfig::Directive* d = layout.find(atom.predicate, atom.args.size());
  using Kind = LayoutConfig::Directive::Kind;
  if (!d || d->kind == Kind::Functional) {
    std::string name = d && !d->symbol(target).empty() ? d->symbol(target) : render::identifier(atom.predicate, target);
    std::string out = name + "(";
    for (std::size_t i = 0; i < atom.args.size(); ++i) {
      if (i) out += ", ";
      out += render::identifier(atom.args[i].name, target);
    }
    return out + ")";
  }
  std::size_t left = static_cast<std::size_t>(d->groups[0]);
  bool tuple = d->kind == Kind::TupleInfix;
  return group(atom.args, 0, left, tuple, target) + " " + d->symbol(target) + " " +
         group(atom.args, left, atom.args.size() - left, tuple, target);
}

}  // namespace

std::string renderAtom(const Atom& atom, const LayoutConfig& layout, TextTarget target, const Signature& sig) {
  if (auto pos = render::positiveOf(sig, atom.predicate)) {
    Atom positive{*pos, atom.args, false};
    return negationPrefix(target) + "(" + renderPositive(positive, layout, target) + ")";
  }
  return renderPositive(atom, layout, target);
}

namespace {

std::vector<Term> parseGroup(std::string_view text, std::size_t count, TextTarget target) {
  std::string s = trim(text);
  std::vector<Term> out;
  if (count > 1 && s.size() >= 2 && s.front() == '(' && s.back() == ')') {
    std::string inner = s.substr(1, s.size() - 2);
    std::stringstream ss(inner);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(Term::constant(unescapeIdentifier(trim(part), target)));
  } else if (count == 1) {
    out.push_back(Term::constant(unescapeIdentifier(s, target)));
  } else {
    for (char c : s) out.push_back(Term::constant(std::string(1, c)));
  }
  if (out.size() != count) throw Error("cannot read argument group '" + s + "'");
  return out;
}

Atom parsePositive(std::string_view text, const LayoutConfig& layout, TextTarget target, const Signature& sig) {
  std::string s = trim(text);
  for (std::string sym : {std::string(" = "), " " + disequalitySymbol(target) + " "}) {
    auto at = s.find(sym);
    if (at != std::string::npos && s.find('(') == std::string::npos) {
      return Atom{sym == " = " ? std::string(kEquality) : std::string(kDisequality),
                  {Term::constant(unescapeIdentifier(s.substr(0, at), target)),
                   Term::constant(unescapeIdentifier(s.substr(at + sym.size()), target))}};
    }
  }
  using Kind = LayoutConfig::Directive::Kind;
  for (const auto& [key, d] : layout.directives) {
    if (d.kind == Kind::Functional) continue;
    std::string sym = " " + d.symbol(target) + " ";
    auto at = s.find(sym);
    if (at == std::string::npos) continue;
    auto slash = key.rfind('/');
    std::size_t arity = std::stoul(key.substr(slash + 1));
    std::size_t left = static_cast<std::size_t>(d.groups[0]);
    Atom atom{key.substr(0, slash), {}};
    atom.args = parseGroup(std::string_view(s).substr(0, at), left, target);
    auto right = parseGroup(std::string_view(s).substr(at + sym.size()), arity - left, target);
    atom.args.insert(atom.args.end(), right.begin(), right.end());
    return atom;
  }
  auto open = s.find('(');
  if (open == std::string::npos || s.back() != ')') throw Error("cannot read atom '" + s + "'");
  std::string name = s.substr(0, open);
  for (const auto& [key, d] : layout.directives)
    if (d.kind == Kind::Functional && !d.symbol(target).empty() && d.symbol(target) == name)
      name = key.substr(0, key.rfind('/'));
  Atom atom{unescapeIdentifier(name, target), {}};
  std::string inner = s.substr(open + 1, s.size() - open - 2);
  std::stringstream ss(inner);
  std::string part;
  while (std::getline(ss, part, ',')) atom.args.push_back(Term::constant(unescapeIdentifier(trim(part), target)));
  (void)sig;
  return atom;
}

}  // namespace

Atom parseRenderedAtom(std::string_view text, const LayoutConfig& layout, TextTarget target, const Signature& sig) {
  std::string s = trim(text);
  std::string neg = negationPrefix(target);
  if (s.starts_with(neg) && s.size() > neg.size() && s[neg.size()] == '(' && s.back() == ')') {
    Atom positive = parsePositive(std::string_view(s).substr(neg.size() + 1, s.size() - neg.size() - 2), layout,
                                  target, sig);
    positive.predicate = negationPartnerName(sig, positive.predicate);
    return positive;
  }
  return parsePositive(s, layout, target, sig);
}

}  // namespace clv
