#include "clv/tptp.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "clv/errors.hpp"

namespace clv::tptp {

namespace fs = std::filesystem;

bool Formula::operator==(const Formula& o) const {
  return kind == o.kind && atom == o.atom && variables == o.variables && children == o.children;
}

IncludeResolver fileResolver() {
  return [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
}

namespace {

enum class Tok {
  Lower, Upper, Quoted, Dollar, LParen, RParen, LBracket, RBracket, Comma, Dot, Colon,
  Bang, Question, Tilde, Amp, Pipe, Eq, Neq, Implies, RevImplies, Iff, End
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  Lexer(const std::string& text, std::string file) : text_(text), file_(std::move(file)) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skipSpaceAndComments();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= text_.size()) {
        t.kind = Tok::End;
        out.push_back(t);
        return out;
      }
      char c = text_[pos_];
      if (std::islower(static_cast<unsigned char>(c))) {
        t.kind = Tok::Lower;
        t.text = word();
      } else if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Tok::Upper;
        t.text = word();
      } else if (c == '$') {
        advance();
        t.kind = Tok::Dollar;
        t.text = "$" + word();
      } else if (c == '\'') {
        t.kind = Tok::Quoted;
        t.text = quoted();
      } else {
        t.kind = punct(t);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  bool startsWith(std::string_view s) const { return text_.compare(pos_, s.size(), s) == 0; }

  void skipSpaceAndComments() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (startsWith("/*")) {
        int l = line_, k = col_;
        advance();
        advance();
        while (pos_ < text_.size() && !startsWith("*/")) advance();
        if (pos_ >= text_.size()) throw SyntaxError(file_, l, k, "end of comment '*/'");
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  std::string word() {
    std::string out;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      out += text_[pos_];
      advance();
    }
    return out;
  }

  std::string quoted() {
    int l = line_, k = col_;
    advance();
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '\'') {
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) advance();
      out += text_[pos_];
      advance();
    }
    if (pos_ >= text_.size()) throw SyntaxError(file_, l, k, "closing quote");
    advance();
    return out;
  }

  Tok punct(Token& t) {
    static const std::pair<std::string_view, Tok> table[] = {
        {"<=>", Tok::Iff}, {"=>", Tok::Implies}, {"<=", Tok::RevImplies}, {"!=", Tok::Neq},
        {"(", Tok::LParen}, {")", Tok::RParen}, {"[", Tok::LBracket}, {"]", Tok::RBracket},
        {",", Tok::Comma}, {".", Tok::Dot}, {":", Tok::Colon}, {"!", Tok::Bang},
        {"?", Tok::Question}, {"~", Tok::Tilde}, {"&", Tok::Amp}, {"|", Tok::Pipe},
        {"=", Tok::Eq}};
    for (const auto& [s, k] : table) {
      if (startsWith(s)) {
        t.text = std::string(s);
        for (std::size_t i = 0; i < s.size(); ++i) advance();
        return k;
      }
    }
    throw SyntaxError(file_, line_, col_, "a token (unexpected character '" + std::string(1, text_[pos_]) + "')");
  }

  const std::string& text_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

struct Statement {
  bool isInclude = false;
  std::string includePath;
  AnnotatedFormula formula;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string file) : toks_(std::move(tokens)), file_(std::move(file)) {}

  std::vector<Statement> statements() {
    std::vector<Statement> out;
    while (peek().kind != Tok::End) out.push_back(statement());
    return out;
  }

  Formula formulaOnly() {
    Formula f = formula();
    expect(Tok::End, "end of input");
    return f;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  Token next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  [[noreturn]] void fail(const std::string& expected) const {
    const auto& t = peek();
    throw SyntaxError(file_, t.line, t.column, expected);
  }

  Token expect(Tok kind, const std::string& what) {
    if (peek().kind != kind) fail(what);
    return next();
  }

  Statement statement() {
    Token head = peek();
    if (head.kind != Tok::Lower) fail("'fof(' or 'include('");
    if (head.text == "include") {
      next();
      expect(Tok::LParen, "'('");
      Token path = expect(Tok::Quoted, "quoted file name");
      expect(Tok::RParen, "')' (include selections are not supported)");
      expect(Tok::Dot, "'.'");
      Statement s;
      s.isInclude = true;
      s.includePath = path.text;
      return s;
    }
    if (head.text == "cnf" || head.text == "tff" || head.text == "thf" || head.text == "tcf")
      fail("'fof' (only the FOF language is accepted, not " + head.text + ")");
    if (head.text != "fof") fail("'fof' or 'include'");
    next();
    expect(Tok::LParen, "'('");
    Token name = next();
    if (name.kind != Tok::Lower && name.kind != Tok::Quoted && name.kind != Tok::Upper) {
      --pos_;
      fail("formula name");
    }
    expect(Tok::Comma, "','");
    Token role = peek();
    if (role.kind != Tok::Lower) fail("formula role");
    auto r = roleFromString(role.text);
    if (!r) fail("role axiom, definition, theorem or conjecture (got '" + role.text + "')");
    next();
    expect(Tok::Comma, "','");
    Formula f = formula();
    if (peek().kind == Tok::Comma) fail("')' (annotations are not supported)");
    expect(Tok::RParen, "')'");
    expect(Tok::Dot, "'.'");
    Statement s;
    s.formula.name = name.text;
    s.formula.role = *r;
    s.formula.formula = std::move(f);
    s.formula.file = file_;
    s.formula.line = head.line;
    return s;
  }

  static bool isBinary(Tok k) {
    return k == Tok::Implies || k == Tok::RevImplies || k == Tok::Iff;
  }

  Formula formula() {
    Formula first = unitary();
    Tok k = peek().kind;
    if (isBinary(k)) {
      Token op = next();
      Formula second = unitary();
      Formula f;
      f.line = op.line;
      f.column = op.column;
      if (k == Tok::Iff) {
        f.kind = Formula::Kind::Iff;
        f.children = {std::move(first), std::move(second)};
      } else {
        f.kind = Formula::Kind::Implies;
        if (k == Tok::Implies)
          f.children = {std::move(first), std::move(second)};
        else
          f.children = {std::move(second), std::move(first)};
      }
      if (isBinary(peek().kind) || peek().kind == Tok::Amp || peek().kind == Tok::Pipe)
        fail("')' (binary connectives are not associative; add parentheses)");
      return f;
    }
    if (k == Tok::Amp || k == Tok::Pipe) {
      Formula f;
      f.kind = k == Tok::Amp ? Formula::Kind::And : Formula::Kind::Or;
      f.line = peek().line;
      f.column = peek().column;
      f.children.push_back(std::move(first));
      while (peek().kind == k) {
        next();
        f.children.push_back(unitary());
      }
      Tok after = peek().kind;
      if (after == Tok::Amp || after == Tok::Pipe || isBinary(after))
        fail("')' (mixed connectives need parentheses)");
      return f;
    }
    return first;
  }

  Formula unitary() {
    Token t = peek();
    if (t.kind == Tok::LParen) {
      next();
      Formula f = formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (t.kind == Tok::Bang || t.kind == Tok::Question) {
      next();
      Formula f;
      f.kind = t.kind == Tok::Bang ? Formula::Kind::Forall : Formula::Kind::Exists;
      f.line = t.line;
      f.column = t.column;
      expect(Tok::LBracket, "'['");
      for (;;) {
        Token v = expect(Tok::Upper, "variable");
        if (peek().kind == Tok::Colon) fail("',' or ']' (typed variables are not supported)");
        f.variables.push_back(v.text);
        if (peek().kind == Tok::Comma) {
          next();
          continue;
        }
        expect(Tok::RBracket, "']'");
        break;
      }
      expect(Tok::Colon, "':'");
      f.children.push_back(unitary());
      return f;
    }
    if (t.kind == Tok::Tilde) {
      next();
      Formula f;
      f.kind = Formula::Kind::Not;
      f.line = t.line;
      f.column = t.column;
      f.children.push_back(unitary());
      return f;
    }
    return atomic();
  }

  Term term() {
    Token t = peek();
    if (t.kind == Tok::Upper) {
      next();
      return Term::variable(t.text);
    }
    if (t.kind == Tok::Lower || t.kind == Tok::Quoted) {
      next();
      if (peek().kind == Tok::LParen) throw UnsupportedTerm(file_, t.line, t.column, t.text);
      return Term::constant(t.text);
    }
    fail("term");
  }

  Formula atomic() {
    Token t = peek();
    Formula f;
    f.kind = Formula::Kind::Atom;
    f.line = t.line;
    f.column = t.column;
    if (t.kind == Tok::Dollar) {
      next();
      if (t.text == "$true") f.kind = Formula::Kind::True;
      else if (t.text == "$false") f.kind = Formula::Kind::False;
      else fail("$true or $false");
      return f;
    }
    bool predicateStart = (t.kind == Tok::Lower || t.kind == Tok::Quoted) &&
                          peek(1).kind != Tok::Eq && peek(1).kind != Tok::Neq;
    if (predicateStart) {
      next();
      f.atom.predicate = t.text;
      if (peek().kind == Tok::LParen) {
        next();
        for (;;) {
          f.atom.args.push_back(term());
          if (peek().kind == Tok::Comma) {
            next();
            continue;
          }
          expect(Tok::RParen, "',' or ')'");
          break;
        }
        if (peek().kind == Tok::Eq || peek().kind == Tok::Neq)
          throw UnsupportedTerm(file_, t.line, t.column, t.text);
      }
      return f;
    }
    Term lhs = term();
    Token op = peek();
    if (op.kind != Tok::Eq && op.kind != Tok::Neq) fail("'=' or '!='");
    next();
    Term rhs = term();
    f.atom.predicate = op.kind == Tok::Eq ? std::string(kEquality) : std::string(kDisequality);
    f.atom.args = {std::move(lhs), std::move(rhs)};
    return f;
  }

  std::vector<Token> toks_;
  std::string file_;
  std::size_t pos_ = 0;
};

void parseInto(const std::string& text, const std::string& path, const IncludeResolver& resolver,
               std::vector<std::string>& stack, SourceProblem& out, std::set<std::string>& names) {
  Parser parser(Lexer(text, path).run(), path);
  for (auto& s : parser.statements()) {
    if (s.isInclude) {
      fs::path base = fs::path(path).parent_path();
      std::string resolved = (base / s.includePath).lexically_normal().string();
      if (std::find(stack.begin(), stack.end(), resolved) != stack.end()) throw IncludeCycle(resolved);
      if (std::find(out.includes.begin(), out.includes.end(), resolved) == out.includes.end())
        out.includes.push_back(resolved);
      stack.push_back(resolved);
      parseInto(resolver(resolved), resolved, resolver, stack, out, names);
      stack.pop_back();
      continue;
    }
    if (!names.insert(s.formula.name).second) throw DuplicateName(s.formula.name);
    out.formulas.push_back(std::move(s.formula));
  }
}

bool isLowerWord(const std::string& s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

std::string quoteIfNeeded(const std::string& s) {
  if (isLowerWord(s)) return s;
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  return out + "'";
}

std::string printTerm(const Term& t) { return t.isVariable() ? t.name : quoteIfNeeded(t.name); }

}  // namespace

SourceProblem parseProblem(const std::string& text, const IncludeResolver& resolver,
                           const std::string& path) {
  SourceProblem out;
  std::vector<std::string> stack{fs::path(path).lexically_normal().string()};
  std::set<std::string> names;
  parseInto(text, path, resolver, stack, out, names);
  return out;
}

SourceProblem parseFile(const std::string& path, const IncludeResolver& resolver) {
  return parseProblem(resolver(path), resolver, path);
}

std::string prettyPrint(const Formula& f) {
  using K = Formula::Kind;
  auto join = [&](const char* op) {
    std::string out = "(";
    for (std::size_t i = 0; i < f.children.size(); ++i) {
      if (i) out += op;
      out += prettyPrint(f.children[i]);
    }
    return out + ")";
  };
  switch (f.kind) {
    case K::True: return "$true";
    case K::False: return "$false";
    case K::Atom: {
      const Atom& a = f.atom;
      if (a.predicate == kEquality || a.predicate == kDisequality)
        return printTerm(a.args[0]) + " " + a.predicate + " " + printTerm(a.args[1]);
      std::string out = quoteIfNeeded(a.predicate);
      if (!a.args.empty()) {
        out += "(";
        for (std::size_t i = 0; i < a.args.size(); ++i) {
          if (i) out += ",";
          out += printTerm(a.args[i]);
        }
        out += ")";
      }
      return out;
    }
    case K::Not: return "~ " + prettyPrint(f.children[0]);
    case K::And: return join(" & ");
    case K::Or: return join(" | ");
    case K::Implies: return join(" => ");
    case K::Iff: return join(" <=> ");
    case K::Forall:
    case K::Exists: {
      std::string out = f.kind == K::Forall ? "(![" : "(?[";
      for (std::size_t i = 0; i < f.variables.size(); ++i) {
        if (i) out += ",";
        out += f.variables[i];
      }
      return out + "]: " + prettyPrint(f.children[0]) + ")";
    }
  }
  return {};
}

std::string prettyPrint(const SourceProblem& problem) {
  std::string out;
  for (const auto& af : problem.formulas)
    out += "fof(" + quoteIfNeeded(af.name) + ", " + std::string(toString(af.role)) + ", " +
           prettyPrint(af.formula) + ").\n";
  return out;
}

// ---------------------------------------------------------------------------
// Normalization into coherent shape

namespace {

using K = Formula::Kind;

std::string where(const Formula& f) {
  return "line " + std::to_string(f.line) + ", column " + std::to_string(f.column);
}

class Normalizer {
 public:
  CoherentFormula run(const Formula& root) {
    const Formula* body = &root;
    while (body->kind == K::Forall) {
      for (const auto& v : body->variables) bindUniversal(v, *body);
      body = &body->children[0];
    }
    while (body->kind == K::Implies) {
      premises(body->children[0]);
      body = &body->children[1];
      if (body->kind == K::Forall)
        throw NotCoherent("universal quantifier inside an implication", where(*body));
    }
    disjuncts(*body, {});

    // Implicit universal closure: free variables not bound anywhere.
    for (const auto& name : implicit_) {
      if (std::find(existentialNames_.begin(), existentialNames_.end(), name) != existentialNames_.end())
        throw NotCoherent("variable '" + name + "' is both free and existentially bound", "formula");
      out_.universalVars.push_back({name, std::string(kDefaultSort)});
    }
    return std::move(out_);
  }

 private:
  bool isUniversal(const std::string& v) const {
    return std::any_of(out_.universalVars.begin(), out_.universalVars.end(),
                       [&](const Variable& u) { return u.name == v; });
  }

  void bindUniversal(const std::string& v, const Formula& at) {
    if (isUniversal(v)) throw NotCoherent("variable '" + v + "' is bound twice", where(at));
    out_.universalVars.push_back({v, std::string(kDefaultSort)});
  }

  void noteVariables(const Atom& a, const std::vector<std::string>& scope) {
    for (const auto& t : a.args) {
      if (!t.isVariable() || isUniversal(t.name)) continue;
      if (std::find(scope.begin(), scope.end(), t.name) != scope.end()) continue;
      if (std::find(implicit_.begin(), implicit_.end(), t.name) == implicit_.end())
        implicit_.push_back(t.name);
    }
  }

  Atom literal(const Formula& f, const std::vector<std::string>& scope) {
    Atom a;
    if (f.kind == K::Atom) {
      a = f.atom;
    } else if (f.kind == K::Not && f.children[0].kind == K::Atom) {
      a = f.children[0].atom;
      a.negated = true;
    } else {
      throw NotCoherent("negation of a non-atomic formula", where(f));
    }
    if (a.predicate == kDisequality) {
      a.predicate = std::string(kEquality);
      a.negated = !a.negated;
    }
    noteVariables(a, scope);
    return a;
  }

  void premises(const Formula& f) {
    switch (f.kind) {
      case K::And:
        for (const auto& c : f.children) premises(c);
        return;
      case K::True: return;
      case K::Atom:
      case K::Not: out_.premises.push_back(literal(f, {})); return;
      case K::Implies:
        throw NotCoherent("implication inside the premises", where(f));
      case K::False: throw NotCoherent("$false among the premises", where(f));
      case K::Or: throw NotCoherent("disjunction in the premises", where(f));
      case K::Exists: throw NotCoherent("existential quantifier in the premises", where(f));
      case K::Forall: throw NotCoherent("universal quantifier in the premises", where(f));
      case K::Iff: throw NotCoherent("equivalence is not coherent", where(f));
    }
  }

  void conjuncts(const Formula& f, const std::vector<std::string>& scope, std::vector<Atom>& out) {
    switch (f.kind) {
      case K::And:
        for (const auto& c : f.children) conjuncts(c, scope, out);
        return;
      case K::True: return;
      case K::Atom:
      case K::Not: out.push_back(literal(f, scope)); return;
      case K::False: throw NotCoherent("$false inside a conjunction", where(f));
      case K::Or: throw NotCoherent("disjunction under a conjunction", where(f));
      case K::Exists:
      case K::Forall: throw NotCoherent("quantifier under a conjunction", where(f));
      case K::Implies: throw NotCoherent("implication in the conclusion", where(f));
      case K::Iff: throw NotCoherent("equivalence is not coherent", where(f));
    }
  }

  void disjuncts(const Formula& f, std::vector<std::string> scope) {
    switch (f.kind) {
      case K::Or:
        for (const auto& c : f.children) disjuncts(c, scope);
        return;
      case K::False: return;
      case K::Exists:
        for (const auto& v : f.variables) {
          if (isUniversal(v) || std::find(scope.begin(), scope.end(), v) != scope.end())
            throw NotCoherent("variable '" + v + "' is bound twice", where(f));
          scope.push_back(v);
          existentialNames_.push_back(v);
        }
        disjuncts(f.children[0], scope);
        return;
      case K::True: throw NotCoherent("$true in the conclusion", where(f));
      case K::Forall: throw NotCoherent("universal quantifier in the conclusion", where(f));
      case K::Implies: throw NotCoherent("implication in the conclusion", where(f));
      case K::Iff: throw NotCoherent("equivalence is not coherent", where(f));
      case K::And:
      case K::Atom:
      case K::Not: {
        Disjunct d;
        conjuncts(f, scope, d.conjuncts);
        if (d.conjuncts.empty()) throw NotCoherent("$true in the conclusion", where(f));
        for (const auto& v : scope) {
          bool used = std::any_of(d.conjuncts.begin(), d.conjuncts.end(), [&](const Atom& a) {
            return std::any_of(a.args.begin(), a.args.end(),
                               [&](const Term& t) { return t.isVariable() && t.name == v; });
          });
          if (used) d.existentialVars.push_back({v, std::string(kDefaultSort)});
        }
        out_.conclusion.push_back(std::move(d));
        return;
      }
    }
  }

  CoherentFormula out_;
  std::vector<std::string> implicit_;
  std::vector<std::string> existentialNames_;
};

}  // namespace

CoherentFormula toCoherent(const Formula& formula) { return Normalizer().run(formula); }

AssembledProblem assembleTheory(const SourceProblem& problem, const AssembleOptions& options) {
  AssembledProblem out;
  Theory& theory = out.theory;
  theory.name = options.theoryName;
  theory.signature.sorts.push_back({std::string(kDefaultSort)});

  auto declare = [&](const Atom& a) {
    for (const auto& t : a.args)
      if (!t.isVariable() && !theory.signature.findConstant(t.name))
        theory.signature.constants.push_back({t.name, std::string(kDefaultSort)});
    if (a.predicate == kEquality || a.predicate == kDisequality) return;
    if (const auto* p = theory.signature.findPredicate(a.predicate)) {
      if (p->arity() != a.args.size()) throw ArityConflict(a.predicate);
      return;
    }
    theory.signature.predicates.push_back(
        {a.predicate, std::vector<std::string>(a.args.size(), std::string(kDefaultSort)), false, {}});
  };

  for (const auto& af : problem.formulas) {
    CoherentFormula cf;
    try {
      cf = toCoherent(af.formula);
    } catch (const NotCoherent& e) {
      throw NotCoherent(e.reason, "formula '" + af.name + "' (" + af.file + ":" +
                                      std::to_string(af.line) + "), " + e.location);
    }
    for (const auto& a : cf.premises) declare(a);
    for (const auto& d : cf.conclusion)
      for (const auto& a : d.conjuncts) declare(a);
    NamedFormula nf{af.name, af.role, std::move(cf)};
    if (af.role == Role::Conjecture)
      out.conjectures.push_back(std::move(nf));
    else
      theory.axioms.push_back(std::move(nf));
  }

  bool mentionsEquality = false;
  auto scan = [&](const CoherentFormula& f) {
    auto eq = [](const Atom& a) { return a.predicate == kEquality; };
    mentionsEquality |= std::any_of(f.premises.begin(), f.premises.end(), eq);
    for (const auto& d : f.conclusion)
      mentionsEquality |= std::any_of(d.conjuncts.begin(), d.conjuncts.end(), eq);
  };
  for (const auto& ax : theory.axioms) scan(ax.formula);
  for (const auto& c : out.conjectures) scan(c.formula);

  theory = encodeNegation(std::move(theory), out.conjectures);
  // Equality decidability only matters when equality occurs at all.
  if (options.addEqualityDecidability && mentionsEquality) addEqualityDecidability(theory);
  checkWellFormed(theory);
  return out;
}

}  // namespace clv::tptp
