#include "test_doctest.hpp"

#include "clv/errors.hpp"
#include "clv/export.hpp"
#include "support.hpp"

using namespace clv;

namespace {

Signature tarskiSignature() {
  Signature sig;
  sig.sorts = {Sort{"point"}};
  sig.predicates = {PredicateSymbol{"bet", {"point", "point", "point"}},
                    PredicateSymbol{"cong", {"point", "point", "point", "point"}},
                    PredicateSymbol{"=", {"point", "point"}, true}};
  return sig;
}

LayoutConfig tarski() { return LayoutConfig::parse(testing::readFile(testing::sourceDir() / "assets/tarski.layout")); }

constexpr TextTarget kTargets[] = {TextTarget::Latex, TextTarget::Html, TextTarget::Plain};

}  // namespace

TEST_CASE("parse directives") {
  auto layout = LayoutConfig::parse(
      "# comment\n"
      "cong/4 pairinfix 2,2 latex=\\cong html=&cong; plain===\n"
      "perp/2 infix latex=\\perp html=&perp; plain=_|_\n"
      "eqd/4 tupleinfix 2,2 \\equiv   # trailing comment\n"
      "\n"
      "mid/3 functional\n");
  CHECK(layout.directives.size() == 4);
  const auto* cong = layout.find("cong", 4);
  REQUIRE(cong);
  CHECK(cong->kind == LayoutConfig::Directive::Kind::PairInfix);
  CHECK(cong->groups == std::vector<int>{2, 2});
  CHECK(cong->symbol(TextTarget::Latex) == "\\cong");
  CHECK(cong->symbol(TextTarget::Plain) == "==");
  const auto* eqd = layout.find("eqd", 4);
  REQUIRE(eqd);
  CHECK(eqd->symbol(TextTarget::Html) == "\\equiv");
  CHECK(layout.find("cong", 3) == nullptr);
  CHECK(layout.find("perp", 2)->groups == std::vector<int>{1, 1});
}

TEST_CASE("layout errors") {
  CHECK_THROWS_AS(LayoutConfig::parse("cong pairinfix 2,2 x"), LayoutError);
  CHECK_THROWS_AS(LayoutConfig::parse("cong/4 sideways x"), LayoutError);
  CHECK_THROWS_AS(LayoutConfig::parse("cong/4 pairinfix 2,1 x"), LayoutError);
  CHECK_THROWS_AS(LayoutConfig::parse("cong/4 pairinfix 4 x"), LayoutError);
  CHECK_THROWS_AS(LayoutConfig::parse("perp/2 infix"), LayoutError);
  CHECK_THROWS_AS(LayoutConfig::parse("perp/2 infix a\nperp/2 infix b"), LayoutError);

  auto wrongArity = LayoutConfig::parse("bet/2 infix x");
  VernacularDocument doc;
  doc.theory.signature = tarskiSignature();
  for (TextTarget t : kTargets) CHECK_THROWS_AS(exportNaturalLanguage(doc, wrongArity, t), LayoutError);
  auto undeclared = LayoutConfig::parse("perp/2 infix x");
  CHECK_NOTHROW(exportNaturalLanguage(doc, undeclared, TextTarget::Plain));
}

TEST_CASE("tarski notation") {
  auto layout = tarski();
  auto sig = tarskiSignature();
  Atom cong = Atom::ground("cong", {"A", "B", "A", "D"});
  CHECK(renderAtom(cong, layout, TextTarget::Latex, sig) == "AB \\cong AD");
  CHECK(renderAtom(cong, layout, TextTarget::Html, sig) == "AB &cong; AD");
  CHECK(renderAtom(cong, layout, TextTarget::Plain, sig) == "AB == AD");
  Atom longNames = Atom::ground("cong", {"A1", "B", "A", "D"});
  CHECK(renderAtom(longNames, layout, TextTarget::Plain, sig) == "(A1, B) == AD");
  CHECK(renderAtom(Atom::ground("bet", {"A", "B", "C"}), layout, TextTarget::Latex, sig) == "bet(A, B, C)");
  CHECK(renderAtom(Atom::ground("=", {"A", "B"}), layout, TextTarget::Latex, sig) == "A = B");
  CHECK(renderAtom(Atom::ground("!=", {"A", "B"}), layout, TextTarget::Latex, sig) == "A \\neq B");
  CHECK(renderAtom(Atom::ground("!=", {"A", "B"}), layout, TextTarget::Html, sig) == "A &ne; B");
}

TEST_CASE("negation partners render as negations") {
  auto sig = tarskiSignature();
  sig.predicates[0].negatedPartner = "bet_bar";
  sig.predicates.push_back(PredicateSymbol{"bet_bar", {"point", "point", "point"}, false, "bet"});
  Atom a = Atom::ground("bet_bar", {"A", "B", "C"});
  LayoutConfig none;
  CHECK(renderAtom(a, none, TextTarget::Latex, sig) == "\\lnot (bet(A, B, C))");
  CHECK(renderAtom(a, none, TextTarget::Plain, sig) == "~(bet(A, B, C))");
  for (TextTarget t : kTargets) CHECK(parseRenderedAtom(renderAtom(a, none, t, sig), none, t, sig) == a);
}

TEST_CASE("stripping notation recovers the atom") {
  std::mt19937 rng(23);
  const std::vector<std::string> names{"A", "B", "C", "P1", "x_y", "q", "D'"};
  const std::vector<std::string> symbols{"\\cong", "==", "~~", "\\perp", "&perp;", "<>", "||", "\\equiv"};
  for (int round = 0; round < 300; ++round) {
    int arity = std::uniform_int_distribution<int>(1, 5)(rng);
    std::string kinds[] = {"functional", "infix", "pairinfix", "tupleinfix"};
    std::string kind = kinds[rng() % 4];
    if (kind == "infix" && arity != 2) kind = "functional";
    if ((kind == "pairinfix" || kind == "tupleinfix") && arity < 2) kind = "functional";
    std::string line = "r/" + std::to_string(arity) + " " + kind;
    if (kind == "pairinfix" || kind == "tupleinfix") {
      int g1 = std::uniform_int_distribution<int>(1, arity - 1)(rng);
      line += " " + std::to_string(g1) + "," + std::to_string(arity - g1);
    }
    if (kind != "functional")
      line += " latex=" + symbols[rng() % symbols.size()] + " html=" + symbols[rng() % symbols.size()] +
              " plain=" + symbols[rng() % symbols.size()];
    auto layout = LayoutConfig::parse(line);

    Signature sig;
    sig.sorts = {Sort{"point"}};
    sig.predicates = {PredicateSymbol{"r", std::vector<std::string>(static_cast<std::size_t>(arity), "point"),
                                      false, "r_bar"},
                      PredicateSymbol{"r_bar", std::vector<std::string>(static_cast<std::size_t>(arity), "point"),
                                      false, "r"},
                      PredicateSymbol{"=", {"point", "point"}, true}};
    std::vector<std::string> args;
    bool shortNames = rng() % 2;
    for (int i = 0; i < arity; ++i) args.push_back(shortNames ? names[rng() % 3] : names[rng() % names.size()]);
    std::vector<Atom> atoms{Atom::ground("r", args), Atom::ground("r_bar", args),
                            Atom::ground("=", {args[0], args.back()}), Atom::ground("!=", {args.back(), args[0]})};
    for (const auto& a : atoms)
      for (TextTarget t : kTargets) {
        std::string text = renderAtom(a, layout, t, sig);
        CHECK_MESSAGE(parseRenderedAtom(text, layout, t, sig) == a, line << " | " << text);
      }
  }
}
