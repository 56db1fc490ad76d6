#include "test_doctest.hpp"

#include "clv/document.hpp"
#include "clv/engine.hpp"
#include "support.hpp"

using namespace clv;

namespace {

struct Reference {
  VernacularDocument doc;
  const TheoremItem* item;
};

Reference referenceDocument() {
  Reference p{parseDocumentFile((testing::sourceDir() / "tests/data/th_4_19/main.xml").string()), nullptr};
  p.item = &p.doc.chapters.at(0).items.at(0);
  return p;
}

}  // namespace

TEST_CASE("the hand-encoded th_4_19 proof checks") {
  auto p = referenceDocument();
  auto r = checkProof(p.doc.theory, p.item->asNamedFormula(), p.item->proofs.at(0));
  CHECK_MESSAGE(r.ok, r.message());
  CHECK(countStatements(p.item->proofs[0]) == 17);
  CHECK(splitDepth(p.item->proofs[0]) == 2);
}

TEST_CASE("grammar: a split needs two branches") {
  auto p = referenceDocument();
  ProofTree t = p.item->proofs[0];
  auto& cs = std::get<CaseSplit>(t.closing.kind);
  cs.branches.resize(1);
  auto r = checkProof(p.doc.theory, p.item->asNamedFormula(), t);
  CHECK_FALSE(r.ok);
  CHECK(r.rule == "cs");
}

TEST_CASE("freshness: a witness must be new") {
  auto prob = testing::loadProblem(
      "fof(ex, axiom, ![X]: (p(X) => ?[Y]: q(X,Y))).\n"
      "fof(g, conjecture, ![A]: (p(A) => ?[Z]: q(A,Z))).");
  auto res = prove(prob.theory, prob.conjecture);
  REQUIRE(res.proof);
  ProofTree t = *res.proof;
  auto& mp = std::get<ModusPonensStep>(t.steps.at(0).kind);
  std::string w = mp.witnesses.at(0);
  mp.witnesses[0] = "A";
  for (auto& a : mp.derived[0])
    for (auto& arg : a.args)
      if (arg.name == w) arg.name = "A";
  auto r = checkProof(prob.theory, prob.conjecture, t);
  CHECK_FALSE(r.ok);
  CHECK(r.rule == "freshness");
  CHECK(r.path == "/step[0]");
}

TEST_CASE("violations name the rule and path") {
  auto p = referenceDocument();
  auto formula = p.item->asNamedFormula();

  SUBCASE("unknown axiom") {
    ProofTree t = p.item->proofs[0];
    std::get<ModusPonensStep>(t.steps[0].kind).axiom = "th_9_9";
    auto r = checkProof(p.doc.theory, formula, t);
    CHECK_FALSE(r.ok);
    CHECK(r.rule == "mp");
    CHECK(r.path == "/step[0]");
  }
  SUBCASE("wrong substitution") {
    ProofTree t = p.item->proofs[0];
    auto& branch = std::get<CaseSplit>(t.closing.kind).branches[0];
    auto& sub = std::get<EqualitySubstitutionStep>(branch.steps[0].kind);
    sub.derived = Atom::ground("cong", {"A", "D", "D", "A"});
    auto r = checkProof(p.doc.theory, formula, t);
    CHECK_FALSE(r.ok);
    CHECK(r.rule == "subst");
    CHECK(r.path == "/split[0]/step[0]");
  }
  SUBCASE("closing on a fact never derived") {
    ProofTree t = p.item->proofs[0];
    auto& branch = std::get<CaseSplit>(t.closing.kind).branches[0];
    branch.steps.pop_back();
    auto r = checkProof(p.doc.theory, formula, t);
    CHECK_FALSE(r.ok);
    CHECK(r.rule == "as");
  }
  SUBCASE("efq without contradiction") {
    ProofTree t = p.item->proofs[0];
    auto& inner = std::get<CaseSplit>(std::get<CaseSplit>(t.closing.kind).branches[1].closing.kind);
    auto& efq = std::get<EfqClosing>(inner.branches[0].closing.kind);
    efq.facts = {Atom::ground("bet", {"A", "B", "C"})};
    auto r = checkProof(p.doc.theory, formula, t);
    CHECK_FALSE(r.ok);
    CHECK(r.rule == "efq");
    CHECK(r.path == "/split[1]/split[0]/closing");
  }
  SUBCASE("inconsistent indentation") {
    ProofTree t = p.item->proofs[0];
    t.steps[1].indentation = 3;
    auto r = checkProof(p.doc.theory, formula, t);
    CHECK_FALSE(r.ok);
    CHECK(r.rule == "indentation");
  }
}

TEST_CASE("lemmas may be cited like axioms") {
  auto prob = testing::loadProblem(
      "fof(a, axiom, ![X]: (p(X) => q(X))).\n"
      "fof(g, conjecture, ![A]: (p(A) => r(A))).");
  ProofTree t;
  ModusPonensStep mp{"lem", {{"X", "A"}}, {Atom::ground("p", {"A"})}, {}, {{Atom::ground("r", {"A"})}}};
  t.steps.push_back({mp, 0});
  t.closing = {FromClosing{{Atom::ground("r", {"A"})}, 0, {}}, Outcome::Thesis, 0};
  CHECK_FALSE(checkProof(prob.theory, prob.conjecture, t).ok);

  NamedFormula lemma{"lem", Role::Theorem, {}};
  lemma.formula.universalVars = {Variable{"X"}};
  lemma.formula.premises = {Atom{"p", {Term::variable("X")}}};
  lemma.formula.conclusion = {Disjunct{{}, {Atom{"r", {Term::variable("X")}}}}};
  std::vector<NamedFormula> lemmas{lemma};
  auto sig = prob.theory;
  auto r = checkProof(sig, prob.conjecture, t, lemmas);
  CHECK_MESSAGE(r.ok, r.message());
}

TEST_CASE("the mutation catalog is rejected on engine proofs") {
  std::mt19937 rng(3);
  int checked = 0;
  for (int i = 0; i < 40; ++i) {
    auto p = testing::loadProblem(testing::randomCoherentProblem(rng));
    auto r = prove(p.theory, p.conjecture, testing::quickLimits());
    if (!r.proof) continue;
    REQUIRE(checkProof(p.theory, p.conjecture, *r.proof).ok);
    for (const auto& m : testing::mutants(*r.proof, p.conjecture, p.theory)) {
      CHECK_MESSAGE(!checkProof(p.theory, p.conjecture, m.proof).ok, m.kind << " at " << m.site << "\n" << p.text);
      ++checked;
    }
  }
  CHECK(checked > 0);
}
