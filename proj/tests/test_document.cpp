#include "test_doctest.hpp"

#include <map>

#include "clv/document.hpp"
#include "clv/errors.hpp"
#include "support.hpp"

using namespace clv;

namespace {

std::string dataDir() { return (testing::sourceDir() / "tests/data/th_4_19").string(); }

VernacularDocument referenceDocument() { return parseDocumentFile(dataDir() + "/main.xml"); }

xml::Resolver mapResolver(const std::map<std::string, std::string>& files) {
  return [files](const std::string& path) -> std::string {
    auto it = files.find(path);
    if (it == files.end()) throw Error("no such file " + path);
    return it->second;
  };
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
  auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("the reference split document validates and parses") {
  std::string main = testing::readFile(dataDir() + "/main.xml");
  CHECK(validateDocument(main, xml::fileResolver(), dataDir() + "/main.xml").empty());
  auto doc = referenceDocument();
  CHECK(doc.frontpage.prover == "ArgoCLP");
  REQUIRE(doc.chapters.size() == 1);
  CHECK(doc.chapters[0].name == "th_4_19");
  REQUIRE(doc.chapters[0].items.size() == 1);
  CHECK(doc.chapters[0].items[0].name == "th_4_19");
  CHECK(doc.theory.findAxiom("ax_g1"));
}

TEST_CASE("single-file and split serializations round-trip") {
  auto doc = referenceDocument();
  std::string single = serializeDocument(doc);
  CHECK(parseDocument(single) == doc);
  CHECK(serializeDocument(parseDocument(single)) == single);

  auto split = serializeSplit(doc);
  CHECK(split.main.find("<xi:include href=\"frontpage.xml\"") != std::string::npos);
  CHECK(split.main.find("<chapter name=\"th_4_19\">") != std::string::npos);
  std::map<std::string, std::string> files;
  for (const auto& [name, text] : split.files) files["dir/" + name] = text;
  files["dir/Vernacular.dtd"] = "";
  CHECK(parseDocument(split.main, mapResolver(files), "dir/main.xml") == doc);
}

TEST_CASE("steps at split depth two are indented by six") {
  std::string text = serializeDocument(referenceDocument());
  CHECK(text.find("<indentation>6</indentation>") != std::string::npos);
  CHECK(text.find("<indentation>9</indentation>") == std::string::npos);
}

TEST_CASE("empty document") {
  VernacularDocument empty;
  empty.theory.name = "empty";
  std::string text = serializeDocument(empty);
  CHECK(validateDocument(text).empty());
  CHECK(parseDocument(text) == empty);
}

TEST_CASE("schema violations") {
  std::string text = serializeDocument(referenceDocument());

  SUBCASE("missing proof_closing") {
    auto start = text.find("<proof_closing>");
    auto end = text.rfind("</proof_closing>");
    REQUIRE(start != std::string::npos);
    std::string broken = text.substr(0, start) + text.substr(end + std::string("</proof_closing>").size());
    CHECK_FALSE(validateDocument(broken).empty());
    CHECK_THROWS_AS(parseDocument(broken), SchemaViolation);
  }
  SUBCASE("relation_symbol without name") {
    std::string broken = replace(text, "<relation_symbol name=\"bet\">", "<relation_symbol>");
    auto violations = validateDocument(broken);
    CHECK(violations.size() == 1);
  }
  SUBCASE("chapter nested inside proof") {
    std::string broken = replace(text, "<proof_closing>", "<chapter name=\"x\"/><proof_closing>");
    CHECK(validateDocument(broken).size() == 1);
  }
  SUBCASE("not well-formed") {
    auto violations = validateDocument("<main><frontpage>");
    CHECK(violations.size() == 1);
    CHECK_THROWS_AS(parseDocument("<main><frontpage>"), Error);
  }
}

TEST_CASE("dangling references and include cycles") {
  std::string text = serializeDocument(referenceDocument());
  std::string broken = replace(text, "<use_axiom name=\"th_3_1\"", "<use_axiom name=\"th_9_9\"");
  CHECK_THROWS_AS(parseDocument(broken), DanglingReference);

  std::map<std::string, std::string> files{
      {"d/main.xml",
       "<main><xi:include href=\"a.xml\" parse=\"xml\" xmlns:xi=\"http://www.w3.org/2003/XInclude\"/></main>"},
      {"d/a.xml", "<frontpage><xi:include href=\"main.xml\" parse=\"xml\" "
                  "xmlns:xi=\"http://www.w3.org/2003/XInclude\"/></frontpage>"},
  };
  CHECK_THROWS_AS(parseDocument(files["d/main.xml"], mapResolver(files), "d/main.xml"), IncludeCycle);
}

TEST_CASE("earlier theorems are lemmas for later items") {
  auto doc = referenceDocument();
  TheoremItem later{"later", doc.chapters[0].items[0].formula, {}};
  doc.chapters[0].items.push_back(later);
  auto lemmas = doc.lemmasBefore(doc.chapters[0].items[1]);
  REQUIRE(lemmas.size() == 1);
  CHECK(lemmas[0].name == "th_4_19");
  CHECK(doc.lemmasBefore(doc.chapters[0].items[0]).empty());
}

TEST_CASE("random documents round-trip") {
  std::mt19937 rng(17);
  for (int i = 0; i < 15; ++i) {
    auto doc = testing::randomDocument(rng);
    std::string text = serializeDocument(doc);
    CHECK(validateDocument(text).empty());
    auto back = parseDocument(text);
    CHECK(back == doc);
    CHECK(serializeDocument(back) == text);
  }
}
