#include "test_doctest.hpp"

#include <sstream>

#include "clv/cli.hpp"
#include "clv/document.hpp"
#include "support.hpp"

using namespace clv;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run runClv(std::vector<std::string> args) {
  args.insert(args.begin(), "clv");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string source(const std::string& rel) { return (testing::sourceDir() / rel).string(); }

int lineCount(const std::string& text) { return static_cast<int>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

TEST_CASE("prove then check") {
  auto dir = testing::scratchDir("cli_prove");
  std::string xml = (dir / "th_4_19.xml").string();
  auto r = runClv({"prove", source("problems/th_4_19.p"), "-o", xml, "--date", "2020-01-01"});
  CHECK_MESSAGE(r.code == cli::kSuccess, r.err);
  CHECK(r.out.rfind("PROVED th_4_19 ", 0) == 0);
  std::string text = testing::readFile(xml);
  CHECK(text.find("<chapter name=\"th_4_19\">") != std::string::npos);
  CHECK(fs::exists(dir / "Vernacular.dtd"));

  auto c = runClv({"check", xml});
  CHECK(c.code == cli::kSuccess);
  CHECK(c.out == "OK th_4_19\n");
  CHECK(runClv({"validate", xml}).code == cli::kSuccess);
}

TEST_CASE("not proved within tiny limits") {
  auto dir = testing::scratchDir("cli_limits");
  auto r = runClv({"prove", source("problems/th_4_19.p"), "-o", (dir / "x.xml").string(), "--max-steps", "2",
                "--max-splits", "0"});
  CHECK(r.code == cli::kNotProved);
  CHECK((r.out.rfind("EXHAUSTED", 0) == 0 || r.out.rfind("TIMEOUT", 0) == 0));
}

TEST_CASE("input errors exit with 2") {
  auto dir = testing::scratchDir("cli_errors");
  testing::writeFile(dir / "bad.p", "fof(bad, axiom, p(f(X))).\nfof(g, conjecture, p(a)).\n");
  auto r = runClv({"prove", (dir / "bad.p").string(), "-o", (dir / "bad.xml").string()});
  CHECK(r.code == cli::kInputError);
  CHECK(r.err.find("UnsupportedTerm") != std::string::npos);
  CHECK(r.err.find("bad.p:1:") != std::string::npos);

  testing::writeFile(dir / "nc.p", "fof(g, conjecture, ![X]: ((p(X) | q(X)) => r(X))).\n");
  CHECK(runClv({"prove", (dir / "nc.p").string()}).code == cli::kInputError);
  CHECK(runClv({"prove", (dir / "missing.p").string()}).code == cli::kInputError);
  CHECK(runClv({"prove"}).code == cli::kInputError);
  CHECK(runClv({"frobnicate"}).code == cli::kInputError);
  CHECK(runClv({"prove", source("problems/th_4_19.p"), "--timeout", "0"}).code == cli::kInputError);
}

TEST_CASE("export writes one file per target") {
  auto dir = testing::scratchDir("cli_export");
  auto r = runClv({"export", source("tests/data/th_4_19/main.xml"), "-o", dir.string(), "--layout",
                source("assets/tarski.layout"), "--to", "isar,coq,tex,html,txt"});
  CHECK_MESSAGE(r.code == cli::kSuccess, r.err);
  for (const char* f : {"main.thy", "main.v", "main.tex", "main.html", "main.txt", "CLVernacularTactics.v",
                        "clvernacular.sty", "clvernacular.css"})
    CHECK_MESSAGE(fs::exists(dir / f), f);
  CHECK(testing::readFile(dir / "main.tex").find("$AB \\cong AD$") != std::string::npos);
  CHECK(runClv({"export", source("tests/data/th_4_19/main.xml"), "-o", dir.string(), "--to", "pdf"}).code ==
        cli::kInputError);
}

TEST_CASE("trivial proof exports to a two-line text file") {
  auto dir = testing::scratchDir("cli_trivial");
  testing::writeFile(dir / "triv.p", "fof(triv, conjecture, ![X]: (p(X) => p(X))).\n");
  REQUIRE(runClv({"prove", (dir / "triv.p").string(), "-o", (dir / "triv.xml").string()}).code == cli::kSuccess);
  auto out = dir / "out";
  REQUIRE(runClv({"export", (dir / "triv.xml").string(), "--to", "txt", "-o", out.string()}).code == cli::kSuccess);
  CHECK(lineCount(testing::readFile(out / "triv.txt")) == 2);
}

TEST_CASE("invalid documents are rejected with their violations") {
  auto dir = testing::scratchDir("cli_invalid");
  std::string text = serializeDocument(parseDocumentFile(source("tests/data/th_4_19/main.xml")));
  auto pos = text.find("<relation_symbol name=\"bet\">");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 28, "<relation_symbol>");
  auto pos2 = text.find("<theory_name>");
  text.insert(pos2, "<bogus/>");
  testing::writeFile(dir / "bad.xml", text);
  auto r = runClv({"export", (dir / "bad.xml").string(), "-o", (dir / "out").string()});
  CHECK(r.code == cli::kInputError);
  CHECK(r.err.find("relation_symbol") != std::string::npos);
  CHECK(r.err.find("bogus") != std::string::npos);
  CHECK(runClv({"validate", (dir / "bad.xml").string()}).code == cli::kInputError);

  testing::writeFile(dir / "broken.xml", "<main><frontpage>");
  CHECK(runClv({"export", (dir / "broken.xml").string(), "-o", (dir / "out").string()}).code == cli::kInputError);
}

TEST_CASE("xml export is byte-stable and runs are reproducible with a fixed date") {
  auto a = testing::scratchDir("cli_repro_a");
  auto b = testing::scratchDir("cli_repro_b");
  for (const auto& dir : {a, b}) {
    REQUIRE(runClv({"prove", source("problems/th_4_19.p"), "-o", (dir / "th_4_19.xml").string(), "--date",
                 "2011-01-01", "--author", "A. Author"})
                .code == cli::kSuccess);
    REQUIRE(runClv({"export", (dir / "th_4_19.xml").string(), "-o", (dir / "out").string(), "--to",
                 "isar,coq,tex,html,txt,xml", "--layout", source("assets/tarski.layout")})
                .code == cli::kSuccess);
  }
  CHECK(testing::readFile(a / "out/th_4_19.xml") == testing::readFile(a / "th_4_19.xml"));
  CHECK(testing::readFile(a / "th_4_19.xml") == testing::readFile(b / "th_4_19.xml"));
  for (const char* f : {"th_4_19.thy", "th_4_19.v", "th_4_19.tex", "th_4_19.html", "th_4_19.txt"})
    CHECK_MESSAGE(testing::readFile(a / "out" / f) == testing::readFile(b / "out" / f), f);
}

TEST_CASE("batch") {
  auto dir = testing::scratchDir("cli_batch");

  SUBCASE("empty manifest") {
    testing::writeFile(dir / "empty.txt", "# nothing here\n");
    auto r = runClv({"batch", (dir / "empty.txt").string(), "-o", (dir / "empty.xml").string()});
    CHECK(r.code == cli::kSuccess);
    auto doc = parseDocumentFile((dir / "empty.xml").string());
    REQUIRE(doc.chapters.size() == 1);
    CHECK(doc.chapters[0].items.empty());
  }
  SUBCASE("missing file is an error row") {
    testing::writeFile(dir / "one.p", "fof(one, conjecture, ![X]: (p(X) => p(X))).\n");
    testing::writeFile(dir / "m.txt", "one.p\nnot_there.p\n");
    auto r = runClv({"batch", (dir / "m.txt").string(), "-o", (dir / "m.xml").string()});
    CHECK(r.code == cli::kSuccess);
    std::string summary = testing::readFile(dir / "m.summary.txt");
    CHECK(summary.find("ERROR") != std::string::npos);
    CHECK(summary.find("PROVED") != std::string::npos);
    CHECK(parseDocumentFile((dir / "m.xml").string()).chapters[0].items.size() == 1);
  }
  SUBCASE("corpus has theorems and conjectures, proofs check, jobs do not matter") {
    auto run = [&](const std::string& jobs, const std::string& name) {
      auto r = runClv({"batch", source("corpus/tarski/manifest.txt"), "-o", (dir / name).string(), "--jobs", jobs,
                    "--date", "2020-01-01"});
      REQUIRE(r.code == cli::kSuccess);
      return parseDocumentFile((dir / name).string());
    };
    auto doc = run("1", "corpus.xml");
    int theorems = 0, conjectures = 0;
    for (const auto& item : doc.chapters.at(0).items) (item.isTheorem() ? theorems : conjectures)++;
    CHECK(theorems >= 1);
    CHECK(conjectures >= 1);
    CHECK(runClv({"check", (dir / "corpus.xml").string()}).code == cli::kSuccess);
    auto parallel = run("4", "corpus4.xml");
    CHECK(parallel == doc);
  }
}
