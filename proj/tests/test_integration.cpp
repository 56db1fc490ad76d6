#include "test_doctest.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "clv/cli.hpp"
#include "clv/document.hpp"
#include "clv/export.hpp"
#include "support.hpp"

using namespace clv;
namespace fs = std::filesystem;

namespace {

std::map<std::string, std::string> statuses(const fs::path& summary, bool header) {
  std::map<std::string, std::string> out;
  std::ifstream in(summary);
  std::string line;
  if (header) std::getline(in, line);
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string name, status;
    if (fields >> name >> status) out[name] = status;
  }
  return out;
}

}  // namespace

TEST_CASE("corpus batch, check and export") {
  auto dir = testing::scratchDir("integration");
  auto src = testing::sourceDir();
  std::ostringstream out, err;

  cli::RunConfig batch;
  batch.command = cli::Command::Batch;
  batch.inputs = {(src / "corpus/tarski/manifest.txt").string()};
  batch.output = (dir / "corpus.xml").string();
  batch.jobs = 2;
  batch.date = "2020-01-01";
  REQUIRE(cli::cmdBatch(batch, out, err) == cli::kSuccess);

  CHECK(statuses(dir / "corpus.summary.txt", true) ==
        statuses(src / "corpus/tarski/reference_summary.txt", false));
  CHECK(validateDocument(testing::readFile(dir / "corpus.xml"), xml::fileResolver(),
                         (dir / "corpus.xml").string())
            .empty());

  cli::RunConfig check;
  check.command = cli::Command::Check;
  check.inputs = {batch.output};
  std::ostringstream checkOut;
  CHECK(cli::cmdCheck(check, checkOut, err) == cli::kSuccess);
  CHECK(checkOut.str().find("OK th_4_19") != std::string::npos);

  cli::RunConfig exp;
  exp.command = cli::Command::Export;
  exp.inputs = {batch.output};
  exp.output = (dir / "out").string();
  exp.layoutPath = (src / "assets/tarski.layout").string();
  exp.targets = {"isar", "coq", "tex", "html", "txt", "xml"};
  REQUIRE(cli::cmdExport(exp, out, err) == cli::kSuccess);

  auto doc = parseDocumentFile(batch.output);
  std::string thy = testing::readFile(dir / "out/corpus.thy");
  std::string v = testing::readFile(dir / "out/corpus.v");
  std::string txt = testing::readFile(dir / "out/corpus.txt");
  for (const auto& item : doc.chapters.at(0).items) {
    CHECK_MESSAGE(thy.find(item.name) != std::string::npos, item.name);
    CHECK_MESSAGE(v.find(item.name) != std::string::npos, item.name);
    CHECK_MESSAGE(txt.find(item.name) != std::string::npos, item.name);
  }
  CHECK(parseDocumentFile((dir / "out/corpus.xml").string()) == doc);
  CHECK(txt.find("Conjecture cong_swap") != std::string::npos);
}

TEST_CASE("the bundled problem proves to the same proof as the reference document") {
  auto src = testing::sourceDir();
  auto p = testing::loadProblem(testing::readFile(src / "problems/th_4_19.p"));
  auto r = prove(p.theory, p.conjecture);
  REQUIRE(r.proof);
  auto reference = parseDocumentFile((src / "tests/data/th_4_19/main.xml").string());
  const auto& expected = reference.chapters[0].items[0].proofs[0];
  CHECK(countStatements(*r.proof) == countStatements(expected));
  CHECK(splitDepth(*r.proof) == splitDepth(expected));
  CHECK(checkProof(reference.theory, {"th_4_19", Role::Conjecture, reference.chapters[0].items[0].formula},
                   *r.proof, reference.lemmasBefore(reference.chapters[0].items[0]))
            .ok);
}
