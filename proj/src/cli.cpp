#include "clv/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <condition_variable>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "clv/assets.hpp"
#include "clv/document.hpp"
#include "clv/engine.hpp"
#include "clv/errors.hpp"
#include "clv/export.hpp"
#include "clv/tptp.hpp"

namespace clv::cli {

namespace fs = std::filesystem;

namespace {

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeFile(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << content;
}

std::string today() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%d");
  return ss.str();
}

Frontpage frontpage(const RunConfig& cfg) {
  return Frontpage{cfg.author, cfg.prover, cfg.date.empty() ? today() : cfg.date};
}

SearchLimits limits(const RunConfig& cfg) {
  if (cfg.timeoutSeconds <= 0) throw Error("--timeout must be positive");
  SearchLimits l;
  l.wallClock = std::chrono::milliseconds(static_cast<long long>(cfg.timeoutSeconds * 1000));
  if (cfg.maxSteps) l.maxMpSteps = *cfg.maxSteps;
  if (cfg.maxSplits) l.maxSplitDepth = *cfg.maxSplits;
  return l;
}

std::optional<std::vector<std::string>> hintsFor(const std::string& explicitPath, const fs::path& problem) {
  if (!explicitPath.empty()) return parseHints(readFile(explicitPath));
  fs::path beside = problem;
  beside.replace_extension(".hints");
  if (fs::exists(beside)) return parseHints(readFile(beside.string()));
  return std::nullopt;
}

std::string seconds(std::chrono::milliseconds ms) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(3) << static_cast<double>(ms.count()) / 1000.0 << "s";
  return ss.str();
}

void writeDocument(const fs::path& mainPath, const VernacularDocument& doc, bool split) {
  fs::path dir = mainPath.parent_path();
  if (split) {
    SplitDocument s = serializeSplit(doc);
    writeFile(mainPath, s.main);
    for (const auto& [name, content] : s.files) writeFile(dir / name, content);
  } else {
    writeFile(mainPath, serializeDocument(doc));
  }
  writeFile(dir / "Vernacular.dtd", std::string(assets::vernacular_dtd()));
}

const std::map<std::string, std::string>& targetExtensions() {
  static const std::map<std::string, std::string> m{{"isar", ".thy"}, {"coq", ".v"},    {"tex", ".tex"},
                                                    {"html", ".html"}, {"txt", ".txt"}, {"xml", ".xml"}};
  return m;
}

}  // namespace

int cmdProve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.inputs.size() != 1) {
    err << "prove: expected one problem file\n";
    return kInputError;
  }
  fs::path input = cfg.inputs[0];
  std::string stem = input.stem().string();
  tptp::AssembledProblem problem;
  std::optional<std::vector<std::string>> hints;
  SearchLimits lim;
  try {
    problem = tptp::assembleTheory(tptp::parseFile(input.string()), {true, stem});
    hints = hintsFor(cfg.hintsPath, input);
    lim = limits(cfg);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kInputError;
  }
  if (problem.conjectures.empty()) {
    err << input.string() << ": no conjecture\n";
    return kInputError;
  }
  VernacularDocument doc{frontpage(cfg), problem.theory, {Chapter{stem, {}}}};
  bool all = true;
  for (const auto& conj : problem.conjectures) {
    ProveResult r;
    try {
      r = prove(problem.theory, conj, lim, hints ? &*hints : nullptr);
    } catch (const Error& e) {
      err << e.what() << "\n";
      return kInputError;
    }
    TheoremItem item{conj.name, conj.formula, {}};
    if (r.proof) {
      item.proofs.push_back(*r.proof);
      out << "PROVED " << conj.name << " " << seconds(r.elapsed) << " " << countSteps(*r.proof) << "\n";
    } else {
      all = false;
      out << toString(r.status) << " " << conj.name << " " << seconds(r.elapsed) << "\n";
    }
    doc.chapters[0].items.push_back(std::move(item));
  }
  fs::path output = cfg.output.empty() ? fs::path(stem + ".xml") : fs::path(cfg.output);
  try {
    writeDocument(output, doc, false);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kInputError;
  }
  return all ? kSuccess : kNotProved;
}

int cmdCheck(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.inputs.empty()) {
    err << "check: expected a document\n";
    return kInputError;
  }
  bool ok = true;
  for (const auto& path : cfg.inputs) {
    VernacularDocument doc;
    try {
      doc = parseDocumentFile(path);
    } catch (const Error& e) {
      err << path << ": " << e.what() << "\n";
      return kInputError;
    }
    for (const auto& chapter : doc.chapters)
      for (const auto& item : chapter.items) {
        if (!item.isTheorem()) continue;
        auto lemmas = doc.lemmasBefore(item);
        for (std::size_t i = 0; i < item.proofs.size(); ++i) {
          CheckResult r = checkProof(doc.theory, item.asNamedFormula(), item.proofs[i], lemmas);
          std::string label = item.name + (item.proofs.size() > 1 ? "#" + std::to_string(i + 1) : "");
          if (r) {
            out << "OK " << label << "\n";
          } else {
            ok = false;
            out << "FAIL " << label << ": " << r.message() << "\n";
          }
        }
      }
  }
  return ok ? kSuccess : kNotProved;
}

int cmdExport(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.inputs.size() != 1) {
    err << "export: expected one document\n";
    return kInputError;
  }
  std::vector<std::string> targets = cfg.targets;
  if (targets.empty()) targets = {"isar", "coq", "tex", "html", "txt"};
  for (const auto& t : targets)
    if (!targetExtensions().count(t)) {
      err << "export: unknown target '" << t << "'\n";
      return kInputError;
    }
  fs::path input = cfg.inputs[0];
  std::string stem = input.stem().string();
  fs::path dir = cfg.output.empty() ? fs::path(".") : fs::path(cfg.output);
  try {
    std::string text = readFile(input.string());
    auto violations = validateDocument(text, xml::fileResolver(), input.string());
    if (!violations.empty()) {
      for (const auto& v : violations) err << input.string() << ": " << v << "\n";
      return kInputError;
    }
    VernacularDocument doc = parseDocument(text, xml::fileResolver(), input.string());
    LayoutConfig layout = cfg.layoutPath.empty() ? LayoutConfig{} : LayoutConfig::parse(readFile(cfg.layoutPath));
    ExportOptions options{stem};
    for (const auto& t : targets) {
      RenderedArtifact a;
      if (t == "isar") a = exportIsar(doc, options);
      else if (t == "coq") a = exportCoq(doc, options);
      else if (t == "tex") a = exportNaturalLanguage(doc, layout, TextTarget::Latex, options);
      else if (t == "html") a = exportNaturalLanguage(doc, layout, TextTarget::Html, options);
      else if (t == "txt") a = exportNaturalLanguage(doc, layout, TextTarget::Plain, options);
      else a.mainFile = serializeDocument(doc);
      fs::path target = dir / (stem + targetExtensions().at(t));
      writeFile(target, a.mainFile);
      for (const auto& [name, content] : a.auxiliaryFiles) writeFile(dir / name, content);
      out << "wrote " << target.string() << "\n";
    }
  } catch (const SchemaViolation& e) {
    for (const auto& v : e.violations) err << input.string() << ": " << v << "\n";
    return kInputError;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kInputError;
  }
  return kSuccess;
}

int cmdValidate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.inputs.empty()) {
    err << "validate: expected a document\n";
    return kInputError;
  }
  bool ok = true;
  for (const auto& path : cfg.inputs) {
    std::vector<std::string> violations;
    try {
      violations = validateDocument(readFile(path), xml::fileResolver(), path);
      if (violations.empty()) parseDocumentFile(path);
    } catch (const SchemaViolation& e) {
      violations = e.violations;
    } catch (const Error& e) {
      violations = {e.what()};
    }
    if (violations.empty()) {
      out << path << ": valid\n";
    } else {
      ok = false;
      for (const auto& v : violations) err << path << ": " << v << "\n";
    }
  }
  return ok ? kSuccess : kInputError;
}

namespace {

struct BatchItem {
  std::string path;
  std::string name;
  std::optional<NamedFormula> conjecture;
  std::optional<std::vector<std::string>> hints;
  std::string error;
  std::vector<std::size_t> deps;
  ProveResult result;
  bool done = false;
  bool started = false;
};

std::vector<std::string> readManifest(const std::string& path) {
  std::vector<std::string> out;
  std::istringstream in(readFile(path));
  std::string line;
  fs::path dir = fs::path(path).parent_path();
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    line = line.substr(b, line.find_last_not_of(" \t\r") - b + 1);
    out.push_back(fs::path(line).is_absolute() ? line : (dir / line).string());
  }
  return out;
}

}  // namespace

int cmdBatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.inputs.size() != 1) {
    err << "batch: expected one manifest\n";
    return kInputError;
  }
  fs::path manifest = cfg.inputs[0];
  std::string stem = manifest.stem().string();
  std::vector<std::string> paths;
  SearchLimits lim;
  try {
    paths = readManifest(manifest.string());
    lim = limits(cfg);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kInputError;
  }
  if (cfg.jobs < 1) {
    err << "batch: --jobs must be positive\n";
    return kInputError;
  }

  // Shared theory: the non-conjecture formulas of all problem files.
  std::vector<BatchItem> items(paths.size());
  tptp::SourceProblem combined;
  std::map<std::string, tptp::AnnotatedFormula> seen;
  std::vector<tptp::AnnotatedFormula> shared;
  std::vector<std::vector<tptp::AnnotatedFormula>> conjectures(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    BatchItem& it = items[i];
    it.path = paths[i];
    it.name = fs::path(paths[i]).stem().string();
    try {
      tptp::SourceProblem p = tptp::parseFile(paths[i]);
      std::vector<tptp::AnnotatedFormula> mine;
      for (const auto& f : p.formulas) {
        if (f.role == Role::Conjecture) {
          mine.push_back(f);
          continue;
        }
        auto [pos, inserted] = seen.emplace(f.name, f);
        if (!inserted && !(pos->second == f)) throw DuplicateName(f.name);
        if (inserted) shared.push_back(f);
      }
      if (mine.size() != 1) throw Error("expected exactly one conjecture");
      conjectures[i] = std::move(mine);
      it.hints = hintsFor("", fs::path(paths[i]));
    } catch (const Error& e) {
      it.error = e.what();
    }
  }
  combined.formulas = shared;
  for (std::size_t i = 0; i < paths.size(); ++i)
    if (items[i].error.empty()) combined.formulas.push_back(conjectures[i][0]);

  tptp::AssembledProblem assembled;
  try {
    assembled = tptp::assembleTheory(combined, {true, stem});
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kInputError;
  }
  std::map<std::string, NamedFormula> byName;
  for (const auto& c : assembled.conjectures) byName[c.name] = c;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!items[i].error.empty()) continue;
    items[i].conjecture = byName.at(conjectures[i][0].name);
    items[i].name = conjectures[i][0].name;
  }

  // Dependencies: hinted earlier items, or every earlier item without hints.
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (!items[j].conjecture) continue;
      bool needed = !items[i].hints ||
                    std::find(items[i].hints->begin(), items[i].hints->end(), items[j].name) != items[i].hints->end();
      if (needed) items[i].deps.push_back(j);
    }
  }

  std::mutex mu;
  std::condition_variable cv;
  auto runItem = [&](std::size_t i) {
    BatchItem& it = items[i];
    Theory theory = assembled.theory;
    std::vector<std::string> hints;
    {
      std::lock_guard lock(mu);
      for (std::size_t d : it.deps)
        if (items[d].result.proof)
          theory.axioms.push_back(NamedFormula{items[d].name, Role::Theorem, items[d].conjecture->formula});
    }
    if (it.hints)
      for (const auto& h : *it.hints)
        if (theory.findAxiom(h)) hints.push_back(h);
    ProveResult r;
    std::string error;
    try {
      r = prove(theory, *it.conjecture, lim, it.hints ? &hints : nullptr);
    } catch (const Error& e) {
      error = e.what();
    }
    std::lock_guard lock(mu);
    it.result = std::move(r);
    it.error = error;
    it.done = true;
    cv.notify_all();
  };
  auto worker = [&] {
    for (;;) {
      std::size_t pick = items.size();
      {
        std::unique_lock lock(mu);
        for (;;) {
          bool remaining = false;
          for (std::size_t i = 0; i < items.size() && pick == items.size(); ++i) {
            if (items[i].started || !items[i].conjecture) continue;
            remaining = true;
            bool ready = std::all_of(items[i].deps.begin(), items[i].deps.end(),
                                     [&](std::size_t d) { return items[d].done; });
            if (ready) pick = i;
          }
          if (pick != items.size()) {
            items[pick].started = true;
            break;
          }
          if (!remaining) return;
          cv.wait(lock);
        }
      }
      runItem(pick);
    }
  };
  std::vector<std::thread> pool;
  for (int k = 0; k < cfg.jobs; ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  VernacularDocument doc{frontpage(cfg), assembled.theory, {Chapter{stem, {}}}};
  std::ostringstream summary;
  summary << std::left << std::setw(24) << "name" << std::setw(11) << "status" << std::setw(10) << "time"
          << "steps\n";
  for (const auto& it : items) {
    std::string status, time = "-", steps = "-";
    if (!it.conjecture || !it.error.empty()) {
      status = "ERROR";
      err << it.path << ": " << it.error << "\n";
    } else {
      status = std::string(toString(it.result.status));
      time = seconds(it.result.elapsed);
      TheoremItem item{it.name, it.conjecture->formula, {}};
      if (it.result.proof) {
        item.proofs.push_back(*it.result.proof);
        steps = std::to_string(countSteps(*it.result.proof));
      }
      doc.chapters[0].items.push_back(std::move(item));
    }
    summary << std::left << std::setw(24) << it.name << std::setw(11) << status << std::setw(10) << time << steps
            << "\n";
  }
  fs::path output = cfg.output.empty() ? fs::path(stem + ".xml") : fs::path(cfg.output);
  try {
    writeDocument(output, doc, true);
    fs::path summaryPath = output;
    summaryPath.replace_extension(".summary.txt");
    writeFile(summaryPath, summary.str());
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kInputError;
  }
  out << summary.str();
  return kSuccess;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coherent logic prover and proof exporter", "clv"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string targets;

  auto addSearchFlags = [&](CLI::App* sub) {
    sub->add_option("--timeout", cfg.timeoutSeconds, "Seconds per conjecture")->check(CLI::PositiveNumber);
    sub->add_option("--max-steps", cfg.maxSteps, "Modus ponens steps per branch");
    sub->add_option("--max-splits", cfg.maxSplits, "Case split depth");
    sub->add_option("--author", cfg.author, "Front page author");
    sub->add_option("--prover", cfg.prover, "Front page prover name");
    sub->add_option("--date", cfg.date, "Front page date (ISO 8601)");
    sub->add_option("--output,-o", cfg.output, "Output document");
  };

  auto* prove = app.add_subcommand("prove", "Prove the conjectures of a problem file");
  prove->add_option("problem", cfg.inputs)->required();
  prove->add_option("--hints", cfg.hintsPath, "Axioms to use, one per line");
  addSearchFlags(prove);
  prove->callback([&] { cfg.command = Command::Prove; });

  auto* check = app.add_subcommand("check", "Replay the proofs of documents");
  check->add_option("documents", cfg.inputs)->required();
  check->callback([&] { cfg.command = Command::Check; });

  auto* exp = app.add_subcommand("export", "Render a document");
  exp->add_option("document", cfg.inputs)->required();
  exp->add_option("--to", targets, "Comma-separated: isar,coq,tex,html,txt,xml");
  exp->add_option("--layout", cfg.layoutPath, "Notation file for natural language");
  exp->add_option("--output,-o", cfg.output, "Output directory");
  exp->callback([&] { cfg.command = Command::Export; });

  auto* validate = app.add_subcommand("validate", "Validate documents against the DTD");
  validate->add_option("documents", cfg.inputs)->required();
  validate->callback([&] { cfg.command = Command::Validate; });

  auto* batch = app.add_subcommand("batch", "Prove the problems of a manifest into one document");
  batch->add_option("manifest", cfg.inputs)->required();
  batch->add_option("--jobs,-j", cfg.jobs, "Parallel items")->check(CLI::PositiveNumber);
  addSearchFlags(batch);
  batch->callback([&] { cfg.command = Command::Batch; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return kInputError;
  }
  if (!targets.empty()) {
    std::stringstream ss(targets);
    std::string t;
    while (std::getline(ss, t, ','))
      if (!t.empty()) cfg.targets.push_back(t);
  }
  switch (cfg.command) {
    case Command::Prove: return cmdProve(cfg, out, err);
    case Command::Check: return cmdCheck(cfg, out, err);
    case Command::Export: return cmdExport(cfg, out, err);
    case Command::Validate: return cmdValidate(cfg, out, err);
    case Command::Batch: return cmdBatch(cfg, out, err);
  }
  return kInputError;
}

}  // namespace clv::cli
