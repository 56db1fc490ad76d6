#pragma once

// The clv command line: prove, check, export, validate and batch over files.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace clv::cli {

enum class Command { Prove, Check, Export, Validate, Batch };

struct RunConfig {
  Command command = Command::Prove;
  std::vector<std::string> inputs;
  std::string output;  // file (prove, batch) or directory (export); empty for the default
  double timeoutSeconds = 10.0;
  std::optional<int> maxSteps;
  std::optional<int> maxSplits;
  std::string hintsPath;
  std::string layoutPath;
  std::vector<std::string> targets;  // isar, coq, tex, html, txt, xml
  std::string author;
  std::string prover = "clv";
  std::string date;  // empty: today
  int jobs = 1;
};

/// Exit codes.
inline constexpr int kSuccess = 0;
inline constexpr int kNotProved = 1;
inline constexpr int kInputError = 2;

int cmdProve(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmdCheck(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmdExport(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmdValidate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmdBatch(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses arguments (argv[0] is the program name) and dispatches.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace clv::cli
