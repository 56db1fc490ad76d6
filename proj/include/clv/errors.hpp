#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace clv {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnboundVariable : public Error {
 public:
  explicit UnboundVariable(const std::string& var)
      : Error("unbound variable '" + var + "'"), variable(var) {}
  std::string variable;
};

class SortMismatch : public Error {
 public:
  using Error::Error;
};

/// Raised when a value violates a structural invariant of its type.
class WellFormednessError : public Error {
 public:
  using Error::Error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::string file, int line, int column, std::string expected)
      : Error(file + ":" + std::to_string(line) + ":" + std::to_string(column) +
              ": syntax error: expected " + expected),
        file(std::move(file)), line(line), column(column), expected(std::move(expected)) {}

  std::string file;
  int line;
  int column;
  std::string expected;

 protected:
  SyntaxError(std::string message, std::string file, int line, int column)
      : Error(std::move(message)), file(std::move(file)), line(line), column(column) {}
};

/// A function symbol applied to arguments; only constants are supported.
class UnsupportedTerm : public SyntaxError {
 public:
  UnsupportedTerm(std::string file, int line, int column, const std::string& functor)
      : SyntaxError(file + ":" + std::to_string(line) + ":" + std::to_string(column) +
                        ": UnsupportedTerm: function symbol '" + functor +
                        "' applied to arguments (only constants are supported)",
                    file, line, column),
        functor(functor) {}
  std::string functor;
};

class IncludeCycle : public Error {
 public:
  explicit IncludeCycle(const std::string& path) : Error("include cycle through '" + path + "'") {}
};

class DuplicateName : public Error {
 public:
  explicit DuplicateName(const std::string& name)
      : Error("duplicate formula name '" + name + "'"), name(name) {}
  std::string name;
};

class NotCoherent : public Error {
 public:
  NotCoherent(std::string reason, std::string location)
      : Error("NotCoherent: " + reason + " in " + location),
        reason(std::move(reason)), location(std::move(location)) {}
  std::string reason;
  std::string location;
};

class ArityConflict : public Error {
 public:
  explicit ArityConflict(const std::string& predicate)
      : Error("predicate '" + predicate + "' used with different arities"), predicate(predicate) {}
  std::string predicate;
};

class SchemaViolation : public Error {
 public:
  explicit SchemaViolation(std::vector<std::string> violations)
      : Error(join(violations)), violations(std::move(violations)) {}
  std::vector<std::string> violations;

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "schema violation";
    for (const auto& s : v) out += "\n  " + s;
    return out;
  }
};

class DanglingReference : public Error {
 public:
  explicit DanglingReference(const std::string& name)
      : Error("reference to unknown axiom or theorem '" + name + "'"), name(name) {}
  std::string name;
};

class UnsupportedDocument : public Error {
 public:
  using Error::Error;
};

class LayoutError : public Error {
 public:
  using Error::Error;
};

}  // namespace clv
