#pragma once

// Minimal XML tree on top of expat, include expansion, and DTD validation.

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace clv::xml {

struct Node {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Node> children;
  std::string text;  // character data directly inside this element
  int line = 0;

  const std::string* attribute(std::string_view key) const;
  const Node* child(std::string_view childName) const;
  std::vector<const Node*> childrenNamed(std::string_view childName) const;
};

/// Parses a well-formed document into its root element. Character data
/// consisting only of whitespace is dropped. Throws clv::Error with the
/// expat message and position when the input is not well-formed.
Node parse(std::string_view text, const std::string& path = "<input>");

using Resolver = std::function<std::string(const std::string& path)>;
Resolver fileResolver();

/// Replaces every <xi:include href=".." parse="xml"/> by the root element of
/// the referenced file, recursively. Paths are relative to `path`'s
/// directory. Throws IncludeCycle.
void expandIncludes(Node& root, const Resolver& resolver, const std::string& path);

std::string escapeText(std::string_view text);
std::string escapeAttribute(std::string_view text);

class Dtd {
 public:
  /// Parses ELEMENT and ATTLIST declarations; throws clv::Error on syntax
  /// it does not understand.
  static Dtd parse(std::string_view text);
  ~Dtd();
  Dtd(Dtd&&) noexcept;
  Dtd& operator=(Dtd&&) noexcept;

  /// Violations of `root` against the declarations, as "path: message".
  std::vector<std::string> validate(const Node& root) const;
  /// Default value declared for an attribute, or empty.
  std::string defaultValue(std::string_view element, std::string_view attribute) const;

  struct Impl;

 private:
  Dtd();
  std::unique_ptr<Impl> impl_;
};

/// The bundled Vernacular.dtd.
const Dtd& vernacularDtd();

}  // namespace clv::xml
