#include <cctype>
#include <map>
#include <regex>
#include <set>

#include "clv/assets.hpp"
#include "clv/errors.hpp"
#include "clv/xml.hpp"

namespace clv::xml {

namespace {

struct AttributeDecl {
  std::vector<std::string> values;  // enumeration, empty for CDATA etc.
  bool required = false;
  std::string defaultValue;
};

struct ElementDecl {
  enum class Kind { Empty, Any, Mixed, Children } kind = Kind::Empty;
  std::set<std::string> mixedNames;
  std::string model;
  std::regex pattern;
};

bool isNameChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' || c == ':';
}

// Translates a children content model such as (a, (b|c)*, d?) into a regex
// over the child-name sequence "a,b,c,".
std::string modelRegex(std::string_view model) {
  std::string out;
  for (std::size_t i = 0; i < model.size();) {
    char c = model[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      ++i;
    } else if (c == '(') {
      out += "(?:";
      ++i;
    } else if (c == ')' || c == '|' || c == '?' || c == '*' || c == '+') {
      out += c;
      ++i;
    } else if (isNameChar(c)) {
      std::size_t j = i;
      while (j < model.size() && isNameChar(model[j])) ++j;
      out += "(?:" + std::string(model.substr(i, j - i)) + ",)";
      i = j;
    } else {
      throw Error("unsupported character '" + std::string(1, c) + "' in content model " + std::string(model));
    }
  }
  return out;
}

}  // namespace

struct Dtd::Impl {
  std::map<std::string, ElementDecl, std::less<>> elements;
  std::map<std::string, std::map<std::string, AttributeDecl>, std::less<>> attributes;
};

Dtd::Dtd() : impl_(std::make_unique<Impl>()) {}
Dtd::~Dtd() = default;
Dtd::Dtd(Dtd&&) noexcept = default;
Dtd& Dtd::operator=(Dtd&&) noexcept = default;

Dtd Dtd::parse(std::string_view text) {
  Dtd dtd;
  std::size_t pos = 0;
  auto skipSpace = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto name = [&] {
    skipSpace();
    std::size_t start = pos;
    while (pos < text.size() && isNameChar(text[pos])) ++pos;
    if (start == pos) throw Error("DTD: expected a name at offset " + std::to_string(pos));
    return std::string(text.substr(start, pos - start));
  };
  auto quoted = [&] {
    skipSpace();
    char q = text[pos];
    std::size_t end = text.find(q, pos + 1);
    if (end == std::string_view::npos) throw Error("DTD: unterminated literal");
    std::string v(text.substr(pos + 1, end - pos - 1));
    pos = end + 1;
    return v;
  };

  while (true) {
    skipSpace();
    if (pos >= text.size()) break;
    if (text.substr(pos, 4) == "<!--") {
      std::size_t end = text.find("-->", pos);
      if (end == std::string_view::npos) throw Error("DTD: unterminated comment");
      pos = end + 3;
    } else if (text.substr(pos, 9) == "<!ELEMENT") {
      pos += 9;
      std::string el = name();
      std::size_t end = text.find('>', pos);
      if (end == std::string_view::npos) throw Error("DTD: unterminated declaration of " + el);
      std::string model(text.substr(pos, end - pos));
      pos = end + 1;
      model.erase(std::remove_if(model.begin(), model.end(), [](unsigned char c) { return std::isspace(c); }),
                  model.end());
      ElementDecl decl;
      decl.model = model;
      if (model == "EMPTY") {
        decl.kind = ElementDecl::Kind::Empty;
      } else if (model == "ANY") {
        decl.kind = ElementDecl::Kind::Any;
      } else if (model.find("#PCDATA") != std::string::npos) {
        decl.kind = ElementDecl::Kind::Mixed;
        std::string inner = model.substr(model.find("#PCDATA") + 7);
        std::string cur;
        for (char c : inner) {
          if (isNameChar(c)) {
            cur += c;
          } else if (!cur.empty()) {
            decl.mixedNames.insert(cur);
            cur.clear();
          }
        }
      } else {
        decl.kind = ElementDecl::Kind::Children;
        decl.pattern = std::regex(modelRegex(model), std::regex::ECMAScript | std::regex::optimize);
      }
      dtd.impl_->elements[el] = std::move(decl);
    } else if (text.substr(pos, 9) == "<!ATTLIST") {
      pos += 9;
      std::string el = name();
      auto& attrs = dtd.impl_->attributes[el];
      while (true) {
        skipSpace();
        if (pos < text.size() && text[pos] == '>') {
          ++pos;
          break;
        }
        std::string attr = name();
        AttributeDecl decl;
        skipSpace();
        if (text[pos] == '(') {
          std::size_t end = text.find(')', pos);
          std::string cur;
          for (char c : text.substr(pos + 1, end - pos - 1)) {
            if (isNameChar(c)) {
              cur += c;
            } else if (!cur.empty()) {
              decl.values.push_back(cur);
              cur.clear();
            }
          }
          if (!cur.empty()) decl.values.push_back(cur);
          pos = end + 1;
        } else {
          name();  // CDATA, NMTOKEN, ...
        }
        skipSpace();
        if (text.substr(pos, 9) == "#REQUIRED") {
          decl.required = true;
          pos += 9;
        } else if (text.substr(pos, 8) == "#IMPLIED") {
          pos += 8;
        } else {
          if (text.substr(pos, 6) == "#FIXED") pos += 6;
          decl.defaultValue = quoted();
        }
        attrs[attr] = std::move(decl);
      }
    } else {
      throw Error("DTD: unsupported declaration at offset " + std::to_string(pos));
    }
  }
  return dtd;
}

std::string Dtd::defaultValue(std::string_view element, std::string_view attribute) const {
  auto it = impl_->attributes.find(element);
  if (it == impl_->attributes.end()) return {};
  auto a = it->second.find(std::string(attribute));
  return a == it->second.end() ? std::string() : a->second.defaultValue;
}

namespace {

void check(const Node& node, const std::string& path, const Dtd::Impl& dtd, std::vector<std::string>& out) {
  auto el = dtd.elements.find(node.name);
  if (el == dtd.elements.end()) {
    out.push_back(path + ": undeclared element <" + node.name + ">");
    return;
  }
  const ElementDecl& decl = el->second;

  auto attrsIt = dtd.attributes.find(node.name);
  static const std::map<std::string, AttributeDecl> none;
  const auto& attrs = attrsIt == dtd.attributes.end() ? none : attrsIt->second;
  for (const auto& [k, v] : node.attributes) {
    if (k == "xmlns" || k.starts_with("xmlns:")) continue;
    auto a = attrs.find(k);
    if (a == attrs.end()) {
      out.push_back(path + ": undeclared attribute '" + k + "'");
    } else if (!a->second.values.empty() &&
               std::find(a->second.values.begin(), a->second.values.end(), v) == a->second.values.end()) {
      out.push_back(path + ": attribute '" + k + "' has invalid value '" + v + "'");
    }
  }
  for (const auto& [k, a] : attrs)
    if (a.required && !node.attribute(k)) out.push_back(path + ": missing required attribute '" + k + "'");

  switch (decl.kind) {
    case ElementDecl::Kind::Empty:
      if (!node.children.empty() || !node.text.empty()) out.push_back(path + ": element <" + node.name + "> must be empty");
      break;
    case ElementDecl::Kind::Any:
      break;
    case ElementDecl::Kind::Mixed:
      for (const auto& c : node.children)
        if (!decl.mixedNames.count(c.name)) out.push_back(path + ": element <" + c.name + "> not allowed here");
      break;
    case ElementDecl::Kind::Children: {
      if (!node.text.empty()) out.push_back(path + ": text not allowed in <" + node.name + ">");
      std::string seq;
      for (const auto& c : node.children) seq += c.name + ",";
      if (!std::regex_match(seq, decl.pattern)) {
        std::string shown = seq.empty() ? "nothing" : seq.substr(0, seq.size() - 1);
        out.push_back(path + ": content (" + shown + ") does not match " + decl.model);
      }
      break;
    }
  }

  std::map<std::string, int> seen;
  for (const auto& c : node.children) {
    int i = seen[c.name]++;
    check(c, path + "/" + c.name + "[" + std::to_string(i) + "]", dtd, out);
  }
}

}  // namespace

std::vector<std::string> Dtd::validate(const Node& root) const {
  std::vector<std::string> out;
  check(root, "/" + root.name, *impl_, out);
  return out;
}

const Dtd& vernacularDtd() {
  static const Dtd dtd = Dtd::parse(assets::vernacular_dtd());
  return dtd;
}

}  // namespace clv::xml
