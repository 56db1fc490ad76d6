#include "clv/xml.hpp"

#include <expat.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "clv/errors.hpp"

namespace clv::xml {

const std::string* Node::attribute(std::string_view key) const {
  for (const auto& [k, v] : attributes)
    if (k == key) return &v;
  return nullptr;
}

const Node* Node::child(std::string_view childName) const {
  for (const auto& c : children)
    if (c.name == childName) return &c;
  return nullptr;
}

std::vector<const Node*> Node::childrenNamed(std::string_view childName) const {
  std::vector<const Node*> out;
  for (const auto& c : children)
    if (c.name == childName) out.push_back(&c);
  return out;
}

namespace {

struct Builder {
  XML_Parser parser;
  std::vector<Node> stack;
  std::optional<Node> root;
};

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

void XMLCALL onStart(void* data, const XML_Char* name, const XML_Char** attrs) {
  auto* b = static_cast<Builder*>(data);
  Node n;
  n.name = name;
  n.line = static_cast<int>(XML_GetCurrentLineNumber(b->parser));
  for (int i = 0; attrs[i]; i += 2) n.attributes.emplace_back(attrs[i], attrs[i + 1]);
  b->stack.push_back(std::move(n));
}

void XMLCALL onEnd(void* data, const XML_Char*) {
  auto* b = static_cast<Builder*>(data);
  Node n = std::move(b->stack.back());
  b->stack.pop_back();
  if (blank(n.text)) n.text.clear();
  if (b->stack.empty())
    b->root = std::move(n);
  else
    b->stack.back().children.push_back(std::move(n));
}

void XMLCALL onText(void* data, const XML_Char* s, int len) {
  auto* b = static_cast<Builder*>(data);
  if (!b->stack.empty()) b->stack.back().text.append(s, static_cast<std::size_t>(len));
}

}  // namespace

Node parse(std::string_view text, const std::string& path) {
  Builder b;
  b.parser = XML_ParserCreate("UTF-8");
  XML_SetUserData(b.parser, &b);
  XML_SetElementHandler(b.parser, onStart, onEnd);
  XML_SetCharacterDataHandler(b.parser, onText);
  if (XML_Parse(b.parser, text.data(), static_cast<int>(text.size()), XML_TRUE) == XML_STATUS_ERROR) {
    std::string msg = path + ":" + std::to_string(XML_GetCurrentLineNumber(b.parser)) + ":" +
                      std::to_string(XML_GetCurrentColumnNumber(b.parser)) +
                      ": XML error: " + XML_ErrorString(XML_GetErrorCode(b.parser));
    XML_ParserFree(b.parser);
    throw Error(msg);
  }
  XML_ParserFree(b.parser);
  if (!b.root) throw Error(path + ": no root element");
  return std::move(*b.root);
}

Resolver fileResolver() {
  return [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
}

namespace {

bool isInclude(const Node& n) {
  return n.name == "xi:include" || (n.name.size() > 8 && n.name.ends_with(":include") && n.attribute("href"));
}

void expand(Node& node, const Resolver& resolver, const std::filesystem::path& dir,
            std::vector<std::string>& stack) {
  for (auto& child : node.children) {
    if (!isInclude(child)) {
      expand(child, resolver, dir, stack);
      continue;
    }
    const std::string* href = child.attribute("href");
    if (!href) throw Error("include without href at line " + std::to_string(child.line));
    if (const std::string* mode = child.attribute("parse"); mode && *mode != "xml")
      throw Error("unsupported include mode parse=\"" + *mode + "\"");
    std::filesystem::path target = std::filesystem::path(*href).is_absolute() ? std::filesystem::path(*href) : dir / *href;
    std::string key = target.lexically_normal().string();
    if (std::find(stack.begin(), stack.end(), key) != stack.end()) throw IncludeCycle(key);
    Node included = parse(resolver(key), key);
    stack.push_back(key);
    if (isInclude(included)) throw Error(key + ": an included file cannot consist of an include");
    expand(included, resolver, target.parent_path(), stack);
    stack.pop_back();
    child = std::move(included);
  }
}

}  // namespace

void expandIncludes(Node& root, const Resolver& resolver, const std::string& path) {
  std::filesystem::path p(path);
  std::vector<std::string> stack{p.lexically_normal().string()};
  expand(root, resolver, p.parent_path(), stack);
}

std::string escapeText(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string escapeAttribute(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\n': out += "&#10;"; break;
      case '\t': out += "&#9;"; break;
      case '\r': out += "&#13;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace clv::xml
