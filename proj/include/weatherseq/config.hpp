#pragma once

// Declarative block configuration format shared by scheme, criteria, building
// and model files:
//
//   # comment
//   indicator global_sum {
//     bin 600 2300 "very low radiation"
//   }
//
// A node is `name arg... [{ children }]`. Quoted arguments may contain spaces.

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "weatherseq/core.hpp"

namespace wseq::config {

struct Node {
  std::string name;
  std::vector<std::string> args;
  std::vector<Node> children;
  bool has_block = false;

  const Node* find(const std::string& child_name) const {
    for (const auto& c : children)
      if (c.name == child_name) return &c;
    return nullptr;
  }
  std::vector<const Node*> find_all(const std::string& child_name) const {
    std::vector<const Node*> out;
    for (const auto& c : children)
      if (c.name == child_name) out.push_back(&c);
    return out;
  }
  // single-argument convenience accessors
  std::string arg_str(size_t i) const {
    if (i >= args.size()) throw error("node '" + name + "': missing argument");
    return args[i];
  }
  double arg_num(size_t i) const {
    const std::string s = arg_str(i);
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    try {
      size_t pos = 0;
      double v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw error("node '" + name + "': expected number, got '" + s + "'");
    }
  }
  std::string child_str(const std::string& key, size_t i = 0) const {
    const Node* c = find(key);
    if (!c) throw error("node '" + name + "': missing '" + key + "'");
    return c->arg_str(i);
  }
  double child_num(const std::string& key, size_t i = 0) const {
    const Node* c = find(key);
    if (!c) throw error("node '" + name + "': missing '" + key + "'");
    return c->arg_num(i);
  }
  double child_num_or(const std::string& key, double fallback) const {
    const Node* c = find(key);
    return c ? c->arg_num(0) : fallback;
  }
  std::string child_str_or(const std::string& key, const std::string& fallback) const {
    const Node* c = find(key);
    return c ? c->arg_str(0) : fallback;
  }
};

namespace detail {

struct Token {
  enum class Kind { word, open, close, newline, end } kind;
  std::string text;
  int line;
};

inline std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  int line = 1;
  size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (c == '\n') {
      out.push_back({Token::Kind::newline, "", line});
      ++line;
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '{') {
      out.push_back({Token::Kind::open, "{", line});
      ++i;
    } else if (c == '}') {
      out.push_back({Token::Kind::close, "}", line});
      ++i;
    } else if (c == '"') {
      std::string word;
      ++i;
      while (i < text.size() && text[i] != '"') {
        if (text[i] == '\n') throw error("unterminated quote at line " + std::to_string(line));
        word.push_back(text[i++]);
      }
      if (i >= text.size()) throw error("unterminated quote at line " + std::to_string(line));
      ++i;
      out.push_back({Token::Kind::word, word, line});
    } else {
      std::string word;
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
             text[i] != '{' && text[i] != '}' && text[i] != '#') {
        word.push_back(text[i++]);
      }
      out.push_back({Token::Kind::word, word, line});
    }
  }
  out.push_back({Token::Kind::end, "", line});
  return out;
}

inline std::vector<Node> parse_children(const std::vector<Token>& toks, size_t& i, bool top);

inline Node parse_node(const std::vector<Token>& toks, size_t& i) {
  Node n;
  n.name = toks[i].text;
  ++i;
  while (toks[i].kind == Token::Kind::word) {
    n.args.push_back(toks[i].text);
    ++i;
  }
  if (toks[i].kind == Token::Kind::open) {
    n.has_block = true;
    ++i;
    n.children = parse_children(toks, i, false);
    if (toks[i].kind != Token::Kind::close)
      throw error("expected '}' at line " + std::to_string(toks[i].line));
    ++i;
  }
  return n;
}

inline std::vector<Node> parse_children(const std::vector<Token>& toks, size_t& i, bool top) {
  std::vector<Node> out;
  while (true) {
    while (toks[i].kind == Token::Kind::newline) ++i;
    if (toks[i].kind == Token::Kind::end) {
      if (!top) throw error("unexpected end of input, missing '}'");
      return out;
    }
    if (toks[i].kind == Token::Kind::close) {
      if (top) throw error("unexpected '}' at line " + std::to_string(toks[i].line));
      return out;
    }
    if (toks[i].kind != Token::Kind::word)
      throw error("expected a name at line " + std::to_string(toks[i].line));
    out.push_back(parse_node(toks, i));
  }
}

}  // namespace detail

inline std::vector<Node> parse(const std::string& text) {
  auto toks = detail::tokenize(text);
  size_t i = 0;
  return detail::parse_children(toks, i, true);
}

inline std::vector<Node> parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

inline bool needs_quotes(const std::string& s) {
  if (s.empty()) return true;
  for (char c : s)
    if (std::isspace(static_cast<unsigned char>(c)) || c == '{' || c == '}' || c == '"' || c == '#')
      return true;
  return false;
}

inline void write_node(std::ostream& os, const Node& n, int indent = 0) {
  os << std::string(static_cast<size_t>(indent) * 2, ' ') << n.name;
  for (const auto& a : n.args) {
    os << ' ';
    if (needs_quotes(a))
      os << '"' << a << '"';
    else
      os << a;
  }
  if (n.has_block || !n.children.empty()) {
    os << " {\n";
    for (const auto& c : n.children) write_node(os, c, indent + 1);
    os << std::string(static_cast<size_t>(indent) * 2, ' ') << "}\n";
  } else {
    os << '\n';
  }
}

inline std::string to_string(const std::vector<Node>& nodes) {
  std::ostringstream os;
  for (const auto& n : nodes) write_node(os, n);
  return os.str();
}

}  // namespace wseq::config
