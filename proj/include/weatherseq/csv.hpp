#pragma once

// Minimal CSV helpers: comma-separated UTF-8 with a mandatory header.
// Fields containing commas or quotes are quoted RFC-4180 style.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "weatherseq/core.hpp"

namespace wseq::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const {
    for (size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    return -1;
  }
};

inline std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' && cur.empty()) {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

inline Table read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open file: " + path);
  Table t;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (first) {
      t.header = split_row(line);
      first = false;
      continue;
    }
    if (trim(line).empty()) continue;
    t.rows.push_back(split_row(line));
  }
  if (first) throw error("empty file: " + path);
  return t;
}

class Writer {
 public:
  explicit Writer(const std::string& path) : out_(path) {
    if (!out_) throw error("cannot write file: " + path);
  }
  void header(const std::vector<std::string>& cols) { line(cols); }
  void line(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      if (cells[i].find_first_of(",\"\n") != std::string::npos) {
        out_ << '"';
        for (char c : cells[i]) {
          if (c == '"') out_ << '"';
          out_ << c;
        }
        out_ << '"';
      } else {
        out_ << cells[i];
      }
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

inline double to_num(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw error("bad numeric value for " + what + ": '" + s + "'");
  }
}

}  // namespace wseq::csv
