#pragma once

// Text formats: distance matrices (csv / phylip / json), trees (newick),
// graphviz export, the faithful json form of a hull complex, and the
// certificate report object.

#include <cctype>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tspan/extension.hpp"
#include "tspan/metric_space.hpp"
#include "tspan/tight_span.hpp"
#include "tspan/tree.hpp"

namespace tspan {

enum class FormatTag { Csv, Phylip, Json, Newick, Dot, ComplexJson };

struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline FormatTag format_from_string(const std::string& s) {
  if (s == "csv") return FormatTag::Csv;
  if (s == "phylip") return FormatTag::Phylip;
  if (s == "json") return FormatTag::Json;
  if (s == "newick") return FormatTag::Newick;
  if (s == "dot") return FormatTag::Dot;
  if (s == "complex-json") return FormatTag::ComplexJson;
  throw parse_error("unknown format: " + s);
}

inline std::string format_to_string(FormatTag f) {
  switch (f) {
    case FormatTag::Csv: return "csv";
    case FormatTag::Phylip: return "phylip";
    case FormatTag::Json: return "json";
    case FormatTag::Newick: return "newick";
    case FormatTag::Dot: return "dot";
    case FormatTag::ComplexJson: return "complex-json";
  }
  throw std::logic_error("unreachable");
}

namespace detail {

inline std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char ch : text) {
    if (ch == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty() && cur.back() == '\r') cur.pop_back();
  if (!cur.empty()) lines.push_back(cur);
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  cells.push_back(trim(cur));
  return cells;
}

inline double parse_number(const std::string& s, std::size_t line_no) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw parse_error("");
    return v;
  } catch (const std::exception&) {
    throw parse_error("line " + std::to_string(line_no) + ": not a number: '" + s + "'");
  }
}

}  // namespace detail

// ------------------------------------------------------------------ matrices

inline FiniteMetricSpace parse_distance_matrix(const std::string& text, FormatTag format,
                                               double tol = kDefaultTol) {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> matrix;

  if (format == FormatTag::Csv) {
    std::vector<std::string> lines = detail::split_lines(text);
    if (lines.size() < 2) throw parse_error("csv needs a header row and data rows");
    labels = detail::split_csv(lines[0]);
    const std::size_t n = labels.size();
    if (lines.size() != n + 1)
      throw parse_error("csv has " + std::to_string(lines.size() - 1) + " data rows for " +
                        std::to_string(n) + " labels");
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::string> cells = detail::split_csv(lines[i + 1]);
      if (cells.size() != n + 1)
        throw parse_error("line " + std::to_string(i + 2) + ": expected " +
                          std::to_string(n + 1) + " cells, got " + std::to_string(cells.size()));
      if (cells[0] != labels[i])
        throw parse_error("line " + std::to_string(i + 2) + ": row label '" + cells[0] +
                          "' does not match header label '" + labels[i] + "'");
      std::vector<double> row;
      for (std::size_t j = 1; j < cells.size(); ++j)
        row.push_back(detail::parse_number(cells[j], i + 2));
      matrix.push_back(std::move(row));
    }
  } else if (format == FormatTag::Phylip) {
    std::istringstream in(text);
    std::size_t n = 0;
    if (!(in >> n) || n == 0) throw parse_error("phylip must start with a positive point count");
    for (std::size_t i = 0; i < n; ++i) {
      std::string label;
      if (!(in >> label))
        throw parse_error("line " + std::to_string(i + 2) + ": missing row label");
      std::vector<double> row(n);
      for (std::size_t j = 0; j < n; ++j)
        if (!(in >> row[j]))
          throw parse_error("line " + std::to_string(i + 2) + ": missing entry " +
                            std::to_string(j + 1));
      labels.push_back(label);
      matrix.push_back(std::move(row));
    }
    std::string extra;
    if (in >> extra) throw parse_error("trailing content after the matrix: '" + extra + "'");
  } else if (format == FormatTag::Json) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw parse_error(std::string("json: ") + e.what());
    }
    if (!j.is_object() || !j.contains("labels") || !j.contains("matrix"))
      throw parse_error("json must be an object with 'labels' and 'matrix'");
    try {
      labels = j.at("labels").get<std::vector<std::string>>();
      matrix = j.at("matrix").get<std::vector<std::vector<double>>>();
    } catch (const nlohmann::json::exception& e) {
      throw parse_error(std::string("json: ") + e.what());
    }
  } else {
    throw parse_error("format " + format_to_string(format) + " is not a matrix format");
  }

  return FiniteMetricSpace::from_matrix(std::move(labels), matrix, tol);
}

inline std::string serialize_distance_matrix(const FiniteMetricSpace& m, FormatTag format) {
  std::string out;
  if (format == FormatTag::Csv) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (j) out += ',';
      out += m.label(j);
    }
    out += '\n';
    for (std::size_t i = 0; i < m.size(); ++i) {
      out += m.label(i);
      for (std::size_t j = 0; j < m.size(); ++j) out += ',' + detail::fmt_double(m.distance(i, j));
      out += '\n';
    }
    return out;
  }
  if (format == FormatTag::Phylip) {
    out = std::to_string(m.size()) + '\n';
    for (std::size_t i = 0; i < m.size(); ++i) {
      out += m.label(i);
      for (std::size_t j = 0; j < m.size(); ++j) out += ' ' + detail::fmt_double(m.distance(i, j));
      out += '\n';
    }
    return out;
  }
  if (format == FormatTag::Json) {
    nlohmann::json j;
    j["labels"] = m.labels();
    std::vector<std::vector<double>> matrix;
    for (std::size_t i = 0; i < m.size(); ++i) {
      std::vector<double> row;
      for (std::size_t jj = 0; jj < m.size(); ++jj) row.push_back(m.distance(i, jj));
      matrix.push_back(std::move(row));
    }
    j["matrix"] = matrix;
    return j.dump(2) + "\n";
  }
  throw parse_error("format " + format_to_string(format) + " is not a matrix format");
}

// -------------------------------------------------------------------- newick

namespace detail {

struct NewickParser {
  const std::string& text;
  std::size_t pos = 0;
  MetricTree tree;

  explicit NewickParser(const std::string& t) : text(t) {}

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw parse_error("newick at position " + std::to_string(pos) + ": " + msg);
  }

  std::string read_name() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size()) {
      char c = text[pos];
      if (c == '(' || c == ')' || c == ',' || c == ':' || c == ';' ||
          std::isspace(static_cast<unsigned char>(c)))
        break;
      ++pos;
    }
    return text.substr(start, pos - start);
  }

  double read_length() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.' ||
            text[pos] == '-' || text[pos] == '+' || text[pos] == 'e' || text[pos] == 'E'))
      ++pos;
    if (start == pos) fail("expected a branch length");
    try {
      return std::stod(text.substr(start, pos - start));
    } catch (const std::exception&) {
      fail("bad branch length '" + text.substr(start, pos - start) + "'");
    }
  }

  // Parses one subtree clause; returns (node id, has length, length).
  struct Clause {
    std::size_t node;
    bool has_len = false;
    double len = 0;
  };

  Clause parse_clause() {
    Clause cl{};
    if (peek() == '(') {
      ++pos;  // consume '('
      std::size_t me = tree.add_node();
      cl.node = me;
      while (true) {
        Clause child = parse_clause();
        if (!child.has_len) fail("every non-root branch needs a ':length'");
        if (!(child.len > 0)) fail("branch lengths must be positive");
        tree.add_edge(me, child.node, child.len);
        char c = peek();
        if (c == ',') {
          ++pos;
          continue;
        }
        if (c == ')') {
          ++pos;
          break;
        }
        fail("expected ',' or ')'");
      }
      std::string name = read_name();
      if (!name.empty()) set_name(me, name);
    } else {
      std::string name = read_name();
      if (name.empty()) fail("leaves must be named");
      cl.node = tree.add_node();
      set_name(cl.node, name);
    }
    if (peek() == ':') {
      ++pos;
      cl.len = read_length();
      cl.has_len = true;
    }
    return cl;
  }

  void set_name(std::size_t node, const std::string& name) {
    if (tree.find_label(name) != kNoIndex) fail("duplicate node name '" + name + "'");
    tree.set_label(node, name);
  }

  MetricTree run() {
    Clause root = parse_clause();
    if (root.has_len) fail("the root cannot carry a branch length");
    if (peek() != ';') fail("expected terminating ';'");
    ++pos;
    skip_ws();
    if (pos != text.size()) fail("trailing content after ';'");
    if (!tree.is_valid()) fail("parsed structure is not a tree");
    return std::move(tree);
  }
};

}  // namespace detail

inline MetricTree parse_newick(const std::string& text) {
  detail::NewickParser p(text);
  return p.run();
}

inline std::string serialize_newick(const MetricTree& t) {
  if (t.node_count() == 0) throw std::invalid_argument("empty tree");
  std::string out;
  // Root at node 0; children in node-id order.
  auto emit = [&](auto&& self, std::size_t node, std::size_t parent_edge) -> void {
    std::vector<std::pair<std::size_t, std::size_t>> kids;  // (child node, edge)
    for (auto [e, nb] : t.neighbors(node))
      if (e != parent_edge) kids.emplace_back(nb, e);
    std::sort(kids.begin(), kids.end());
    if (!kids.empty()) {
      out += '(';
      for (std::size_t i = 0; i < kids.size(); ++i) {
        if (i) out += ',';
        self(self, kids[i].first, kids[i].second);
        out += ':' + detail::fmt_double(t.edge(kids[i].second).length);
      }
      out += ')';
    }
    out += t.label(node);
  };
  emit(emit, 0, kNoIndex);
  out += ';';
  return out;
}

// ----------------------------------------------------------------------- dot

inline std::string export_dot(const MetricTree& t) {
  std::string out = "graph tree {\n";
  for (std::size_t v = 0; v < t.node_count(); ++v) {
    out += "  n" + std::to_string(v);
    if (t.labeled(v)) out += " [label=\"" + t.label(v) + "\"]";
    out += ";\n";
  }
  for (std::size_t e = 0; e < t.edge_count(); ++e) {
    const auto& ed = t.edge(e);
    out += "  n" + std::to_string(ed.u) + " -- n" + std::to_string(ed.v) + " [len=" +
           detail::fmt_double(ed.length) + "];\n";
  }
  out += "}\n";
  return out;
}

inline std::string export_dot(const TightSpanComplex& c) {
  std::string out = "graph hull {\n";
  for (std::size_t v = 0; v < c.vertices.size(); ++v) {
    out += "  n" + std::to_string(v);
    for (std::size_t z = 0; z < c.canonical_vertex.size(); ++z)
      if (c.canonical_vertex[z] == v) {
        out += " [label=\"" + c.base.label(z) + "\"]";
        break;
      }
    out += ";\n";
  }
  for (const auto& e : c.edges)
    out += "  n" + std::to_string(e.u) + " -- n" + std::to_string(e.v) + " [len=" +
           detail::fmt_double(e.length) + "];\n";
  for (const auto& cell : c.cells2) {
    out += "  // cell:";
    for (std::size_t id : cell) out += ' ' + std::to_string(id);
    out += '\n';
  }
  out += "}\n";
  return out;
}

// -------------------------------------------------------------- complex json

inline nlohmann::json complex_to_json(const TightSpanComplex& c) {
  nlohmann::json j;
  j["base"]["labels"] = c.base.labels();
  {
    std::vector<std::vector<double>> matrix;
    for (std::size_t i = 0; i < c.base.size(); ++i) {
      std::vector<double> row;
      for (std::size_t k = 0; k < c.base.size(); ++k) row.push_back(c.base.distance(i, k));
      matrix.push_back(std::move(row));
    }
    j["base"]["matrix"] = matrix;
  }
  j["vertices"] = nlohmann::json::array();
  for (std::size_t v = 0; v < c.vertices.size(); ++v)
    j["vertices"].push_back({{"id", v}, {"f", c.vertices[v]}});
  j["canonical"] = c.canonical_vertex;
  j["edges"] = nlohmann::json::array();
  for (const auto& e : c.edges)
    j["edges"].push_back({{"u", e.u}, {"v", e.v}, {"length", e.length}});
  j["cells"] = c.cells2;
  j["higher_dim_present"] = c.higher_dim_present;
  return j;
}

inline std::string serialize_complex(const TightSpanComplex& c) {
  return complex_to_json(c).dump(2) + "\n";
}

inline TightSpanComplex complex_from_json(const nlohmann::json& j, double tol = kDefaultTol) {
  TightSpanComplex c;
  try {
    c.base = FiniteMetricSpace::from_matrix(
        j.at("base").at("labels").get<std::vector<std::string>>(),
        j.at("base").at("matrix").get<std::vector<std::vector<double>>>(), tol);
    c.vertices.resize(j.at("vertices").size());
    for (const auto& v : j.at("vertices"))
      c.vertices.at(v.at("id").get<std::size_t>()) = v.at("f").get<FnVec>();
    c.canonical_vertex = j.at("canonical").get<std::vector<std::size_t>>();
    for (const auto& e : j.at("edges"))
      c.edges.push_back({e.at("u").get<std::size_t>(), e.at("v").get<std::size_t>(),
                         e.at("length").get<double>()});
    c.cells2 = j.at("cells").get<std::vector<std::vector<std::size_t>>>();
    c.higher_dim_present = j.at("higher_dim_present").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("complex-json: ") + e.what());
  }
  return c;
}

inline TightSpanComplex parse_complex(const std::string& text, double tol = kDefaultTol) {
  try {
    return complex_from_json(nlohmann::json::parse(text), tol);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("complex-json: ") + e.what());
  }
}

// ---------------------------------------------------------------- certificate

inline nlohmann::json certificate_to_json(const StabilityCertificate& cert) {
  nlohmann::json j;
  j["dis0"] = cert.dis0;
  j["dis_final"] = cert.dis_final;
  j["alpha"] = cert.alpha;
  j["mesh"] = cert.mesh;
  j["bound_chain"] = cert.bound_chain;
  j["theorem"] = cert.theorem;
  j["pass"] = cert.pass;
  return j;
}

}  // namespace tspan
