#include "subid/graph_io.hpp"

#include <fstream>
#include <sstream>

#include "subid/errors.hpp"

namespace subid {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

ParsedGraph parse_graph(std::istream& in) {
  Dag::Builder b;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.rfind("node", 0) == 0 &&
        (line.size() == 4 || line[4] == ' ' || line[4] == '\t')) {
      std::string name = trim(line.substr(4));
      if (name.empty())
        throw InputError("line " + std::to_string(line_no) +
                         ": 'node' needs a name");
      b.add_node(name);
      continue;
    }

    size_t arrow = line.find("->");
    if (arrow == std::string::npos)
      throw InputError("line " + std::to_string(line_no) +
                       ": expected 'node NAME' or 'A -> B', got '" + line + "'");
    std::string from = trim(line.substr(0, arrow));
    std::string to = trim(line.substr(arrow + 2));
    if (from.empty() || to.empty())
      throw InputError("line " + std::to_string(line_no) +
                       ": edge needs both endpoints");
    if (to.find("->") != std::string::npos)
      throw InputError("line " + std::to_string(line_no) +
                       ": one edge per line");
    try {
      b.add_edge(from, to);
    } catch (const InputError& err) {
      throw InputError("line " + std::to_string(line_no) + ": " + err.what());
    }
  }
  return ParsedGraph{b.build(), b.warnings()};
}

ParsedGraph parse_graph_text(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

ParsedGraph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file '" + path + "'");
  try {
    return parse_graph(in);
  } catch (const InputError& err) {
    throw InputError(path + ": " + err.what());
  }
}

AugmentedDag load_augmented_file(const std::string& path,
                                 const std::string& selection_name,
                                 std::vector<std::string>* warnings) {
  ParsedGraph parsed = load_graph_file(path);
  if (warnings) *warnings = parsed.warnings;
  if (!parsed.dag.find(selection_name))
    throw InputError(path + ": selection node '" + selection_name +
                     "' does not appear in the graph");
  return AugmentedDag::with_selection(std::move(parsed.dag), selection_name);
}

std::string graph_to_text(const Dag& g) {
  // Declaring every node up front pins the interning order, so parsing the
  // text back yields the same node ids, not just an isomorphic graph.
  std::string out;
  for (NodeId v = 0; v < g.node_count(); ++v) out += "node " + g.name(v) + "\n";
  for (const auto& [from, to] : g.edges())
    out += g.name(from) + " -> " + g.name(to) + "\n";
  return out;
}

std::string witness_to_text(const Dag& g, const std::vector<NodeId>& path) {
  if (path.empty()) throw InputError("empty witness path");
  std::string out = g.name(path[0]);
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (g.has_edge(path[i - 1], path[i])) {
      out += " -> ";
    } else if (g.has_edge(path[i], path[i - 1])) {
      out += " <- ";
    } else {
      throw InputError("witness nodes '" + g.name(path[i - 1]) + "' and '" +
                       g.name(path[i]) + "' are not adjacent");
    }
    out += g.name(path[i]);
  }
  return out;
}

}  // namespace subid
