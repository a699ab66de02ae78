#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "subid/graph.hpp"

namespace subid {

// Line-oriented graph text format:
//   # comment to end of line
//   node NAME          (declares a possibly isolated node)
//   A -> B             (declares an edge, auto-declaring its endpoints)
// Whitespace around tokens is ignored. The selection node is chosen by name
// when the graph is loaded, not by syntax.
struct ParsedGraph {
  Dag dag;
  std::vector<std::string> warnings;  // collapsed duplicate edges
};

ParsedGraph parse_graph(std::istream& in);
ParsedGraph parse_graph_text(const std::string& text);
ParsedGraph load_graph_file(const std::string& path);  // InputError if unreadable

// Parses and designates the selection node, rejecting graphs where it is
// missing or has children.
AugmentedDag load_augmented_file(const std::string& path,
                                 const std::string& selection_name = "S",
                                 std::vector<std::string>* warnings = nullptr);

std::string graph_to_text(const Dag& g);

// Renders a walk as "X <- Z -> W <- Y" using the edge directions of g.
// Consecutive nodes must be adjacent in g.
std::string witness_to_text(const Dag& g, const std::vector<NodeId>& path);

}  // namespace subid
