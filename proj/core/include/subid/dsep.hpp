#pragma once

#include <optional>
#include <vector>

#include "subid/graph.hpp"

namespace subid {

// Work counters for the reachability-based test. Both are linear in the graph
// size: node_visits counts dequeued (node, direction) states and edge_visits
// counts examined transitions, so node_visits <= 2n and edge_visits <= 4m plus
// the start injections.
struct DsepStats {
  long long node_visits = 0;
  long long edge_visits = 0;
};

// True iff every path between x and y is blocked given `given`. A path is
// blocked when some interior node is a conditioned non-collider or a collider
// with no descendant in the conditioning set (itself included).
//
// Implemented as a breadth-first search over (node, arrival direction) states,
// O(n + m). The three argument sets must be pairwise disjoint and x, y
// non-empty, otherwise InputError.
bool d_separated(const Dag& g, const VarSet& x, const VarSet& y,
                 const VarSet& given, DsepStats* stats = nullptr);

// A d-connecting path from a node of x to a node of y, as a node sequence, or
// nullopt when x and y are separated. The search returns a shortest active
// walk; repeated nodes are spliced out, which provably preserves activeness.
std::optional<std::vector<NodeId>> find_active_path(const Dag& g, const VarSet& x,
                                                    const VarSet& y,
                                                    const VarSet& given);

// Reference implementation: enumerate every simple path between the two sets
// over the skeleton and apply the blocking definition verbatim. Exponential;
// use only on small graphs.
bool d_separated_bruteforce(const Dag& g, const VarSet& x, const VarSet& y,
                            const VarSet& given);

// Applies the blocking definition to one concrete path (consecutive nodes must
// be adjacent in g). Endpoints are unconstrained.
bool path_is_active(const Dag& g, const std::vector<NodeId>& path,
                    const VarSet& given);

}  // namespace subid
