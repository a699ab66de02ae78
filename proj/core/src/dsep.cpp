#include "subid/dsep.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "subid/errors.hpp"

namespace subid {

namespace {

// Arrival direction of the walk at a node: kDown means the last step followed
// an edge (came from a parent), kUp means it went against one (came from a
// child). Sources are injected as kUp, which leaves both departures open.
enum Dir : int { kDown = 0, kUp = 1 };

struct Search {
  const Dag& g;
  const VarSet& given;
  VarSet anc_given;           // ancestors of the conditioning set, inclusive
  std::vector<int8_t> seen;   // [2 * node + dir]
  std::vector<int> pred;      // encoded predecessor state, -1 for sources
  std::deque<int> queue;
  DsepStats stats;

  Search(const Dag& g_, const VarSet& given_)
      : g(g_),
        given(given_),
        anc_given(ancestors(g_, given_)),
        seen(2 * g_.node_count(), 0),
        pred(2 * g_.node_count(), -1) {}

  static int encode(NodeId v, Dir d) { return 2 * v + d; }

  void push(NodeId v, Dir d, int from) {
    int s = encode(v, d);
    if (seen[s]) return;
    seen[s] = 1;
    pred[s] = from;
    queue.push_back(s);
  }

  // Runs the reachability search; returns the first y-state reached or -1.
  int run(const VarSet& x, const VarSet& y) {
    for (NodeId v : x.to_vector()) push(v, kUp, -1);
    while (!queue.empty()) {
      int s = queue.front();
      queue.pop_front();
      ++stats.node_visits;
      NodeId v = s / 2;
      Dir d = static_cast<Dir>(s % 2);
      if (y.contains(v)) return s;
      // Depart to a child: v acts as a chain (arrived down) or fork (arrived
      // up); either way v must be unconditioned.
      if (!given.contains(v)) {
        for (NodeId c : g.children(v)) {
          ++stats.edge_visits;
          push(c, kDown, s);
        }
      }
      // Depart to a parent: arriving down makes v a collider, which must have
      // a conditioned descendant; arriving up makes v a chain.
      bool can_up = (d == kDown) ? anc_given.contains(v) : !given.contains(v);
      if (can_up) {
        for (NodeId p : g.parents(v)) {
          ++stats.edge_visits;
          push(p, kUp, s);
        }
      }
    }
    return -1;
  }

  std::vector<NodeId> walk_to(int state) const {
    std::vector<NodeId> nodes;
    for (int s = state; s != -1; s = pred[s]) nodes.push_back(s / 2);
    std::reverse(nodes.begin(), nodes.end());
    return nodes;
  }
};

void check_disjoint(const VarSet& x, const VarSet& y, const VarSet& given) {
  if (x.empty() || y.empty())
    throw InputError("d-separation query needs non-empty endpoint sets");
  if (x.intersects(y) || x.intersects(given) || y.intersects(given))
    throw InputError("d-separation query sets must be pairwise disjoint");
}

// Removes repeated nodes from an active walk. Splicing the first arrival at a
// repeated node onto its last departure keeps the walk active: a departure to
// a child certifies the node is unconditioned, an arrival from a child does
// too, and the remaining case (arrive from parent, leave to parent) makes the
// junction a collider that lies above a collider of the original walk, hence
// has a conditioned descendant.
std::vector<NodeId> splice_simple(std::vector<NodeId> nodes) {
  for (;;) {
    std::unordered_map<NodeId, int> last;
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i) last[nodes[i]] = i;
    int cut_from = -1, cut_to = -1;
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
      if (last[nodes[i]] > i) {
        cut_from = i;
        cut_to = last[nodes[i]];
        break;
      }
    }
    if (cut_from < 0) return nodes;
    nodes.erase(nodes.begin() + cut_from, nodes.begin() + cut_to);
  }
}

bool path_active_given_anc(const Dag& g, const std::vector<NodeId>& path,
                           const VarSet& given, const VarSet& anc_given) {
  for (size_t i = 1; i + 1 < path.size(); ++i) {
    NodeId u = path[i - 1], v = path[i], w = path[i + 1];
    bool collider = g.has_edge(u, v) && g.has_edge(w, v);
    if (collider) {
      if (!anc_given.contains(v)) return false;
    } else {
      if (given.contains(v)) return false;
    }
  }
  return true;
}

// Depth-first enumeration of simple skeleton paths from `v` toward any node of
// `y`; returns true as soon as one active path shows up. Paths stop at the
// first y-node they touch: if an extension through a y-node were active, its
// prefix up to that node would be active as well (interior roles coincide).
bool any_active_path_from(const Dag& g, NodeId v, const VarSet& y,
                          const VarSet& given, const VarSet& anc_given,
                          std::vector<NodeId>& path, std::vector<char>& on_path) {
  if (y.contains(v) && !path.empty()) {
    path.push_back(v);
    bool active = path_active_given_anc(g, path, given, anc_given);
    path.pop_back();
    return active;
  }
  path.push_back(v);
  on_path[v] = 1;
  std::vector<NodeId> nbrs = g.parents(v);
  nbrs.insert(nbrs.end(), g.children(v).begin(), g.children(v).end());
  std::sort(nbrs.begin(), nbrs.end());
  bool found = false;
  for (NodeId w : nbrs) {
    if (on_path[w]) continue;
    if (any_active_path_from(g, w, y, given, anc_given, path, on_path)) {
      found = true;
      break;
    }
  }
  path.pop_back();
  on_path[v] = 0;
  return found;
}

}  // namespace

bool d_separated(const Dag& g, const VarSet& x, const VarSet& y,
                 const VarSet& given, DsepStats* stats) {
  check_disjoint(x, y, given);
  Search search(g, given);
  int hit = search.run(x, y);
  if (stats) *stats = search.stats;
  return hit < 0;
}

std::optional<std::vector<NodeId>> find_active_path(const Dag& g, const VarSet& x,
                                                    const VarSet& y,
                                                    const VarSet& given) {
  check_disjoint(x, y, given);
  Search search(g, given);
  int hit = search.run(x, y);
  if (hit < 0) return std::nullopt;
  return splice_simple(search.walk_to(hit));
}

bool d_separated_bruteforce(const Dag& g, const VarSet& x, const VarSet& y,
                            const VarSet& given) {
  check_disjoint(x, y, given);
  VarSet anc_given = ancestors(g, given);
  std::vector<NodeId> path;
  std::vector<char> on_path(g.node_count(), 0);
  for (NodeId a : x.to_vector()) {
    if (any_active_path_from(g, a, y, given, anc_given, path, on_path)) return false;
  }
  return true;
}

bool path_is_active(const Dag& g, const std::vector<NodeId>& path,
                    const VarSet& given) {
  if (path.size() < 2) throw std::logic_error("path needs at least two nodes");
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    NodeId u = path[i], v = path[i + 1];
    if (!g.has_edge(u, v) && !g.has_edge(v, u))
      throw std::logic_error("path nodes are not adjacent");
  }
  return path_active_given_anc(g, path, given, ancestors(g, given));
}

}  // namespace subid
