#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace subid {

// Node names are interned to dense indices at construction; everything
// downstream works on indices only.
using NodeId = int;

// Set of node indices over a fixed universe [0, n), stored as a bit array.
// Iteration and to_vector() are always in ascending index order, which keeps
// every derived computation deterministic.
class VarSet {
 public:
  VarSet() : n_(0) {}
  explicit VarSet(int universe) : n_(universe), bits_((universe + 63) / 64, 0) {}
  VarSet(int universe, std::initializer_list<NodeId> vs) : VarSet(universe) {
    for (NodeId v : vs) insert(v);
  }

  int universe() const { return n_; }
  bool empty() const { return count() == 0; }
  int count() const;
  bool contains(NodeId v) const {
    return v >= 0 && v < n_ && (bits_[v >> 6] >> (v & 63)) & 1u;
  }
  void insert(NodeId v);
  void erase(NodeId v);

  VarSet& operator|=(const VarSet& o);
  VarSet& operator&=(const VarSet& o);
  VarSet& operator-=(const VarSet& o);
  friend VarSet operator|(VarSet a, const VarSet& b) { return a |= b; }
  friend VarSet operator&(VarSet a, const VarSet& b) { return a &= b; }
  friend VarSet operator-(VarSet a, const VarSet& b) { return a -= b; }
  bool operator==(const VarSet& o) const { return n_ == o.n_ && bits_ == o.bits_; }
  bool operator!=(const VarSet& o) const { return !(*this == o); }

  bool intersects(const VarSet& o) const;
  bool is_subset_of(const VarSet& o) const;
  std::vector<NodeId> to_vector() const;

 private:
  void check_universe(const VarSet& o) const;
  int n_;
  std::vector<uint64_t> bits_;
};

// Immutable directed acyclic graph. Built through Dag::Builder, which rejects
// cycles and self loops and collapses duplicate edges (recording a warning per
// duplicate rather than failing).
class Dag {
 public:
  class Builder {
   public:
    NodeId add_node(const std::string& name);
    void add_edge(const std::string& from, const std::string& to);
    void add_edge(NodeId from, NodeId to);
    const std::vector<std::string>& warnings() const { return warnings_; }
    Dag build() const;  // throws InputError on a cycle

   private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, NodeId> index_;
    std::vector<std::pair<NodeId, NodeId>> edges_;
    std::unordered_set<uint64_t> edge_keys_;
    std::vector<std::string> warnings_;
  };

  int node_count() const { return static_cast<int>(names_.size()); }
  int edge_count() const { return edge_count_; }
  const std::string& name(NodeId v) const { return names_[v]; }
  std::optional<NodeId> find(const std::string& name) const;
  NodeId require(const std::string& name) const;  // InputError if absent

  const std::vector<NodeId>& parents(NodeId v) const { return parents_[v]; }
  const std::vector<NodeId>& children(NodeId v) const { return children_[v]; }
  bool has_edge(NodeId from, NodeId to) const;
  std::vector<std::pair<NodeId, NodeId>> edges() const;

  // A fixed topological order (parents before children), deterministic for a
  // given construction sequence.
  const std::vector<NodeId>& topo_order() const { return topo_; }

  VarSet all_nodes() const;
  VarSet set_of(std::initializer_list<NodeId> vs) const {
    return VarSet(node_count(), vs);
  }
  VarSet set_of_names(const std::vector<std::string>& names) const;
  std::vector<std::string> names_of(const VarSet& s) const;

 private:
  friend class Builder;
  Dag() = default;
  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<std::vector<NodeId>> parents_;
  std::vector<std::vector<NodeId>> children_;
  std::vector<NodeId> topo_;
  int edge_count_ = 0;
};

// Nodes with a directed path into `seeds`, including the seeds themselves.
VarSet ancestors(const Dag& g, const VarSet& seeds);
VarSet ancestors(const Dag& g, NodeId v);

// Copy of g with all edges into `remove_incoming` and all edges out of
// `remove_outgoing` deleted. Node set and names are preserved.
Dag edge_surgery(const Dag& g, const VarSet& remove_incoming,
                 const VarSet& remove_outgoing);

// A DAG together with a designated selection node that must be childless.
// The selection node stands for membership in the observed sub-population;
// all other nodes form the observed set V.
class AugmentedDag {
 public:
  AugmentedDag(Dag g, NodeId selection);  // InputError if selection has children
  static AugmentedDag with_selection(Dag g, const std::string& selection_name);

  const Dag& graph() const { return g_; }
  NodeId selection() const { return s_; }
  VarSet observed() const;           // every node except the selection node
  VarSet selection_ancestors() const;  // Anc(S) in the full graph, without S

 private:
  Dag g_;
  NodeId s_;
};

}  // namespace subid
