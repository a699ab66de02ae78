#include "subid/graph.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <deque>
#include <stdexcept>
#include <unordered_set>

#include "subid/errors.hpp"

namespace subid {

int VarSet::count() const {
  int c = 0;
  for (uint64_t w : bits_) c += std::popcount(w);
  return c;
}

void VarSet::insert(NodeId v) {
  if (v < 0 || v >= n_) throw std::out_of_range("VarSet::insert: node out of range");
  bits_[v >> 6] |= uint64_t{1} << (v & 63);
}

void VarSet::erase(NodeId v) {
  if (v < 0 || v >= n_) throw std::out_of_range("VarSet::erase: node out of range");
  bits_[v >> 6] &= ~(uint64_t{1} << (v & 63));
}

void VarSet::check_universe(const VarSet& o) const {
  if (n_ != o.n_) throw std::logic_error("VarSet: mixed universes");
}

VarSet& VarSet::operator|=(const VarSet& o) {
  check_universe(o);
  for (size_t i = 0; i < bits_.size(); ++i) bits_[i] |= o.bits_[i];
  return *this;
}

VarSet& VarSet::operator&=(const VarSet& o) {
  check_universe(o);
  for (size_t i = 0; i < bits_.size(); ++i) bits_[i] &= o.bits_[i];
  return *this;
}

VarSet& VarSet::operator-=(const VarSet& o) {
  check_universe(o);
  for (size_t i = 0; i < bits_.size(); ++i) bits_[i] &= ~o.bits_[i];
  return *this;
}

bool VarSet::intersects(const VarSet& o) const {
  check_universe(o);
  for (size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] & o.bits_[i]) return true;
  return false;
}

bool VarSet::is_subset_of(const VarSet& o) const {
  check_universe(o);
  for (size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] & ~o.bits_[i]) return false;
  return true;
}

std::vector<NodeId> VarSet::to_vector() const {
  std::vector<NodeId> out;
  out.reserve(count());
  for (int v = 0; v < n_; ++v)
    if (contains(v)) out.push_back(v);
  return out;
}

namespace {

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

}  // namespace

NodeId Dag::Builder::add_node(const std::string& name) {
  if (!valid_name(name))
    throw InputError("invalid node name '" + name + "'");
  auto it = index_.find(name);
  if (it != index_.end()) return it->second;
  NodeId id = static_cast<NodeId>(names_.size());
  names_.push_back(name);
  index_.emplace(name, id);
  return id;
}

void Dag::Builder::add_edge(const std::string& from, const std::string& to) {
  NodeId f = add_node(from);
  NodeId t = add_node(to);
  add_edge(f, t);
}

void Dag::Builder::add_edge(NodeId from, NodeId to) {
  if (from < 0 || from >= static_cast<NodeId>(names_.size()) || to < 0 ||
      to >= static_cast<NodeId>(names_.size()))
    throw InputError("edge endpoint refers to an unknown node");
  if (from == to)
    throw InputError("self loop on node '" + names_[from] + "'");
  uint64_t key = (static_cast<uint64_t>(from) << 32) | static_cast<uint32_t>(to);
  if (!edge_keys_.insert(key).second) {
    warnings_.push_back("duplicate edge " + names_[from] + " -> " + names_[to] +
                        " collapsed");
    return;
  }
  edges_.emplace_back(from, to);
}

Dag Dag::Builder::build() const {
  Dag g;
  g.names_ = names_;
  g.index_ = index_;
  int n = static_cast<int>(names_.size());
  g.parents_.resize(n);
  g.children_.resize(n);
  for (const auto& [from, to] : edges_) {
    g.children_[from].push_back(to);
    g.parents_[to].push_back(from);
  }
  for (auto& adj : g.parents_) std::sort(adj.begin(), adj.end());
  for (auto& adj : g.children_) std::sort(adj.begin(), adj.end());
  g.edge_count_ = static_cast<int>(edges_.size());

  // Kahn's algorithm; anything left over sits on a cycle.
  std::vector<int> indeg(n);
  for (int v = 0; v < n; ++v) indeg[v] = static_cast<int>(g.parents_[v].size());
  std::deque<NodeId> ready;
  for (int v = 0; v < n; ++v)
    if (indeg[v] == 0) ready.push_back(v);
  g.topo_.reserve(n);
  while (!ready.empty()) {
    NodeId v = ready.front();
    ready.pop_front();
    g.topo_.push_back(v);
    for (NodeId c : g.children_[v])
      if (--indeg[c] == 0) ready.push_back(c);
  }
  if (static_cast<int>(g.topo_.size()) != n) {
    std::string cyc;
    for (int v = 0; v < n; ++v) {
      if (indeg[v] > 0) {
        if (!cyc.empty()) cyc += ", ";
        cyc += names_[v];
      }
    }
    throw InputError("graph has a cycle through {" + cyc + "}");
  }
  return g;
}

std::optional<NodeId> Dag::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NodeId Dag::require(const std::string& name) const {
  auto v = find(name);
  if (!v) throw InputError("unknown node '" + name + "'");
  return *v;
}

bool Dag::has_edge(NodeId from, NodeId to) const {
  const auto& ch = children_[from];
  return std::binary_search(ch.begin(), ch.end(), to);
}

std::vector<std::pair<NodeId, NodeId>> Dag::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(edge_count_);
  for (NodeId v = 0; v < node_count(); ++v)
    for (NodeId c : children_[v]) out.emplace_back(v, c);
  return out;
}

VarSet Dag::all_nodes() const {
  VarSet s(node_count());
  for (NodeId v = 0; v < node_count(); ++v) s.insert(v);
  return s;
}

VarSet Dag::set_of_names(const std::vector<std::string>& names) const {
  VarSet s(node_count());
  for (const auto& n : names) s.insert(require(n));
  return s;
}

std::vector<std::string> Dag::names_of(const VarSet& s) const {
  std::vector<std::string> out;
  for (NodeId v : s.to_vector()) out.push_back(names_[v]);
  return out;
}

VarSet ancestors(const Dag& g, const VarSet& seeds) {
  VarSet seen = seeds;
  std::deque<NodeId> queue;
  for (NodeId v : seeds.to_vector()) queue.push_back(v);
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    for (NodeId p : g.parents(v)) {
      if (!seen.contains(p)) {
        seen.insert(p);
        queue.push_back(p);
      }
    }
  }
  return seen;
}

VarSet ancestors(const Dag& g, NodeId v) {
  return ancestors(g, VarSet(g.node_count(), {v}));
}

Dag edge_surgery(const Dag& g, const VarSet& remove_incoming,
                 const VarSet& remove_outgoing) {
  Dag::Builder b;
  for (NodeId v = 0; v < g.node_count(); ++v) b.add_node(g.name(v));
  for (NodeId v = 0; v < g.node_count(); ++v) {
    for (NodeId c : g.children(v)) {
      if (remove_outgoing.contains(v) || remove_incoming.contains(c)) continue;
      b.add_edge(v, c);
    }
  }
  return b.build();
}

AugmentedDag::AugmentedDag(Dag g, NodeId selection) : g_(std::move(g)), s_(selection) {
  if (s_ < 0 || s_ >= g_.node_count())
    throw InputError("selection node index out of range");
  if (!g_.children(s_).empty())
    throw InputError("selection node '" + g_.name(s_) + "' must be childless but has " +
                     std::to_string(g_.children(s_).size()) + " child(ren)");
}

AugmentedDag AugmentedDag::with_selection(Dag g, const std::string& selection_name) {
  NodeId s = g.require(selection_name);
  return AugmentedDag(std::move(g), s);
}

VarSet AugmentedDag::observed() const {
  VarSet v = g_.all_nodes();
  v.erase(s_);
  return v;
}

VarSet AugmentedDag::selection_ancestors() const {
  VarSet a = ancestors(g_, s_);
  a.erase(s_);
  return a;
}

}  // namespace subid
