#include <doctest.h>

#include <algorithm>
#include <vector>

#include "subid/errors.hpp"
#include "subid/graph.hpp"

using namespace subid;

namespace {

Dag diamond() {
  Dag::Builder b;
  b.add_edge("A", "B");
  b.add_edge("A", "C");
  b.add_edge("B", "D");
  b.add_edge("C", "D");
  return b.build();
}

}  // namespace

TEST_CASE("varset basics") {
  VarSet s(70);
  CHECK(s.empty());
  s.insert(0);
  s.insert(69);
  s.insert(69);
  CHECK(s.count() == 2);
  CHECK(s.contains(0));
  CHECK(s.contains(69));
  CHECK_FALSE(s.contains(35));
  CHECK_FALSE(s.contains(-1));
  CHECK_FALSE(s.contains(70));
  s.erase(0);
  CHECK(s.count() == 1);
  CHECK(s.to_vector() == std::vector<NodeId>{69});
}

TEST_CASE("varset algebra") {
  VarSet a(10, {1, 3, 5});
  VarSet b(10, {3, 4});
  CHECK((a | b).to_vector() == std::vector<NodeId>{1, 3, 4, 5});
  CHECK((a & b).to_vector() == std::vector<NodeId>{3});
  CHECK((a - b).to_vector() == std::vector<NodeId>{1, 5});
  CHECK(a.intersects(b));
  CHECK_FALSE((a - b).intersects(b));
  CHECK(VarSet(10, {3}).is_subset_of(a));
  CHECK_FALSE(a.is_subset_of(b));
  CHECK(a == VarSet(10, {5, 3, 1}));
  CHECK(a != b);
}

TEST_CASE("varset universe mismatch is a hard error") {
  VarSet a(4), b(5);
  CHECK_THROWS_AS(a |= b, std::logic_error);
  CHECK_THROWS_AS((void)a.intersects(b), std::logic_error);
}

TEST_CASE("builder interns names in first-mention order") {
  Dag g = diamond();
  CHECK(g.node_count() == 4);
  CHECK(g.edge_count() == 4);
  CHECK(g.name(0) == "A");
  CHECK(g.name(1) == "B");
  CHECK(g.name(2) == "C");
  CHECK(g.name(3) == "D");
  CHECK(g.require("C") == 2);
  CHECK_FALSE(g.find("E").has_value());
  CHECK_THROWS_AS(g.require("E"), InputError);
}

TEST_CASE("parents and children are sorted") {
  Dag g = diamond();
  NodeId d = g.require("D");
  CHECK(g.parents(d) == std::vector<NodeId>{1, 2});
  CHECK(g.children(0) == std::vector<NodeId>{1, 2});
  CHECK(g.has_edge(0, 1));
  CHECK_FALSE(g.has_edge(1, 0));
}

TEST_CASE("duplicate edges collapse with a warning") {
  Dag::Builder b;
  b.add_edge("A", "B");
  b.add_edge("A", "B");
  CHECK(b.warnings().size() == 1);
  CHECK(b.build().edge_count() == 1);
}

TEST_CASE("self loops and cycles are rejected") {
  Dag::Builder b;
  CHECK_THROWS_AS(b.add_edge("A", "A"), InputError);

  Dag::Builder c;
  c.add_edge("A", "B");
  c.add_edge("B", "C");
  c.add_edge("C", "A");
  CHECK_THROWS_WITH_AS(c.build(), doctest::Contains("cycle"), InputError);
}

TEST_CASE("bad node names are rejected") {
  Dag::Builder b;
  CHECK_THROWS_AS(b.add_node("3x"), InputError);
  CHECK_THROWS_AS(b.add_node("a b"), InputError);
  CHECK_THROWS_AS(b.add_node(""), InputError);
  b.add_node("x_3");
}

TEST_CASE("topological order puts parents first") {
  Dag g = diamond();
  const auto& topo = g.topo_order();
  std::vector<int> pos(g.node_count());
  for (int i = 0; i < g.node_count(); ++i) pos[topo[i]] = i;
  for (const auto& [from, to] : g.edges()) CHECK(pos[from] < pos[to]);
}

TEST_CASE("ancestors are inclusive") {
  Dag g = diamond();
  CHECK(ancestors(g, g.require("D")) == g.all_nodes());
  CHECK(ancestors(g, g.require("B")).to_vector() ==
        std::vector<NodeId>{0, 1});
  VarSet seeds = g.set_of_names({"B", "C"});
  CHECK(ancestors(g, seeds).to_vector() == std::vector<NodeId>{0, 1, 2});
}

TEST_CASE("edge surgery removes exactly the requested edges") {
  Dag g = diamond();
  Dag no_in = edge_surgery(g, g.set_of_names({"D"}), VarSet(4));
  CHECK(no_in.edge_count() == 2);
  CHECK(no_in.parents(g.require("D")).empty());
  CHECK(no_in.node_count() == 4);
  CHECK(no_in.name(3) == "D");

  Dag no_out = edge_surgery(g, VarSet(4), g.set_of_names({"A"}));
  CHECK(no_out.edge_count() == 2);
  CHECK(no_out.children(0).empty());
}

TEST_CASE("augmented graph rejects a selection node with children") {
  Dag::Builder b;
  b.add_edge("X", "S");
  b.add_edge("S", "Y");
  Dag g = b.build();
  CHECK_THROWS_AS(AugmentedDag(g, g.require("S")), InputError);
}

TEST_CASE("augmented graph exposes observed set and selection ancestors") {
  Dag::Builder b;
  b.add_edge("W", "X");
  b.add_edge("X", "Y");
  b.add_edge("W", "S");
  AugmentedDag g = AugmentedDag::with_selection(b.build(), "S");
  CHECK(g.selection() == g.graph().require("S"));
  CHECK(g.observed().count() == 3);
  CHECK_FALSE(g.observed().contains(g.selection()));
  CHECK(g.graph().names_of(g.selection_ancestors()) ==
        std::vector<std::string>{"W"});
}
