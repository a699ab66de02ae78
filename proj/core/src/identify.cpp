#include "subid/identify.hpp"

#include <algorithm>

#include "subid/dsep.hpp"
#include "subid/errors.hpp"

namespace subid {

void check_query(const AugmentedDag& g, const Query& q) {
  const Dag& d = g.graph();
  if (q.treatment.universe() != d.node_count() ||
      q.outcome.universe() != d.node_count())
    throw InputError("query sets built against a different graph");
  if (q.treatment.empty() || q.outcome.empty())
    throw InputError("treatment and outcome must be non-empty");
  if (q.treatment.intersects(q.outcome))
    throw InputError("treatment and outcome overlap");
  if (q.treatment.contains(g.selection()) || q.outcome.contains(g.selection()))
    throw InputError("the selection node cannot be a treatment or outcome");
}

namespace {

// Variable names in topological position order, for summation subscripts.
std::vector<std::string> topo_names(const Dag& g, const VarSet& s) {
  std::vector<std::string> out;
  for (NodeId v : g.topo_order())
    if (s.contains(v)) out.push_back(g.name(v));
  return out;
}

// Names in node index order, for probability factor slots.
std::vector<std::string> index_names(const Dag& g, const VarSet& s) {
  std::vector<std::string> out;
  for (NodeId v : s.to_vector()) out.push_back(g.name(v));
  return out;
}

std::vector<std::string> parent_names(const Dag& g, NodeId v) {
  std::vector<std::string> out;
  for (NodeId p : g.parents(v)) out.push_back(g.name(p));
  return out;
}

// The shared body of the factorized estimands: the joint factor over
// Anc(S)\S (divided by P^s(x1) when asked) times one conditional per
// remaining non-treatment variable.
EstimandPtr factorized_body(const AugmentedDag& g, const VarSet& x2,
                            const VarSet& x1_divisor) {
  const Dag& d = g.graph();
  VarSet anc_s = g.selection_ancestors();  // S itself excluded
  std::vector<EstimandPtr> factors;
  if (!anc_s.empty()) {
    EstimandPtr head = Estimand::prob(index_names(d, anc_s));
    if (!x1_divisor.empty())
      head = Estimand::ratio(head, Estimand::prob(index_names(d, x1_divisor)));
    factors.push_back(head);
  }
  VarSet rest = g.observed();
  rest -= x2;
  rest -= anc_s;
  for (NodeId w : rest.to_vector())
    factors.push_back(Estimand::prob({d.name(w)}, parent_names(d, w)));
  return Estimand::product(std::move(factors));
}

}  // namespace

Query Query::of(const AugmentedDag& g, const std::vector<std::string>& treatment,
                const std::vector<std::string>& outcome) {
  Query q{g.graph().set_of_names(treatment), g.graph().set_of_names(outcome)};
  check_query(g, q);
  return q;
}

Decomposition decompose_treatment(const AugmentedDag& g, const VarSet& x) {
  if (x.contains(g.selection()))
    throw InputError("treatment contains the selection node");
  VarSet anc = ancestors(g.graph(), g.selection());
  return Decomposition{x & anc, x - anc};
}

namespace {

// The separation criterion shared by is_s_id and s_id. Returns the surgered
// graph so s_id can extract a witness from the same graph.
struct CriterionCheck {
  bool holds;
  Dag surgered;
  VarSet cond;  // x2 ∪ {S}, in the surgered graph's universe
};

CriterionCheck check_criterion(const AugmentedDag& g, const Decomposition& d,
                               const VarSet& y) {
  Dag surgered = edge_surgery(g.graph(), /*remove_incoming=*/d.x2,
                              /*remove_outgoing=*/d.x1);
  VarSet cond = d.x2;
  cond.insert(g.selection());
  bool sep = d_separated(surgered, d.x1, y, cond);
  return CriterionCheck{sep, std::move(surgered), std::move(cond)};
}

}  // namespace

bool is_s_id(const AugmentedDag& g, const Query& q) {
  check_query(g, q);
  Decomposition d = decompose_treatment(g, q.treatment);
  if (d.x1.empty()) return true;
  return check_criterion(g, d, q.outcome).holds;
}

IdentifyResult s_id(const AugmentedDag& g, const Query& q) {
  check_query(g, q);
  const Dag& dag = g.graph();
  Decomposition d = decompose_treatment(g, q.treatment);

  if (!d.x1.empty()) {
    CriterionCheck c = check_criterion(g, d, q.outcome);
    if (!c.holds) {
      auto witness = find_active_path(c.surgered, d.x1, q.outcome, c.cond);
      return IdentifyResult{false, d, nullptr, witness};
    }
  }

  VarSet bound = g.observed();
  bound -= q.treatment;
  bound -= q.outcome;
  EstimandPtr body = factorized_body(g, d.x2, d.x1);
  EstimandPtr e = Estimand::sum_over(topo_names(dag, bound), std::move(body));
  return IdentifyResult{true, d, e, std::nullopt};
}

IdentifyResult singleton_estimand(const AugmentedDag& g, NodeId x, NodeId y) {
  const Dag& dag = g.graph();
  if (x < 0 || x >= dag.node_count() || y < 0 || y >= dag.node_count())
    throw InputError("node index out of range");
  if (x == y) throw InputError("treatment equals outcome");
  if (x == g.selection() || y == g.selection())
    throw InputError("the selection node cannot be a treatment or outcome");

  VarSet xs = dag.set_of({x}), ys = dag.set_of({y});
  Decomposition d = decompose_treatment(g, xs);

  // Case (i): cutting X's outgoing edges leaves X and Y separated given S.
  Dag no_out = edge_surgery(dag, VarSet(dag.node_count()), xs);
  VarSet s_only = dag.set_of({g.selection()});
  if (d_separated(no_out, xs, ys, s_only)) {
    return IdentifyResult{true, d, Estimand::prob({dag.name(y)}, {dag.name(x)}),
                          std::nullopt};
  }
  if (d.x1.contains(x)) {
    auto witness = find_active_path(no_out, xs, ys, s_only);
    return IdentifyResult{false, d, nullptr, witness};
  }
  // Case (ii): Y feeds X directly, so intervening on X cannot touch it.
  const auto& pa = dag.parents(x);
  if (std::find(pa.begin(), pa.end(), y) != pa.end())
    return IdentifyResult{true, d, Estimand::prob({dag.name(y)}), std::nullopt};
  // Case (iii): adjust for X's parents. No parents degenerates to P^s(Y|X).
  EstimandPtr body;
  if (pa.empty()) {
    body = Estimand::prob({dag.name(y)}, {dag.name(x)});
  } else {
    std::vector<std::string> givens{dag.name(x)};
    for (NodeId p : pa) givens.push_back(dag.name(p));
    body = Estimand::product({Estimand::prob({dag.name(y)}, std::move(givens)),
                              Estimand::prob(parent_names(dag, x))});
  }
  VarSet pa_set(dag.node_count());
  for (NodeId p : pa) pa_set.insert(p);
  EstimandPtr e = Estimand::sum_over(topo_names(dag, pa_set), std::move(body));
  return IdentifyResult{true, d, e, std::nullopt};
}

EstimandPtr x2_effect_estimand(const AugmentedDag& g, const VarSet& x2) {
  if (x2.contains(g.selection()))
    throw InputError("treatment contains the selection node");
  VarSet anc = ancestors(g.graph(), g.selection());
  if (x2.intersects(anc))
    throw InputError("x2 must be disjoint from the selection node's ancestors");
  return factorized_body(g, x2, VarSet(g.graph().node_count()));
}

}  // namespace subid
