#pragma once

#include <optional>
#include <vector>

#include "subid/estimand.hpp"
#include "subid/graph.hpp"

namespace subid {

// A conditional causal effect question P_X(Y | S=1): intervene on the
// treatment set, ask for the outcome distribution inside the sub-population.
struct Query {
  VarSet treatment;
  VarSet outcome;

  static Query of(const AugmentedDag& g, const std::vector<std::string>& treatment,
                  const std::vector<std::string>& outcome);
};

// Split of the treatment against the selection ancestry: x1 = X ∩ Anc(S),
// x2 = X \ Anc(S). Only x1 can obstruct identification.
struct Decomposition {
  VarSet x1;
  VarSet x2;
};

struct IdentifyResult {
  bool identifiable = false;
  Decomposition decomposition;
  EstimandPtr estimand;  // set iff identifiable
  // Active path between x1 and y in the surgered graph that x2 ∪ {S} fails
  // to block; set iff not identifiable.
  std::optional<std::vector<NodeId>> witness;
};

// Throws InputError unless q is well-formed against g: non-empty disjoint
// treatment/outcome sets that avoid the selection node.
void check_query(const AugmentedDag& g, const Query& q);

Decomposition decompose_treatment(const AugmentedDag& g, const VarSet& x);

// The graphical criterion alone: x1 empty, or (x1 ⊥ y | x2 ∪ {S}) in the
// graph with x1's outgoing and x2's incoming edges removed.
bool is_s_id(const AugmentedDag& g, const Query& q);

// Full identification: decides the criterion and, when it holds, emits the
// closed-form estimand
//   Σ_{V\(X∪Y)} P^s(Anc(S)\S) [/ P^s(X1)] · ∏_{W ∈ V\(X2∪Anc(S))} P^s(W|Pa(W))
// (the bracketed divisor only when x1 is non-empty). On failure carries a
// witness path instead.
IdentifyResult s_id(const AugmentedDag& g, const Query& q);

// Single-treatment, single-outcome decision with the three direct formulas:
// (i) P^s(Y|X) when removing X's outgoing edges separates X from Y given S;
// otherwise X must not be an ancestor of S, and the result is (ii) P^s(Y)
// when Y is a parent of X, else (iii) Σ_{Pa(X)} P^s(Y|X,Pa(X)) P^s(Pa(X)).
IdentifyResult singleton_estimand(const AugmentedDag& g, NodeId x, NodeId y);

// Effect of intervening on a treatment set disjoint from Anc(S): the
// distribution of V \ x2 factorizes as
//   P^s(Anc(S)\S) · ∏_{W ∈ V\(x2∪Anc(S))} P^s(W|Pa(W)).
// InputError when x2 touches Anc(S).
EstimandPtr x2_effect_estimand(const AugmentedDag& g, const VarSet& x2);

}  // namespace subid
