#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "subid/graph.hpp"
#include "subid/identify.hpp"
#include "subid/joint_table.hpp"
#include "subid/rng.hpp"

namespace subid {

// Exact discrete structural model over an augmented DAG: one conditional
// probability table per node, rows indexed by the parent assignment (parents
// in node index order, row-major, first parent slowest). The selection node
// is binary like any other CPT, with value 1 meaning "in the sub-population".
//
// This is the verification oracle: everything is computed by exact
// enumeration, so results are correct to floating-point precision.
class DiscreteSem {
 public:
  DiscreteSem(AugmentedDag graph, std::vector<int> cards,
              std::vector<std::vector<double>> cpts);

  const AugmentedDag& graph() const { return graph_; }
  const std::vector<int>& cards() const { return cards_; }
  int card(NodeId v) const { return cards_[v]; }
  const std::vector<double>& cpt(NodeId v) const { return cpts_[v]; }

  // P(v = full[v] | parents at their values in `full`).
  double cpt_value(NodeId v, const std::vector<int>& full) const;
  long long parent_configs(NodeId v) const;
  // Row offset for the parent configuration embedded in `full`.
  long long row_of(NodeId v, const std::vector<int>& full) const;

 private:
  AugmentedDag graph_;
  std::vector<int> cards_;
  std::vector<std::vector<double>> cpts_;
};

// Joint over all nodes including the selection node, by exact enumeration.
JointTable joint_distribution(const DiscreteSem& sem);

// The sub-population observational distribution P(V | S=1).
// DegenerateSelectionError when P(S=1) = 0.
JointTable selection_conditional(const DiscreteSem& sem);

// Truncated-factorization intervention: clamp the given variables, drop their
// factors. Returns the joint over the remaining nodes (selection included).
JointTable interventional_distribution(const DiscreteSem& sem,
                                       const std::map<std::string, int>& x);

// Ground truth P_x(Y | S=1) for every treatment assignment, the quantity the
// estimands must reproduce. DegenerateSelectionError when some intervention
// drives P(S=1) to zero (the offending x is named).
ConditionalTable ground_truth_effect(const DiscreteSem& sem, const Query& q);

// CPT rows drawn from a symmetric Dirichlet; strictly positive entries for
// any positive concentration. cards[selection] must be 2.
DiscreteSem random_sem(const AugmentedDag& g, uint64_t seed,
                       const std::vector<int>& cards, double concentration);

// Rows over the observed variables V (selection excluded), i.e. a dataset
// someone could have collected inside the sub-population.
struct Dataset {
  std::vector<std::string> variables;
  std::vector<std::vector<int>> rows;
};

// n accepted draws (ancestral sampling, rejecting S=0 rows). Aborts with
// DegenerateSelectionError when P(S=1) < 1e-6.
Dataset sample_subpopulation(const DiscreteSem& sem, long long n, uint64_t seed);

// Erdos-Renyi style DAG over a random topological order plus a childless
// selection node named S with a non-empty random parent set. Observed nodes
// are named V0, V1, ...
AugmentedDag random_augmented_dag(int n_observed, double edge_prob, Rng& rng);

}  // namespace subid
