#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "subid/graph.hpp"

namespace subid {

// Parameters of the analytic chain family used to certify non-identifiability.
// k is the number of edges on the directed path from the outcome Y down to the
// selection node, m is the number of unit-variance noise terms accumulated
// between the treatment X and Y. Both must be >= 1.
struct ChainParams {
  int k = 1;
  int m = 1;
};

// A concrete chain instance: Z -> X, a mediator chain from {Z, X} into Y of
// total noise depth m, and a relay chain of k edges from Y to the selection
// node. The roles z, x, y index into graph().
struct ChainModel {
  AugmentedDag graph;
  NodeId z = -1;
  NodeId x = -1;
  NodeId y = -1;
  ChainParams params;
};

// Builds the treatment-ancestral chain graph for the given (k, m).
ChainModel build_type1_chain(const ChainParams& params);

// P(S = 1) when S is Bernoulli with kernel exp(-(r + b)^2 / 2) / sqrt(2 pi)
// and the score r is Gaussian with mean mu_y and variance sigma2:
//   exp(-(mu_y + b)^2 / (2 (sigma2 + 1))) / sqrt(2 pi (sigma2 + 1)).
// The sigma2 = 0 limit is the kernel itself evaluated at r = mu_y.
double gaussian_bernoulli_marginal(double mu_y, double sigma2, double b);

// log P_{X=0}(Y = y, S = 1) for the chain member with drift b in {+1, -1}:
//   log C - (y + k b)^2 / (2 k)
//     + logsumexp(-(y - m b)^2 / (2 m), -(y - 1 - m b)^2 / (2 m))
// with C = 1 / (4 pi sqrt(k m)). The two summands are the Z = 0 and Z = 1
// branches of the fair coin at the root.
double log_type1_joint_selection(double y, const ChainParams& params, double b);
double type1_joint_selection(double y, const ChainParams& params, double b);

// The mirrored families reduce to the first one: when X sits downstream of Y
// the outcome argument flips sign, and when X is not an ancestor of the
// selection node the relay path degenerates to k = 1.
double log_type2_joint_selection(double y, const ChainParams& params, double b);
double log_type2_no_ancestor_joint(double y, int m, double b);

// Log density of one observed assignment joint with S = 1 under the chain
// structural model with drift b. values holds one entry per node of
// model.graph in index order; the selection slot is ignored. Z must be 0 or 1.
double chain_log_density(const ChainModel& model, double b,
                         const std::vector<double>& values);

// The drift term of log density is linear in b with coefficient
// z (2 - #children(z)) + sum over other observed w of w (1 - #children(w)),
// so the two drift signs produce identical observed densities exactly when
// z has two children and every other observed node has one.
bool drift_cancellation_holds(const ChainModel& model);

// Deterministic grid of observed assignments for density comparisons: Z is a
// fair coin, every other observed value is uniform on [-4, 4], the selection
// slot stays 0.
std::vector<std::vector<double>> density_grid(const ChainModel& model,
                                              int points, std::uint64_t seed);

// Max |log density(b=+1) - log density(b=-1)| over the grid.
double observational_match_check(const ChainModel& model,
                                 const std::vector<std::vector<double>>& grid);

// Closed-form interventional ratio r = (1 + e^{-1-a}) / (1 + e^{1-a}) with
// a = 1 / (2 m), its mirror e^{-2} / r at y = 1, and their gap. The bound
// r > e^{-1} keeps the gap away from zero for every m >= 1.
struct RatioCertificate {
  double r = 0;
  double mirrored = 0;
  double gap = 0;
  bool exceeds_lower_bound = false;
};

RatioCertificate ratio_gap_certificate(int m);

// One certified counterexample pair: two structural models that agree on the
// observed sub-population density everywhere but disagree on the effect of
// do(X = 0), so no algorithm can identify the effect from sub-population data.
struct PairReport {
  ChainParams params;
  std::vector<std::string> node_names;
  std::vector<std::vector<double>> grid;
  double max_observational_gap = 0;
  double r0 = 0;
  double r1 = 0;
  double ratio_gap = 0;
  RatioCertificate closed_form;
  bool cancellation_ok = false;
  bool graph_not_s_id = false;
  bool certified = false;
};

PairReport falsification_report(int k, int m);

std::string pair_report_json(const PairReport& report);

}  // namespace subid
