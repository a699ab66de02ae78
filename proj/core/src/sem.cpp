#include "subid/sem.hpp"

#include <algorithm>
#include <cmath>

#include "subid/errors.hpp"

namespace subid {

namespace {

constexpr double kRowTolerance = 1e-9;
constexpr double kMinAcceptance = 1e-6;

std::string assignment_string(const std::map<std::string, int>& x) {
  std::string out;
  for (const auto& [name, value] : x) {
    if (!out.empty()) out += ",";
    out += name + "=" + std::to_string(value);
  }
  return out;
}

// Iterates full assignments over `cards` in row-major order (last index
// fastest). Returns false once the odometer wraps.
bool advance(std::vector<int>& full, const std::vector<int>& cards) {
  for (int i = static_cast<int>(full.size()) - 1; i >= 0; --i) {
    if (++full[i] < cards[i]) return true;
    full[i] = 0;
  }
  return false;
}

}  // namespace

DiscreteSem::DiscreteSem(AugmentedDag graph, std::vector<int> cards,
                         std::vector<std::vector<double>> cpts)
    : graph_(std::move(graph)), cards_(std::move(cards)), cpts_(std::move(cpts)) {
  const Dag& g = graph_.graph();
  int n = g.node_count();
  if (static_cast<int>(cards_.size()) != n || static_cast<int>(cpts_.size()) != n)
    throw InputError("sem: need one cardinality and one CPT per node");
  for (int c : cards_)
    if (c < 2) throw InputError("sem: cardinalities must be at least 2");
  if (cards_[graph_.selection()] != 2)
    throw InputError("sem: the selection node must be binary");
  for (NodeId v = 0; v < n; ++v) {
    long long rows = parent_configs(v);
    if (static_cast<long long>(cpts_[v].size()) != rows * cards_[v])
      throw InputError("sem: CPT for '" + g.name(v) + "' has the wrong size");
    for (long long r = 0; r < rows; ++r) {
      double total = 0;
      for (int k = 0; k < cards_[v]; ++k) {
        double p = cpts_[v][r * cards_[v] + k];
        if (p < 0) throw InputError("sem: negative probability in CPT of '" +
                                    g.name(v) + "'");
        total += p;
      }
      if (std::abs(total - 1.0) > kRowTolerance)
        throw InputError("sem: CPT row " + std::to_string(r) + " of '" + g.name(v) +
                         "' sums to " + std::to_string(total));
    }
  }
}

long long DiscreteSem::parent_configs(NodeId v) const {
  long long rows = 1;
  for (NodeId p : graph_.graph().parents(v)) rows *= cards_[p];
  return rows;
}

long long DiscreteSem::row_of(NodeId v, const std::vector<int>& full) const {
  long long row = 0;
  for (NodeId p : graph_.graph().parents(v)) row = row * cards_[p] + full[p];
  return row;
}

double DiscreteSem::cpt_value(NodeId v, const std::vector<int>& full) const {
  return cpts_[v][row_of(v, full) * cards_[v] + full[v]];
}

JointTable joint_distribution(const DiscreteSem& sem) {
  const Dag& g = sem.graph().graph();
  int n = g.node_count();
  std::vector<std::string> names;
  for (NodeId v = 0; v < n; ++v) names.push_back(g.name(v));

  long long cells = 1;
  for (int c : sem.cards()) {
    if (cells > (1LL << 24) / c)
      throw InputError("sem: joint too large for dense enumeration");
    cells *= c;
  }
  std::vector<double> values;
  values.reserve(cells);
  std::vector<int> full(n, 0);
  do {
    double p = 1;
    for (NodeId v = 0; v < n; ++v) p *= sem.cpt_value(v, full);
    values.push_back(p);
  } while (advance(full, sem.cards()));
  return JointTable(std::move(names), sem.cards(), std::move(values));
}

JointTable selection_conditional(const DiscreteSem& sem) {
  JointTable joint = joint_distribution(sem);
  const std::string& s = sem.graph().graph().name(sem.graph().selection());
  if (joint.mass({{s, 1}}) <= 0)
    throw DegenerateSelectionError(
        "the sub-population has probability 0; conditioning on it is undefined");
  return joint.condition(s, 1);
}

JointTable interventional_distribution(const DiscreteSem& sem,
                                       const std::map<std::string, int>& x) {
  const Dag& g = sem.graph().graph();
  int n = g.node_count();
  std::vector<int> clamp(n, -1);
  for (const auto& [name, value] : x) {
    NodeId v = g.require(name);
    if (v == sem.graph().selection())
      throw InputError("cannot intervene on the selection node");
    if (value < 0 || value >= sem.card(v))
      throw InputError("intervention value out of range for '" + name + "'");
    clamp[v] = value;
  }

  std::vector<std::string> names;
  std::vector<int> out_cards;
  std::vector<NodeId> kept;
  for (NodeId v = 0; v < n; ++v) {
    if (clamp[v] >= 0) continue;
    names.push_back(g.name(v));
    out_cards.push_back(sem.card(v));
    kept.push_back(v);
  }

  long long cells = 1;
  for (int c : out_cards) cells *= c;
  std::vector<double> values;
  values.reserve(cells);
  std::vector<int> partial(kept.size(), 0);
  std::vector<int> full(n, 0);
  for (NodeId v = 0; v < n; ++v)
    if (clamp[v] >= 0) full[v] = clamp[v];
  do {
    for (size_t i = 0; i < kept.size(); ++i) full[kept[i]] = partial[i];
    double p = 1;
    for (NodeId v : kept) p *= sem.cpt_value(v, full);
    values.push_back(p);
  } while (advance(partial, out_cards));
  return JointTable(std::move(names), std::move(out_cards), std::move(values));
}

ConditionalTable ground_truth_effect(const DiscreteSem& sem, const Query& q) {
  check_query(sem.graph(), q);
  const Dag& g = sem.graph().graph();
  const std::string& s_name = g.name(sem.graph().selection());

  ConditionalTable out;
  for (NodeId v : q.treatment.to_vector()) {
    out.x_vars.push_back(g.name(v));
    out.x_cards.push_back(sem.card(v));
  }
  for (NodeId v : q.outcome.to_vector()) {
    out.y_vars.push_back(g.name(v));
    out.y_cards.push_back(sem.card(v));
  }

  std::vector<int> xval(out.x_vars.size(), 0);
  do {
    std::map<std::string, int> x;
    for (size_t i = 0; i < out.x_vars.size(); ++i) x[out.x_vars[i]] = xval[i];
    JointTable post = interventional_distribution(sem, x);

    std::map<std::string, int> sel{{s_name, 1}};
    double denom = post.mass(sel);
    if (denom <= 0)
      throw DegenerateSelectionError("intervention " + assignment_string(x) +
                                     " drives P(S=1) to 0");
    std::vector<int> yval(out.y_vars.size(), 0);
    do {
      std::map<std::string, int> event = sel;
      for (size_t i = 0; i < out.y_vars.size(); ++i) event[out.y_vars[i]] = yval[i];
      out.values.push_back(post.mass(event) / denom);
    } while (advance(yval, out.y_cards));
  } while (advance(xval, out.x_cards));
  return out;
}

DiscreteSem random_sem(const AugmentedDag& g, uint64_t seed,
                       const std::vector<int>& cards, double concentration) {
  const Dag& dag = g.graph();
  int n = dag.node_count();
  if (static_cast<int>(cards.size()) != n)
    throw InputError("random_sem: need one cardinality per node");
  Rng rng(seed);
  std::vector<std::vector<double>> cpts(n);
  for (NodeId v = 0; v < n; ++v) {
    long long rows = 1;
    for (NodeId p : dag.parents(v)) rows *= cards[p];
    cpts[v].reserve(rows * cards[v]);
    for (long long r = 0; r < rows; ++r) {
      auto row = rng.dirichlet(cards[v], concentration);
      cpts[v].insert(cpts[v].end(), row.begin(), row.end());
    }
  }
  return DiscreteSem(g, cards, std::move(cpts));
}

Dataset sample_subpopulation(const DiscreteSem& sem, long long n, uint64_t seed) {
  const Dag& g = sem.graph().graph();
  NodeId s = sem.graph().selection();

  JointTable joint = joint_distribution(sem);
  double acceptance = joint.mass({{g.name(s), 1}});
  if (acceptance < kMinAcceptance)
    throw DegenerateSelectionError(
        "P(S=1) = " + std::to_string(acceptance) +
        "; rejection sampling the sub-population would be hopeless");

  Dataset out;
  std::vector<NodeId> observed;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (v == s) continue;
    observed.push_back(v);
    out.variables.push_back(g.name(v));
  }

  Rng rng(seed);
  const auto& order = g.topo_order();
  std::vector<int> full(g.node_count(), 0);
  out.rows.reserve(n);
  while (static_cast<long long>(out.rows.size()) < n) {
    for (NodeId v : order) {
      long long row = sem.row_of(v, full);
      const double* p = &sem.cpt(v)[row * sem.card(v)];
      double u = rng.uniform();
      int k = 0;
      for (; k + 1 < sem.card(v); ++k) {
        u -= p[k];
        if (u < 0) break;
      }
      full[v] = k;
    }
    if (full[s] != 1) continue;
    std::vector<int> row;
    row.reserve(observed.size());
    for (NodeId v : observed) row.push_back(full[v]);
    out.rows.push_back(std::move(row));
  }
  return out;
}

AugmentedDag random_augmented_dag(int n_observed, double edge_prob, Rng& rng) {
  if (n_observed < 1)
    throw InputError("random_augmented_dag: need at least one observed node");
  Dag::Builder b;
  for (int i = 0; i < n_observed; ++i) b.add_node("V" + std::to_string(i));
  NodeId s = b.add_node("S");

  // Random topological order over the observed nodes; edges only point
  // forward along it.
  std::vector<NodeId> order(n_observed);
  for (int i = 0; i < n_observed; ++i) order[i] = i;
  for (int i = n_observed - 1; i > 0; --i)
    std::swap(order[i], order[rng.uniform_int(i + 1)]);

  for (int i = 0; i < n_observed; ++i)
    for (int j = i + 1; j < n_observed; ++j)
      if (rng.uniform() < edge_prob) b.add_edge(order[i], order[j]);

  std::vector<NodeId> s_parents;
  for (int i = 0; i < n_observed; ++i)
    if (rng.uniform() < 0.5) s_parents.push_back(i);
  if (s_parents.empty()) s_parents.push_back(rng.uniform_int(n_observed));
  for (NodeId p : s_parents) b.add_edge(p, s);

  return AugmentedDag(b.build(), s);
}

}  // namespace subid
