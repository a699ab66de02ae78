#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "subid/errors.hpp"
#include "subid/joint_table.hpp"

namespace subid {

namespace {

// Marginal of the joint over a variable subset, addressable from an assignment
// vector over the *full* table (env), so factor lookups are O(#positions).
struct CachedMarginal {
  std::vector<int> positions;   // ascending positions into the full table
  std::vector<long long> strides;
  std::vector<double> values;

  double at(const std::vector<int>& env) const {
    long long off = 0;
    for (size_t i = 0; i < positions.size(); ++i)
      off += env[positions[i]] * strides[i];
    return values[off];
  }
};

class Evaluator {
 public:
  Evaluator(const EstimandPtr& e, const JointTable& table) : table_(table) {
    validate(e);
    root_ = e;
  }

  // env holds one value per table variable, -1 for unset.
  double run(const EstimandPtr& e, std::vector<int>& env) {
    switch (e->kind()) {
      case Estimand::Kind::kProb: {
        const CachedMarginal& joint = marginal_over(vars_union(e->targets(), e->givens()));
        double num = joint.at(env);
        if (e->givens().empty()) return num;
        const CachedMarginal& cond = marginal_over(e->givens());
        double den = cond.at(env);
        if (den <= 0)
          throw EvalError("conditioning event of " + render(e, RenderFormat::kText) +
                          " has probability 0 at " + describe(env, e->givens()));
        return num / den;
      }
      case Estimand::Kind::kProduct: {
        double out = 1;
        for (const auto& f : e->factors()) out *= run(f, env);
        return out;
      }
      case Estimand::Kind::kRatio: {
        double den = run(e->denominator(), env);
        if (den == 0)
          throw EvalError("denominator " +
                          render(e->denominator(), RenderFormat::kText) +
                          " evaluates to 0");
        return run(e->numerator(), env) / den;
      }
      case Estimand::Kind::kSum: {
        std::vector<int> pos;
        std::vector<int> saved;
        for (const auto& v : e->bound()) {
          int p = table_.position_of(v);
          pos.push_back(p);
          saved.push_back(env[p]);
          env[p] = 0;
        }
        double total = 0;
        for (;;) {
          total += run(e->body(), env);
          int i = static_cast<int>(pos.size()) - 1;
          for (; i >= 0; --i) {
            if (++env[pos[i]] < table_.cards()[pos[i]]) break;
            env[pos[i]] = 0;
          }
          if (i < 0) break;
        }
        for (size_t i = 0; i < pos.size(); ++i) env[pos[i]] = saved[i];
        return total;
      }
    }
    return 0;
  }

  const EstimandPtr& root() const { return root_; }

 private:
  std::vector<std::string> vars_union(const std::vector<std::string>& a,
                                      const std::vector<std::string>& b) {
    std::vector<std::string> out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
  }

  const CachedMarginal& marginal_over(const std::vector<std::string>& vars) {
    std::vector<int> pos;
    for (const auto& v : vars) pos.push_back(table_.position_of(v));
    std::sort(pos.begin(), pos.end());
    auto it = cache_.find(pos);
    if (it != cache_.end()) return it->second;

    std::vector<std::string> names;
    for (int p : pos) names.push_back(table_.variables()[p]);
    JointTable m = table_.marginal(names);
    CachedMarginal cm;
    cm.positions = pos;
    cm.strides.resize(pos.size());
    long long s = 1;
    for (int i = static_cast<int>(pos.size()) - 1; i >= 0; --i) {
      cm.strides[i] = s;
      s *= table_.cards()[pos[i]];
    }
    cm.values = m.values();
    return cache_.emplace(std::move(pos), std::move(cm)).first->second;
  }

  std::string describe(const std::vector<int>& env,
                       const std::vector<std::string>& vars) const {
    std::string out;
    for (size_t i = 0; i < vars.size(); ++i) {
      if (i) out += ",";
      out += vars[i] + "=" + std::to_string(env[table_.position_of(vars[i])]);
    }
    return out;
  }

  const JointTable& table_;
  EstimandPtr root_;
  std::map<std::vector<int>, CachedMarginal> cache_;
};

// Builds the starting environment and checks the assignment against the
// estimand's free and bound variable sets.
std::vector<int> make_env(const EstimandPtr& e, const JointTable& table,
                          const std::map<std::string, int>& assignment) {
  auto free = free_variables(e);
  auto bound = bound_variables(e);
  for (const auto& v : free)
    if (!table.has_variable(v))
      throw InputError("table lacks variable '" + v + "' used by the estimand");
  std::vector<int> env(table.variables().size(), -1);
  for (const auto& [name, value] : assignment) {
    if (bound.count(name) && !free.count(name))
      throw InputError("assignment sets '" + name +
                       "', which the estimand sums over");
    if (!table.has_variable(name))
      throw InputError("assignment names unknown variable '" + name + "'");
    int p = table.position_of(name);
    if (value < 0 || value >= table.cards()[p])
      throw InputError("value " + std::to_string(value) + " out of range for '" +
                       name + "'");
    env[p] = value;
  }
  for (const auto& v : free)
    if (env[table.position_of(v)] < 0)
      throw InputError("assignment misses free variable '" + v + "'");
  return env;
}

}  // namespace

double evaluate(const EstimandPtr& e, const JointTable& table,
                const std::map<std::string, int>& assignment) {
  Evaluator ev(e, table);
  std::vector<int> env = make_env(e, table, assignment);
  return ev.run(e, env);
}

ConditionalTable evaluate_table(const EstimandPtr& e, const JointTable& table,
                                const std::vector<std::string>& x_vars,
                                const std::vector<std::string>& y_vars) {
  for (const auto& x : x_vars)
    for (const auto& y : y_vars)
      if (x == y) throw InputError("variable '" + x + "' in both x and y");
  auto free = free_variables(e);
  auto bound = bound_variables(e);
  for (const auto& v : free) {
    bool covered = std::find(x_vars.begin(), x_vars.end(), v) != x_vars.end() ||
                   std::find(y_vars.begin(), y_vars.end(), v) != y_vars.end();
    if (!covered)
      throw InputError("free variable '" + v + "' not among the query variables");
  }
  for (const auto& lists : {&x_vars, &y_vars})
    for (const auto& v : *lists)
      if (bound.count(v) && !free.count(v))
        throw InputError("query variable '" + v + "' is summed over by the estimand");

  Evaluator ev(e, table);
  ConditionalTable out;
  out.x_vars = x_vars;
  out.y_vars = y_vars;
  for (const auto& v : x_vars) out.x_cards.push_back(table.card_of(v));
  for (const auto& v : y_vars) out.y_cards.push_back(table.card_of(v));

  std::vector<std::string> all = x_vars;
  all.insert(all.end(), y_vars.begin(), y_vars.end());
  std::vector<int> cards;
  for (const auto& v : all) cards.push_back(table.card_of(v));

  std::vector<int> current(all.size(), 0);
  long long cells = out.x_configs() * out.y_configs();
  out.values.reserve(cells);
  std::vector<int> positions;
  for (const auto& v : all) positions.push_back(table.position_of(v));
  for (long long i = 0; i < cells; ++i) {
    std::vector<int> env(table.variables().size(), -1);
    for (size_t j = 0; j < all.size(); ++j) env[positions[j]] = current[j];
    out.values.push_back(ev.run(e, env));
    for (int j = static_cast<int>(all.size()) - 1; j >= 0; --j) {
      if (++current[j] < cards[j]) break;
      current[j] = 0;
    }
  }
  return out;
}

}  // namespace subid
