#pragma once

#include <map>
#include <string>
#include <vector>

#include "subid/estimand.hpp"

namespace subid {

// Dense joint probability table over named discrete variables. Cells are
// indexed row-major with the first variable slowest. Entries must be
// non-negative and sum to 1 (within 1e-12 of it).
class JointTable {
 public:
  JointTable(std::vector<std::string> variables, std::vector<int> cards,
             std::vector<double> values);
  static JointTable uniform(std::vector<std::string> variables,
                            std::vector<int> cards);

  const std::vector<std::string>& variables() const { return vars_; }
  const std::vector<int>& cards() const { return cards_; }
  int card_of(const std::string& var) const { return cards_[position_of(var)]; }
  int position_of(const std::string& var) const;  // InputError if absent
  bool has_variable(const std::string& var) const;

  long long cell_count() const { return static_cast<long long>(values_.size()); }
  const std::vector<double>& values() const { return values_; }
  long long offset(const std::vector<int>& full_assignment) const;
  double at(const std::vector<int>& full_assignment) const {
    return values_[offset(full_assignment)];
  }

  // Marginal over the named variables, in the order given.
  JointTable marginal(const std::vector<std::string>& keep) const;
  // Probability of one event over a subset of variables.
  double mass(const std::map<std::string, int>& event) const;
  // Distribution of the remaining variables given var=value. EvalError when
  // the conditioning event has zero probability.
  JointTable condition(const std::string& var, int value) const;

 private:
  std::vector<std::string> vars_;
  std::vector<int> cards_;
  std::vector<long long> strides_;
  std::vector<double> values_;
};

// Effect table P_x(Y=y | S=1) (or any per-x distribution over y): one row per
// treatment assignment, row-major over x then y, each row a distribution.
struct ConditionalTable {
  std::vector<std::string> x_vars;
  std::vector<int> x_cards;
  std::vector<std::string> y_vars;
  std::vector<int> y_cards;
  std::vector<double> values;

  long long x_configs() const;
  long long y_configs() const;
  double at(const std::vector<int>& x, const std::vector<int>& y) const;
};

// Largest cellwise difference; shapes must match exactly (logic_error if not).
double max_abs_diff(const ConditionalTable& a, const ConditionalTable& b);

// Evaluates e at one assignment of its free variables. Throws InputError when
// the assignment misses a free variable or names a bound one; EvalError on a
// zero-probability conditioning event or zero denominator.
double evaluate(const EstimandPtr& e, const JointTable& table,
                const std::map<std::string, int>& assignment);

// Tabulates evaluate over every (x, y) assignment. free(e) must be covered by
// x_vars ∪ y_vars (extra query variables that dropped out of the formula are
// allowed and yield constant slices).
ConditionalTable evaluate_table(const EstimandPtr& e, const JointTable& table,
                                const std::vector<std::string>& x_vars,
                                const std::vector<std::string>& y_vars);

}  // namespace subid
