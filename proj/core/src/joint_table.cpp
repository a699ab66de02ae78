#include "subid/joint_table.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "subid/errors.hpp"

namespace subid {

namespace {

constexpr double kMassTolerance = 1e-12;

long long checked_cell_count(const std::vector<int>& cards) {
  long long cells = 1;
  for (int c : cards) {
    if (c < 1) throw InputError("variable cardinality must be >= 1");
    if (cells > (1LL << 24) / c)
      throw InputError("joint table too large for dense enumeration");
    cells *= c;
  }
  return cells;
}

std::vector<long long> make_strides(const std::vector<int>& cards) {
  std::vector<long long> strides(cards.size());
  long long s = 1;
  for (int i = static_cast<int>(cards.size()) - 1; i >= 0; --i) {
    strides[i] = s;
    s *= cards[i];
  }
  return strides;
}

}  // namespace

JointTable::JointTable(std::vector<std::string> variables, std::vector<int> cards,
                       std::vector<double> values)
    : vars_(std::move(variables)), cards_(std::move(cards)), values_(std::move(values)) {
  if (vars_.size() != cards_.size())
    throw InputError("joint table: variable/cardinality count mismatch");
  for (size_t i = 0; i < vars_.size(); ++i)
    for (size_t j = i + 1; j < vars_.size(); ++j)
      if (vars_[i] == vars_[j])
        throw InputError("joint table: duplicate variable '" + vars_[i] + "'");
  long long cells = checked_cell_count(cards_);
  if (static_cast<long long>(values_.size()) != cells)
    throw InputError("joint table: wrong number of cells");
  strides_ = make_strides(cards_);
  double total = 0;
  for (double v : values_) {
    if (v < 0) throw InputError("joint table: negative entry");
    total += v;
  }
  if (std::abs(total - 1.0) > kMassTolerance)
    throw InputError("joint table: entries sum to " + std::to_string(total) +
                     ", not 1");
}

JointTable JointTable::uniform(std::vector<std::string> variables,
                               std::vector<int> cards) {
  long long cells = checked_cell_count(cards);
  std::vector<double> v(cells, 1.0 / static_cast<double>(cells));
  return JointTable(std::move(variables), std::move(cards), std::move(v));
}

int JointTable::position_of(const std::string& var) const {
  for (size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i] == var) return static_cast<int>(i);
  throw InputError("table has no variable '" + var + "'");
}

bool JointTable::has_variable(const std::string& var) const {
  for (const auto& v : vars_)
    if (v == var) return true;
  return false;
}

long long JointTable::offset(const std::vector<int>& full) const {
  if (full.size() != vars_.size())
    throw InputError("assignment length does not match table arity");
  long long off = 0;
  for (size_t i = 0; i < full.size(); ++i) {
    if (full[i] < 0 || full[i] >= cards_[i])
      throw InputError("value " + std::to_string(full[i]) + " out of range for '" +
                       vars_[i] + "'");
    off += full[i] * strides_[i];
  }
  return off;
}

JointTable JointTable::marginal(const std::vector<std::string>& keep) const {
  std::vector<int> pos;
  std::vector<int> out_cards;
  for (const auto& v : keep) {
    pos.push_back(position_of(v));
    out_cards.push_back(cards_[pos.back()]);
  }
  auto out_strides = make_strides(out_cards);
  std::vector<double> out(out_cards.empty() ? 1 : out_strides[0] * out_cards[0], 0.0);
  std::vector<int> full(vars_.size(), 0);
  for (long long cell = 0; cell < cell_count(); ++cell) {
    long long o = 0;
    for (size_t i = 0; i < pos.size(); ++i) o += full[pos[i]] * out_strides[i];
    out[o] += values_[cell];
    for (int i = static_cast<int>(full.size()) - 1; i >= 0; --i) {
      if (++full[i] < cards_[i]) break;
      full[i] = 0;
    }
  }
  return JointTable(keep, out_cards, std::move(out));
}

double JointTable::mass(const std::map<std::string, int>& event) const {
  std::vector<int> pos, val;
  for (const auto& [name, v] : event) {
    pos.push_back(position_of(name));
    val.push_back(v);
  }
  double total = 0;
  std::vector<int> full(vars_.size(), 0);
  for (long long cell = 0; cell < cell_count(); ++cell) {
    bool match = true;
    for (size_t i = 0; i < pos.size(); ++i)
      if (full[pos[i]] != val[i]) {
        match = false;
        break;
      }
    if (match) total += values_[cell];
    for (int i = static_cast<int>(full.size()) - 1; i >= 0; --i) {
      if (++full[i] < cards_[i]) break;
      full[i] = 0;
    }
  }
  return total;
}

JointTable JointTable::condition(const std::string& var, int value) const {
  int pos = position_of(var);
  if (value < 0 || value >= cards_[pos])
    throw InputError("conditioning value out of range for '" + var + "'");
  std::vector<std::string> out_vars;
  std::vector<int> out_cards;
  for (size_t i = 0; i < vars_.size(); ++i) {
    if (static_cast<int>(i) == pos) continue;
    out_vars.push_back(vars_[i]);
    out_cards.push_back(cards_[i]);
  }
  std::vector<double> out;
  out.reserve(cell_count() / cards_[pos]);
  std::vector<int> full(vars_.size(), 0);
  double total = 0;
  for (long long cell = 0; cell < cell_count(); ++cell) {
    if (full[pos] == value) {
      out.push_back(values_[cell]);
      total += values_[cell];
    }
    for (int i = static_cast<int>(full.size()) - 1; i >= 0; --i) {
      if (++full[i] < cards_[i]) break;
      full[i] = 0;
    }
  }
  if (total <= 0)
    throw EvalError("conditioning event " + var + "=" + std::to_string(value) +
                    " has probability 0");
  for (double& v : out) v /= total;
  return JointTable(std::move(out_vars), std::move(out_cards), std::move(out));
}

long long ConditionalTable::x_configs() const {
  long long n = 1;
  for (int c : x_cards) n *= c;
  return n;
}

long long ConditionalTable::y_configs() const {
  long long n = 1;
  for (int c : y_cards) n *= c;
  return n;
}

double ConditionalTable::at(const std::vector<int>& x, const std::vector<int>& y) const {
  long long off = 0;
  for (size_t i = 0; i < x_cards.size(); ++i) off = off * x_cards[i] + x[i];
  for (size_t i = 0; i < y_cards.size(); ++i) off = off * y_cards[i] + y[i];
  return values.at(off);
}

double max_abs_diff(const ConditionalTable& a, const ConditionalTable& b) {
  if (a.x_vars != b.x_vars || a.y_vars != b.y_vars || a.x_cards != b.x_cards ||
      a.y_cards != b.y_cards || a.values.size() != b.values.size())
    throw std::logic_error("conditional tables have different shapes");
  double worst = 0;
  for (size_t i = 0; i < a.values.size(); ++i)
    worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
  return worst;
}

}  // namespace subid
