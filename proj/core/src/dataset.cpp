#include "subid/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>

#include "subid/errors.hpp"

namespace subid {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  size_t start = 0;
  for (;;) {
    size_t comma = line.find(',', start);
    std::string field = line.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    // Trim surrounding spaces and a possible trailing carriage return.
    size_t a = field.find_first_not_of(" \t\r");
    size_t b = field.find_last_not_of(" \t\r");
    out.push_back(a == std::string::npos ? "" : field.substr(a, b - a + 1));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

void write_csv(const Dataset& d, std::ostream& out) {
  for (size_t i = 0; i < d.variables.size(); ++i) {
    if (i) out << ',';
    out << d.variables[i];
  }
  out << '\n';
  for (const auto& row : d.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << row[i];
    }
    out << '\n';
  }
}

Dataset read_csv(std::istream& in) {
  Dataset d;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    if (d.variables.empty()) {
      d.variables = split_csv_line(line);
      for (const auto& v : d.variables)
        if (v.empty())
          throw InputError("csv line " + std::to_string(line_no) +
                           ": empty column name");
      continue;
    }
    auto fields = split_csv_line(line);
    if (fields.size() != d.variables.size())
      throw InputError("csv line " + std::to_string(line_no) + ": expected " +
                       std::to_string(d.variables.size()) + " fields, got " +
                       std::to_string(fields.size()));
    std::vector<int> row;
    row.reserve(fields.size());
    for (const auto& f : fields) {
      int value = 0;
      auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
      if (ec != std::errc() || p != f.data() + f.size() || value < 0)
        throw InputError("csv line " + std::to_string(line_no) +
                         ": '" + f + "' is not a non-negative integer");
      row.push_back(value);
    }
    d.rows.push_back(std::move(row));
  }
  if (d.variables.empty()) throw InputError("csv input is empty");
  return d;
}

JointTable empirical_joint(const Dataset& d, const std::vector<int>& cards_in) {
  if (d.rows.empty()) throw InputError("dataset has no rows");
  size_t k = d.variables.size();
  std::vector<int> cards = cards_in;
  if (cards.empty()) {
    cards.assign(k, 2);
    for (const auto& row : d.rows)
      for (size_t i = 0; i < k; ++i) cards[i] = std::max(cards[i], row[i] + 1);
  } else if (cards.size() != k) {
    throw InputError("cardinality list does not match the dataset columns");
  }

  long long cells = 1;
  for (int c : cards) {
    if (c < 1) throw InputError("cardinalities must be positive");
    if (cells > (1LL << 24) / c) throw InputError("dataset joint too large");
    cells *= c;
  }
  std::vector<double> counts(cells, 0.0);
  for (const auto& row : d.rows) {
    long long off = 0;
    for (size_t i = 0; i < k; ++i) {
      if (row[i] >= cards[i])
        throw InputError("value " + std::to_string(row[i]) +
                         " out of range for column '" + d.variables[i] + "'");
      off = off * cards[i] + row[i];
    }
    counts[off] += 1.0;
  }
  double n = static_cast<double>(d.rows.size());
  for (double& c : counts) c /= n;
  return JointTable(d.variables, cards, std::move(counts));
}

}  // namespace subid
