#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

namespace subid {

class Estimand;
using EstimandPtr = std::shared_ptr<const Estimand>;

// Symbolic formula over sub-population probability factors. Every Prob node
// is implicitly conditioned on membership in the sub-population (the P^s
// superscript in renders), so S never appears as a variable.
//
// Variables are stored by name; generators fix the orderings (givens by node
// index, summation variables topologically), and renders preserve them.
class Estimand {
 public:
  enum class Kind { kProb, kProduct, kRatio, kSum };

  static EstimandPtr prob(std::vector<std::string> targets,
                          std::vector<std::string> givens = {});
  // Singleton products collapse to their factor; an empty product is the
  // constant 1 (rendered as `1`).
  static EstimandPtr product(std::vector<EstimandPtr> factors);
  static EstimandPtr ratio(EstimandPtr num, EstimandPtr den);
  // Empty bound list collapses to the body.
  static EstimandPtr sum_over(std::vector<std::string> bound, EstimandPtr body);

  Kind kind() const { return kind_; }
  const std::vector<std::string>& targets() const { return targets_; }
  const std::vector<std::string>& givens() const { return givens_; }
  const std::vector<EstimandPtr>& factors() const { return parts_; }
  const EstimandPtr& numerator() const { return parts_[0]; }
  const EstimandPtr& denominator() const { return parts_[1]; }
  const std::vector<std::string>& bound() const { return bound_; }
  const EstimandPtr& body() const { return parts_[0]; }

 private:
  Estimand(Kind k) : kind_(k) {}
  Kind kind_;
  std::vector<std::string> targets_, givens_;  // kProb
  std::vector<std::string> bound_;             // kSum
  std::vector<EstimandPtr> parts_;             // factors / {num,den} / {body}
};

// Structural well-formedness: Prob targets non-empty and disjoint from givens,
// no duplicate names in a list, no variable bound twice along a root-to-leaf
// path. Throws InputError on violation.
void validate(const EstimandPtr& e);

// Variables appearing in some Prob and not bound by an enclosing SumOver.
std::set<std::string> free_variables(const EstimandPtr& e);
// Variables bound by any SumOver in the tree.
std::set<std::string> bound_variables(const EstimandPtr& e);

enum class RenderFormat { kText, kLatex, kJson };

std::string render(const EstimandPtr& e, RenderFormat format);

// Inverse of render(e, kJson). Throws InputError on malformed input.
EstimandPtr parse_estimand_json(const std::string& json_text);

// Exact tree equality, list orders included.
bool structurally_equal(const EstimandPtr& a, const EstimandPtr& b);

// Equality after rewriting Ratio(P(t∪g), P(g)) as P(t|g), flattening nested
// products, and treating variable lists and factor order as unordered.
bool structurally_equal_mod_conditioning(const EstimandPtr& a, const EstimandPtr& b);

}  // namespace subid
