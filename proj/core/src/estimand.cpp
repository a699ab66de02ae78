#include "subid/estimand.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>

#include "subid/errors.hpp"

namespace subid {

namespace {

void check_name_list(const std::vector<std::string>& names, const char* what) {
  for (size_t i = 0; i < names.size(); ++i) {
    if (names[i].empty()) throw InputError(std::string(what) + ": empty variable name");
    for (size_t j = i + 1; j < names.size(); ++j)
      if (names[i] == names[j])
        throw InputError(std::string(what) + ": duplicate variable '" + names[i] + "'");
  }
}

}  // namespace

EstimandPtr Estimand::prob(std::vector<std::string> targets,
                           std::vector<std::string> givens) {
  check_name_list(targets, "prob targets");
  check_name_list(givens, "prob givens");
  if (targets.empty()) throw InputError("prob: empty target set");
  for (const auto& t : targets)
    for (const auto& g : givens)
      if (t == g) throw InputError("prob: variable '" + t + "' both target and given");
  auto e = std::shared_ptr<Estimand>(new Estimand(Kind::kProb));
  e->targets_ = std::move(targets);
  e->givens_ = std::move(givens);
  return e;
}

EstimandPtr Estimand::product(std::vector<EstimandPtr> factors) {
  for (const auto& f : factors)
    if (!f) throw InputError("product: null factor");
  if (factors.size() == 1) return factors[0];
  auto e = std::shared_ptr<Estimand>(new Estimand(Kind::kProduct));
  e->parts_ = std::move(factors);
  return e;
}

EstimandPtr Estimand::ratio(EstimandPtr num, EstimandPtr den) {
  if (!num || !den) throw InputError("ratio: null operand");
  auto e = std::shared_ptr<Estimand>(new Estimand(Kind::kRatio));
  e->parts_ = {std::move(num), std::move(den)};
  return e;
}

EstimandPtr Estimand::sum_over(std::vector<std::string> bound, EstimandPtr body) {
  if (!body) throw InputError("sum: null body");
  check_name_list(bound, "sum bound variables");
  if (bound.empty()) return body;
  auto e = std::shared_ptr<Estimand>(new Estimand(Kind::kSum));
  e->bound_ = std::move(bound);
  e->parts_ = {std::move(body)};
  return e;
}

namespace {

void validate_rec(const EstimandPtr& e, std::set<std::string>& bound_above) {
  switch (e->kind()) {
    case Estimand::Kind::kProb:
      return;  // the factories enforce the Prob invariants
    case Estimand::Kind::kProduct:
      for (const auto& f : e->factors()) validate_rec(f, bound_above);
      return;
    case Estimand::Kind::kRatio:
      validate_rec(e->numerator(), bound_above);
      validate_rec(e->denominator(), bound_above);
      return;
    case Estimand::Kind::kSum: {
      for (const auto& v : e->bound())
        if (bound_above.count(v))
          throw InputError("variable '" + v + "' bound by two nested sums");
      for (const auto& v : e->bound()) bound_above.insert(v);
      validate_rec(e->body(), bound_above);
      for (const auto& v : e->bound()) bound_above.erase(v);
      return;
    }
  }
}

void collect_vars(const EstimandPtr& e, std::set<std::string>& bound_here,
                  std::set<std::string>& free, std::set<std::string>& bound) {
  switch (e->kind()) {
    case Estimand::Kind::kProb:
      for (const auto& v : e->targets())
        if (!bound_here.count(v)) free.insert(v);
      for (const auto& v : e->givens())
        if (!bound_here.count(v)) free.insert(v);
      return;
    case Estimand::Kind::kProduct:
      for (const auto& f : e->factors()) collect_vars(f, bound_here, free, bound);
      return;
    case Estimand::Kind::kRatio:
      collect_vars(e->numerator(), bound_here, free, bound);
      collect_vars(e->denominator(), bound_here, free, bound);
      return;
    case Estimand::Kind::kSum: {
      std::vector<std::string> added;
      for (const auto& v : e->bound()) {
        bound.insert(v);
        if (bound_here.insert(v).second) added.push_back(v);
      }
      collect_vars(e->body(), bound_here, free, bound);
      for (const auto& v : added) bound_here.erase(v);
      return;
    }
  }
}

}  // namespace

void validate(const EstimandPtr& e) {
  if (!e) throw InputError("null estimand");
  std::set<std::string> bound_above;
  validate_rec(e, bound_above);
}

std::set<std::string> free_variables(const EstimandPtr& e) {
  std::set<std::string> here, free, bound;
  collect_vars(e, here, free, bound);
  return free;
}

std::set<std::string> bound_variables(const EstimandPtr& e) {
  std::set<std::string> here, free, bound;
  collect_vars(e, here, free, bound);
  return bound;
}

namespace {

std::string join(const std::vector<std::string>& names, const char* sep) {
  std::string out;
  for (size_t i = 0; i < names.size(); ++i) {
    if (i) out += sep;
    out += names[i];
  }
  return out;
}

std::string render_text(const EstimandPtr& e, bool latex) {
  switch (e->kind()) {
    case Estimand::Kind::kProb: {
      std::string out = latex ? "P^{s}(" : "P^s(";
      out += join(e->targets(), ",");
      if (!e->givens().empty()) {
        out += latex ? " \\mid " : "|";
        out += join(e->givens(), ",");
      }
      out += ")";
      return out;
    }
    case Estimand::Kind::kProduct: {
      if (e->factors().empty()) return "1";
      std::string out;
      for (size_t i = 0; i < e->factors().size(); ++i) {
        const auto& f = e->factors()[i];
        if (i) out += " ";
        bool parens = f->kind() == Estimand::Kind::kSum;
        if (parens) out += latex ? "\\left(" : "(";
        out += render_text(f, latex);
        if (parens) out += latex ? "\\right)" : ")";
      }
      return out;
    }
    case Estimand::Kind::kRatio: {
      if (latex)
        return "\\frac{" + render_text(e->numerator(), true) + "}{" +
               render_text(e->denominator(), true) + "}";
      auto wrap = [](const EstimandPtr& part) {
        std::string s = render_text(part, false);
        if (part->kind() == Estimand::Kind::kProb) return s;
        return "(" + s + ")";
      };
      return wrap(e->numerator()) + "/" + wrap(e->denominator());
    }
    case Estimand::Kind::kSum:
      return (latex ? "\\sum_{" : "sum_{") + join(e->bound(), ",") + "} " +
             render_text(e->body(), latex);
  }
  return {};
}

nlohmann::json to_json_tree(const EstimandPtr& e) {
  nlohmann::json j;
  switch (e->kind()) {
    case Estimand::Kind::kProb:
      j["kind"] = "prob";
      j["targets"] = e->targets();
      j["givens"] = e->givens();
      break;
    case Estimand::Kind::kProduct: {
      j["kind"] = "prod";
      auto arr = nlohmann::json::array();
      for (const auto& f : e->factors()) arr.push_back(to_json_tree(f));
      j["factors"] = std::move(arr);
      break;
    }
    case Estimand::Kind::kRatio:
      j["kind"] = "ratio";
      j["num"] = to_json_tree(e->numerator());
      j["den"] = to_json_tree(e->denominator());
      break;
    case Estimand::Kind::kSum:
      j["kind"] = "sum";
      j["over"] = e->bound();
      j["body"] = to_json_tree(e->body());
      break;
  }
  return j;
}

std::vector<std::string> string_list(const nlohmann::json& j, const char* field) {
  if (!j.is_array()) throw InputError(std::string("estimand json: '") + field +
                                      "' must be an array of strings");
  std::vector<std::string> out;
  for (const auto& item : j) {
    if (!item.is_string())
      throw InputError(std::string("estimand json: '") + field +
                       "' must contain only strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

EstimandPtr from_json_tree(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw InputError("estimand json: every node needs a string 'kind'");
  std::string kind = j["kind"].get<std::string>();
  if (kind == "prob") {
    if (!j.contains("targets"))
      throw InputError("estimand json: prob node lacks 'targets'");
    std::vector<std::string> givens;
    if (j.contains("givens")) givens = string_list(j["givens"], "givens");
    return Estimand::prob(string_list(j["targets"], "targets"), std::move(givens));
  }
  if (kind == "prod") {
    if (!j.contains("factors") || !j["factors"].is_array())
      throw InputError("estimand json: prod node needs a 'factors' array");
    std::vector<EstimandPtr> fs;
    for (const auto& f : j["factors"]) fs.push_back(from_json_tree(f));
    return Estimand::product(std::move(fs));
  }
  if (kind == "ratio") {
    if (!j.contains("num") || !j.contains("den"))
      throw InputError("estimand json: ratio node needs 'num' and 'den'");
    return Estimand::ratio(from_json_tree(j["num"]), from_json_tree(j["den"]));
  }
  if (kind == "sum") {
    if (!j.contains("over") || !j.contains("body"))
      throw InputError("estimand json: sum node needs 'over' and 'body'");
    return Estimand::sum_over(string_list(j["over"], "over"),
                              from_json_tree(j["body"]));
  }
  throw InputError("estimand json: unknown kind '" + kind + "'");
}

}  // namespace

std::string render(const EstimandPtr& e, RenderFormat format) {
  if (!e) throw InputError("null estimand");
  switch (format) {
    case RenderFormat::kText:
      return render_text(e, false);
    case RenderFormat::kLatex:
      return render_text(e, true);
    case RenderFormat::kJson:
      return to_json_tree(e).dump();
  }
  return {};
}

EstimandPtr parse_estimand_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& err) {
    throw InputError(std::string("estimand json: ") + err.what());
  }
  auto e = from_json_tree(j);
  validate(e);
  return e;
}

bool structurally_equal(const EstimandPtr& a, const EstimandPtr& b) {
  if (!a || !b) return a == b;
  if (a->kind() != b->kind()) return false;
  switch (a->kind()) {
    case Estimand::Kind::kProb:
      return a->targets() == b->targets() && a->givens() == b->givens();
    case Estimand::Kind::kProduct: {
      if (a->factors().size() != b->factors().size()) return false;
      for (size_t i = 0; i < a->factors().size(); ++i)
        if (!structurally_equal(a->factors()[i], b->factors()[i])) return false;
      return true;
    }
    case Estimand::Kind::kRatio:
      return structurally_equal(a->numerator(), b->numerator()) &&
             structurally_equal(a->denominator(), b->denominator());
    case Estimand::Kind::kSum:
      return a->bound() == b->bound() && structurally_equal(a->body(), b->body());
  }
  return false;
}

namespace {

std::vector<std::string> sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// Canonical form for the modulo-conditioning comparison: variable lists
// sorted, nested products flattened and factors sorted by their rendering,
// Ratio(P(t∪g), P(g)) rewritten as P(t|g).
EstimandPtr canonicalize(const EstimandPtr& e) {
  switch (e->kind()) {
    case Estimand::Kind::kProb:
      return Estimand::prob(sorted(e->targets()), sorted(e->givens()));
    case Estimand::Kind::kSum:
      return Estimand::sum_over(sorted(e->bound()), canonicalize(e->body()));
    case Estimand::Kind::kRatio: {
      auto num = canonicalize(e->numerator());
      auto den = canonicalize(e->denominator());
      if (num->kind() == Estimand::Kind::kProb &&
          den->kind() == Estimand::Kind::kProb && num->givens().empty() &&
          den->givens().empty()) {
        std::vector<std::string> rest;
        std::set<std::string> den_targets(den->targets().begin(),
                                          den->targets().end());
        for (const auto& t : num->targets())
          if (!den_targets.count(t)) rest.push_back(t);
        bool subset = num->targets().size() == rest.size() + den->targets().size();
        if (subset && !rest.empty())
          return Estimand::prob(std::move(rest), den->targets());
      }
      return Estimand::ratio(std::move(num), std::move(den));
    }
    case Estimand::Kind::kProduct: {
      std::vector<EstimandPtr> flat;
      for (const auto& f : e->factors()) {
        auto cf = canonicalize(f);
        if (cf->kind() == Estimand::Kind::kProduct)
          for (const auto& inner : cf->factors()) flat.push_back(inner);
        else
          flat.push_back(cf);
      }
      std::sort(flat.begin(), flat.end(), [](const EstimandPtr& a, const EstimandPtr& b) {
        return render(a, RenderFormat::kText) < render(b, RenderFormat::kText);
      });
      return Estimand::product(std::move(flat));
    }
  }
  return e;
}

}  // namespace

bool structurally_equal_mod_conditioning(const EstimandPtr& a, const EstimandPtr& b) {
  if (!a || !b) return a == b;
  return structurally_equal(canonicalize(a), canonicalize(b));
}

}  // namespace subid
