#include "subid/counterexamples.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "subid/errors.hpp"
#include "subid/identify.hpp"
#include "subid/rng.hpp"

namespace subid {
namespace {

constexpr double kLogTwoPi = 1.8378770664093454836;

// Certification thresholds: observed densities must agree to floating-point
// noise while the interventional ratios stay apart by a visible margin.
constexpr double kObservationalTolerance = 1e-12;
constexpr double kRatioGapThreshold = 1e-6;
constexpr double kClosedFormTolerance = 1e-9;
constexpr std::uint64_t kGridSeed = 12345;
constexpr int kGridPoints = 100;

void check_params(const ChainParams& params) {
  if (params.k < 1 || params.m < 1) {
    throw InputError("chain parameters must satisfy k >= 1 and m >= 1");
  }
}

double log_sum_exp(double a, double b) {
  double hi = std::max(a, b);
  double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

double log_normal_term(double value, double mean) {
  double d = value - mean;
  return -0.5 * d * d - 0.5 * kLogTwoPi;
}

}  // namespace

ChainModel build_type1_chain(const ChainParams& params) {
  check_params(params);
  Dag::Builder builder;
  builder.add_node("Z");
  builder.add_node("X");
  builder.add_edge("Z", "X");

  // Mediator leg: m noise terms between {Z, X} and Y inclusive of Y itself,
  // so m - 1 intermediate nodes sit on the way to Y.
  std::string head = "Y";
  if (params.m > 1) {
    head = "N";
    builder.add_node("N");
  }
  builder.add_edge("Z", head);
  builder.add_edge("X", head);
  for (int i = 1; i + 1 < params.m; ++i) {
    std::string next = "U" + std::to_string(i);
    builder.add_edge(head, next);
    head = next;
  }
  if (params.m > 1) {
    builder.add_edge(head, "Y");
  }

  // Relay leg: k edges from Y down to the selection node.
  head = "Y";
  for (int i = 1; i < params.k; ++i) {
    std::string next = "T" + std::to_string(i);
    builder.add_edge(head, next);
    head = next;
  }
  builder.add_edge(head, "S");

  ChainModel model{AugmentedDag::with_selection(builder.build(), "S"), -1, -1,
                   -1, params};
  const Dag& g = model.graph.graph();
  model.z = g.require("Z");
  model.x = g.require("X");
  model.y = g.require("Y");
  return model;
}

double gaussian_bernoulli_marginal(double mu_y, double sigma2, double b) {
  if (sigma2 < 0) {
    throw InputError("variance must be non-negative");
  }
  double v = sigma2 + 1.0;
  double d = mu_y + b;
  return std::exp(-d * d / (2.0 * v)) / std::sqrt(2.0 * std::numbers::pi * v);
}

double log_type1_joint_selection(double y, const ChainParams& params,
                                 double b) {
  check_params(params);
  double k = params.k;
  double m = params.m;
  double log_c =
      -std::log(4.0 * std::numbers::pi) - 0.5 * (std::log(k) + std::log(m));
  double relay = -(y + k * b) * (y + k * b) / (2.0 * k);
  double branch0 = -(y - m * b) * (y - m * b) / (2.0 * m);
  double branch1 = -(y - 1.0 - m * b) * (y - 1.0 - m * b) / (2.0 * m);
  return log_c + relay + log_sum_exp(branch0, branch1);
}

double type1_joint_selection(double y, const ChainParams& params, double b) {
  return std::exp(log_type1_joint_selection(y, params, b));
}

double log_type2_joint_selection(double y, const ChainParams& params,
                                 double b) {
  return log_type1_joint_selection(-y, params, b);
}

double log_type2_no_ancestor_joint(double y, int m, double b) {
  return log_type1_joint_selection(-y, ChainParams{1, m}, b);
}

double chain_log_density(const ChainModel& model, double b,
                         const std::vector<double>& values) {
  const Dag& g = model.graph.graph();
  if (static_cast<int>(values.size()) != g.node_count()) {
    throw InputError("expected one value per node, got " +
                     std::to_string(values.size()));
  }
  double z_value = values[static_cast<std::size_t>(model.z)];
  if (z_value != 0.0 && z_value != 1.0) {
    throw InputError("the root coin Z must be 0 or 1");
  }

  double log_p = std::log(0.5);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (v == model.z || v == model.graph.selection()) {
      continue;
    }
    double mean = b;
    for (NodeId p : g.parents(v)) {
      double sign = (p == model.z && v == model.x) ? -1.0 : 1.0;
      mean += sign * values[static_cast<std::size_t>(p)];
    }
    log_p += log_normal_term(values[static_cast<std::size_t>(v)], mean);
  }

  double selection_score = b;
  for (NodeId p : g.parents(model.graph.selection())) {
    selection_score += values[static_cast<std::size_t>(p)];
  }
  return log_p - 0.5 * selection_score * selection_score - 0.5 * kLogTwoPi;
}

bool drift_cancellation_holds(const ChainModel& model) {
  const Dag& g = model.graph.graph();
  if (g.children(model.z).size() != 2 ||
      !g.has_edge(model.z, model.x)) {
    return false;
  }
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (v == model.z || v == model.graph.selection()) {
      continue;
    }
    if (g.children(v).size() != 1) {
      return false;
    }
  }
  return g.children(model.graph.selection()).empty();
}

std::vector<std::vector<double>> density_grid(const ChainModel& model,
                                              int points, std::uint64_t seed) {
  if (points < 1) {
    throw InputError("grid needs at least one point");
  }
  const Dag& g = model.graph.graph();
  Rng rng(seed);
  std::vector<std::vector<double>> grid;
  grid.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    std::vector<double> row(static_cast<std::size_t>(g.node_count()), 0.0);
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (v == model.graph.selection()) {
        continue;
      }
      row[static_cast<std::size_t>(v)] =
          v == model.z ? (rng.bernoulli(0.5) ? 1.0 : 0.0)
                       : rng.uniform(-4.0, 4.0);
    }
    grid.push_back(std::move(row));
  }
  return grid;
}

double observational_match_check(const ChainModel& model,
                                 const std::vector<std::vector<double>>& grid) {
  double worst = 0.0;
  for (const auto& row : grid) {
    double gap = std::abs(chain_log_density(model, 1.0, row) -
                          chain_log_density(model, -1.0, row));
    worst = std::max(worst, gap);
  }
  return worst;
}

RatioCertificate ratio_gap_certificate(int m) {
  if (m < 1) {
    throw InputError("m must be >= 1");
  }
  double a = 0.5 / static_cast<double>(m);
  RatioCertificate cert;
  cert.r = (1.0 + std::exp(-1.0 - a)) / (1.0 + std::exp(1.0 - a));
  cert.mirrored = std::exp(-2.0) / cert.r;
  cert.gap = std::abs(cert.r - cert.mirrored);
  cert.exceeds_lower_bound = cert.r > std::exp(-1.0);
  return cert;
}

PairReport falsification_report(int k, int m) {
  ChainParams params{k, m};
  check_params(params);
  ChainModel model = build_type1_chain(params);
  const Dag& g = model.graph.graph();

  PairReport report;
  report.params = params;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    report.node_names.push_back(g.name(v));
  }
  report.grid = density_grid(model, kGridPoints, kGridSeed);
  report.max_observational_gap = observational_match_check(model, report.grid);

  report.r0 = std::exp(log_type1_joint_selection(0.0, params, 1.0) -
                       log_type1_joint_selection(0.0, params, -1.0));
  report.r1 = std::exp(log_type1_joint_selection(1.0, params, 1.0) -
                       log_type1_joint_selection(1.0, params, -1.0));
  report.ratio_gap = std::abs(report.r0 - report.r1);
  report.closed_form = ratio_gap_certificate(m);
  report.cancellation_ok = drift_cancellation_holds(model);
  report.graph_not_s_id =
      !is_s_id(model.graph, Query::of(model.graph, {"X"}, {"Y"}));

  report.certified =
      report.max_observational_gap < kObservationalTolerance &&
      report.ratio_gap > kRatioGapThreshold &&
      report.closed_form.exceeds_lower_bound && report.cancellation_ok &&
      report.graph_not_s_id &&
      std::abs(report.r0 - report.closed_form.r) < kClosedFormTolerance &&
      std::abs(report.r1 - report.closed_form.mirrored) < kClosedFormTolerance;
  return report;
}

std::string pair_report_json(const PairReport& report) {
  nlohmann::json j;
  j["k"] = report.params.k;
  j["m"] = report.params.m;
  j["node_names"] = report.node_names;
  j["grid"] = report.grid;
  j["max_observational_gap"] = report.max_observational_gap;
  j["r0"] = report.r0;
  j["r1"] = report.r1;
  j["ratio_gap"] = report.ratio_gap;
  j["closed_form"] = {{"r", report.closed_form.r},
                      {"mirrored", report.closed_form.mirrored},
                      {"gap", report.closed_form.gap},
                      {"exceeds_lower_bound",
                       report.closed_form.exceeds_lower_bound}};
  j["cancellation_ok"] = report.cancellation_ok;
  j["graph_not_s_id"] = report.graph_not_s_id;
  j["certified"] = report.certified;
  return j.dump(2);
}

}  // namespace subid
