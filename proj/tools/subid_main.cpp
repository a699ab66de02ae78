// Command-line front end for sub-population identification: decide whether
// P_X(Y | S=1) is computable from P(V | S=1) alone, evaluate the resulting
// formula on data, generate synthetic sub-population data, answer
// d-separation queries, and print non-identifiability certificates.
//
// Exit codes: 0 success, 1 input error, 2 not identifiable (or d-connected,
// or counterexample not certified), 3 degenerate data.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "subid/counterexamples.hpp"
#include "subid/dataset.hpp"
#include "subid/dsep.hpp"
#include "subid/errors.hpp"
#include "subid/estimand.hpp"
#include "subid/graph.hpp"
#include "subid/graph_io.hpp"
#include "subid/identify.hpp"
#include "subid/joint_table.hpp"
#include "subid/sem.hpp"

namespace {

using namespace subid;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNegative = 2;
constexpr int kExitDegenerate = 3;

struct CliConfig {
  std::string graph_path;
  std::string selection = "S";
  std::vector<std::string> treatment;
  std::vector<std::string> outcome;
  std::string format = "text";
  std::string data_path;
  std::string out_path;
  long long samples = 10000;
  std::uint64_t seed = 0;
  int cards = 2;
  double concentration = 1.0;
  std::vector<std::string> x_names;
  std::vector<std::string> y_names;
  std::vector<std::string> given_names;
  std::vector<std::string> remove_in;
  std::vector<std::string> remove_out;
  int k = 0;
  int m = 0;
};

std::vector<std::string> set_names(const Dag& g, const VarSet& s) {
  std::vector<std::string> out;
  for (NodeId v : s.to_vector()) out.push_back(g.name(v));
  return out;
}

nlohmann::json estimand_json(const EstimandPtr& e) {
  return nlohmann::json::parse(render(e, RenderFormat::kJson));
}

IdentifyResult run_identify(const AugmentedDag& g, const Query& q) {
  // Single-variable queries get the direct case analysis, which yields the
  // smaller adjustment-style formula; sets go through the general
  // decomposition.
  if (q.treatment.count() == 1 && q.outcome.count() == 1) {
    return singleton_estimand(g, q.treatment.to_vector()[0],
                              q.outcome.to_vector()[0]);
  }
  return s_id(g, q);
}

int cmd_identify(const CliConfig& cfg) {
  AugmentedDag g = load_augmented_file(cfg.graph_path, cfg.selection);
  Query q = Query::of(g, cfg.treatment, cfg.outcome);
  IdentifyResult res = run_identify(g, q);

  if (cfg.format == "json") {
    nlohmann::json j;
    j["identifiable"] = res.identifiable;
    j["x1"] = set_names(g.graph(), res.decomposition.x1);
    j["x2"] = set_names(g.graph(), res.decomposition.x2);
    if (res.estimand) j["estimand"] = estimand_json(res.estimand);
    if (res.witness)
      j["witness"] = [&] {
        std::vector<std::string> names;
        for (NodeId v : *res.witness) names.push_back(g.graph().name(v));
        return names;
      }();
    std::cout << j.dump(2) << "\n";
    return res.identifiable ? kExitOk : kExitNegative;
  }

  if (!res.identifiable) {
    std::cout << "NOT_IDENTIFIABLE\n";
    if (res.witness)
      std::cout << "witness: " << witness_to_text(g.graph(), *res.witness)
                << "\n";
    return kExitNegative;
  }
  std::cout << "IDENTIFIABLE\n";
  RenderFormat fmt =
      cfg.format == "latex" ? RenderFormat::kLatex : RenderFormat::kText;
  std::cout << render(res.estimand, fmt) << "\n";
  return kExitOk;
}

int cmd_estimate(const CliConfig& cfg) {
  AugmentedDag g = load_augmented_file(cfg.graph_path, cfg.selection);
  Query q = Query::of(g, cfg.treatment, cfg.outcome);
  IdentifyResult res = run_identify(g, q);
  if (!res.identifiable) {
    std::cout << "NOT_IDENTIFIABLE\n";
    if (res.witness)
      std::cout << "witness: " << witness_to_text(g.graph(), *res.witness)
                << "\n";
    return kExitNegative;
  }

  std::ifstream in(cfg.data_path);
  if (!in) throw InputError("cannot open data file '" + cfg.data_path + "'");
  Dataset data = read_csv(in);

  // Category counts come from the graph-free data, except that every
  // estimand variable must actually be a column.
  JointTable joint = empirical_joint(data);
  ConditionalTable table =
      evaluate_table(res.estimand, joint, cfg.treatment, cfg.outcome);

  if (cfg.format == "json") {
    nlohmann::json j;
    j["x_vars"] = table.x_vars;
    j["x_cards"] = table.x_cards;
    j["y_vars"] = table.y_vars;
    j["y_cards"] = table.y_cards;
    j["values"] = table.values;
    std::cout << j.dump(2) << "\n";
    return kExitOk;
  }

  std::cout << "estimated P_X(Y | S=1)\n";
  std::vector<int> x(table.x_vars.size(), 0), y(table.y_vars.size(), 0);
  for (long long xi = 0; xi < table.x_configs(); ++xi) {
    for (long long yi = 0; yi < table.y_configs(); ++yi) {
      std::ostringstream line;
      for (std::size_t i = 0; i < x.size(); ++i)
        line << table.x_vars[i] << "=" << x[i] << " ";
      for (std::size_t i = 0; i < y.size(); ++i)
        line << table.y_vars[i] << "=" << y[i] << " ";
      line << std::fixed << std::setprecision(9) << table.at(x, y);
      std::cout << line.str() << "\n";
      for (int i = static_cast<int>(y.size()) - 1; i >= 0; --i) {
        if (++y[i] < table.y_cards[i]) break;
        y[i] = 0;
      }
    }
    for (int i = static_cast<int>(x.size()) - 1; i >= 0; --i) {
      if (++x[i] < table.x_cards[i]) break;
      x[i] = 0;
    }
  }
  return kExitOk;
}

int cmd_simulate(const CliConfig& cfg) {
  AugmentedDag g = load_augmented_file(cfg.graph_path, cfg.selection);
  std::vector<int> cards(static_cast<std::size_t>(g.graph().node_count()),
                         cfg.cards);
  cards[static_cast<std::size_t>(g.selection())] = 2;
  DiscreteSem sem = random_sem(g, cfg.seed, cards, cfg.concentration);
  Dataset data = sample_subpopulation(sem, cfg.samples, cfg.seed + 1);
  if (cfg.out_path.empty()) {
    write_csv(data, std::cout);
  } else {
    std::ofstream out(cfg.out_path);
    if (!out)
      throw InputError("cannot open output file '" + cfg.out_path + "'");
    write_csv(data, out);
  }
  return kExitOk;
}

int cmd_dsep(const CliConfig& cfg) {
  ParsedGraph parsed = load_graph_file(cfg.graph_path);
  const Dag& g = parsed.dag;
  VarSet x = g.set_of_names(cfg.x_names);
  VarSet y = g.set_of_names(cfg.y_names);
  VarSet given = g.set_of_names(cfg.given_names);
  Dag surgered = edge_surgery(g, g.set_of_names(cfg.remove_in),
                              g.set_of_names(cfg.remove_out));
  if (d_separated(surgered, x, y, given)) {
    std::cout << "SEPARATED\n";
    return kExitOk;
  }
  std::cout << "CONNECTED\n";
  if (auto witness = find_active_path(surgered, x, y, given))
    std::cout << "witness: " << witness_to_text(surgered, *witness) << "\n";
  return kExitNegative;
}

int cmd_falsify(const CliConfig& cfg) {
  PairReport report = falsification_report(cfg.k, cfg.m);
  std::cout << pair_report_json(report) << "\n";
  return report.certified ? kExitOk : kExitNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sub-population causal identification toolkit"};
  app.require_subcommand(1);
  CliConfig cfg;

  auto add_graph = [&](CLI::App* cmd) {
    cmd->add_option("--graph,-g", cfg.graph_path, "graph file")->required();
    cmd->add_option("--selection", cfg.selection,
                    "name of the selection node (default S)");
  };
  auto add_query = [&](CLI::App* cmd) {
    cmd->add_option("--treatment,-x", cfg.treatment, "treatment variables")
        ->required();
    cmd->add_option("--outcome,-y", cfg.outcome, "outcome variables")
        ->required();
  };
  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", cfg.format, "text, latex, or json")
        ->check(CLI::IsMember({"text", "latex", "json"}));
  };

  CLI::App* identify =
      app.add_subcommand("identify", "decide whether P_X(Y|S=1) is computable "
                                     "from sub-population data");
  add_graph(identify);
  add_query(identify);
  add_format(identify);

  CLI::App* estimate = app.add_subcommand(
      "estimate", "plug a sub-population CSV into the identified formula");
  add_graph(estimate);
  add_query(estimate);
  add_format(estimate);
  estimate->add_option("--data", cfg.data_path, "CSV of sub-population rows")
      ->required();

  CLI::App* simulate = app.add_subcommand(
      "simulate", "sample sub-population rows from a random discrete model");
  add_graph(simulate);
  simulate->add_option("--samples,-n", cfg.samples, "rows to generate")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--seed", cfg.seed, "random seed")->required();
  simulate->add_option("--cards", cfg.cards, "cardinality of every variable")
      ->check(CLI::Range(2, 16));
  simulate->add_option("--concentration", cfg.concentration,
                       "Dirichlet concentration for the random CPT rows")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--out", cfg.out_path, "output file (default stdout)");

  CLI::App* dsep =
      app.add_subcommand("dsep", "d-separation query with optional surgery");
  dsep->add_option("--graph,-g", cfg.graph_path, "graph file")->required();
  dsep->add_option("--x", cfg.x_names, "first variable set")->required();
  dsep->add_option("--y", cfg.y_names, "second variable set")->required();
  dsep->add_option("--given", cfg.given_names, "conditioning set");
  dsep->add_option("--remove-in", cfg.remove_in,
                   "drop the incoming edges of these nodes");
  dsep->add_option("--remove-out", cfg.remove_out,
                   "drop the outgoing edges of these nodes");

  CLI::App* falsify = app.add_subcommand(
      "falsify", "certificate that sub-population data cannot pin down the "
                 "effect on the chain family");
  falsify->add_option("--k", cfg.k, "edges on the outcome-to-selection path")
      ->required();
  falsify->add_option("--m", cfg.m, "noise terms between treatment and outcome")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (app.got_subcommand(identify)) return cmd_identify(cfg);
    if (app.got_subcommand(estimate)) return cmd_estimate(cfg);
    if (app.got_subcommand(simulate)) return cmd_simulate(cfg);
    if (app.got_subcommand(dsep)) return cmd_dsep(cfg);
    if (app.got_subcommand(falsify)) return cmd_falsify(cfg);
  } catch (const DegenerateSelectionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const EvalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
