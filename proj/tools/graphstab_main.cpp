// Command line front end: analyze a single graph/plan pair, sample rewiring
// plans, run bound-verification campaigns and strategy/gamma sweeps.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "graphstab/harness.hpp"
#include "graphstab/kernels.hpp"
#include "graphstab/random.hpp"

namespace {

using namespace graphstab;

struct Options {
  ExperimentConfig config;
  std::string plan_file;
  std::string model_name;       // empty, "sgcn" or "gcn"
  std::string filter_text;
  std::string strategy_name = "random";
  std::string gammas_text = "0,1,4";
  std::string strategies_text = "random,high-degree,low-degree,localized";
  std::string out_file;
  std::string json_file;
  std::string dump_shift_file;
  std::string dump_error_file;
  bool ba_requested = false;
};

void add_graph_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--graph", o.config.graph_file,
                  "read the graph from an edge list file instead of generating one");
  cmd->add_option("--n", o.config.num_nodes, "node count for generated graphs")
      ->capture_default_str();
  cmd->add_option("--p", o.config.edge_probability,
                  "Erdos-Renyi edge probability in (0, 1]")
      ->capture_default_str();
  cmd->add_option("--ba-m", o.config.attach_edges,
                  "use Barabasi-Albert attachment with this many edges per arriving node")
      ->each([&o](const std::string&) { o.ba_requested = true; });
  cmd->add_option("--seed", o.config.seed, "base seed for every random draw")
      ->capture_default_str();
  cmd->add_option("--gamma", o.config.gamma, "self-loop weight of the shift operator")
      ->capture_default_str();
  cmd->add_option("--tol", o.config.tol, "power iteration tolerance")
      ->capture_default_str();
}

void add_plan_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--rewirings", o.config.rewirings, "rewirings per sampled plan")
      ->capture_default_str();
  cmd->add_option("--strategy", o.strategy_name,
                  "random, high-degree, low-degree or localized")
      ->capture_default_str();
  cmd->add_option("--localized-node", o.config.focus_node,
                  "shared endpoint for the localized strategy")
      ->capture_default_str();
}

void add_model_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--model", o.model_name, "sgcn or gcn (default: polynomial filter)");
  cmd->add_option("--filter", o.filter_text,
                  "fixed filter coefficients, e.g. \"0.5,1,-0.25\"");
  cmd->add_option("--filter-order", o.config.filter_order,
                  "order of the per-trial random filter when --filter is not given")
      ->capture_default_str();
  cmd->add_option("--power", o.config.power, "propagation steps of the sgcn model")
      ->capture_default_str();
  cmd->add_option("--layers", o.config.depth, "layer count of the gcn model")
      ->capture_default_str();
  cmd->add_option("--features", o.config.num_features, "feature width")
      ->capture_default_str();
  cmd->add_option("--classes", o.config.num_classes, "output width of the last layer")
      ->capture_default_str();
  cmd->add_option("--features-file", o.config.features_file,
                  "CSV feature matrix (columns must have unit norm)");
  cmd->add_option("--weights-file", o.config.weights_files,
                  "CSV weight matrix, repeat once per layer for gcn");
}

void finalize_config(Options& o) {
  if (!o.config.graph_file.empty())
    o.config.graph_model = GraphModel::kFile;
  else if (o.ba_requested)
    o.config.graph_model = GraphModel::kBarabasiAlbert;
  else
    o.config.graph_model = GraphModel::kErdosRenyi;

  o.config.strategy = parse_strategy(o.strategy_name);

  if (!o.model_name.empty()) {
    if (o.model_name == "sgcn")
      o.config.measure = MeasureKind::kSgcn;
    else if (o.model_name == "gcn")
      o.config.measure = MeasureKind::kGcn;
    else
      throw std::invalid_argument("unknown model '" + o.model_name +
                                  "' (expected sgcn or gcn)");
  }
  if (!o.filter_text.empty()) o.config.fixed_filter = parse_filter(o.filter_text);
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw std::invalid_argument("unparseable number '" + item + "' in '" + text + "'");
    }
  }
  if (values.empty()) throw std::invalid_argument("empty list '" + text + "'");
  return values;
}

std::vector<Strategy> parse_strategy_list(const std::string& text) {
  std::vector<Strategy> values;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) values.push_back(parse_strategy(item));
  if (values.empty()) throw std::invalid_argument("empty strategy list '" + text + "'");
  return values;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
}

void print_value(const char* name, double v) { std::printf("%-22s %.17g\n", name, v); }
void print_count(const char* name, std::size_t v) { std::printf("%-22s %zu\n", name, v); }

int cmd_analyze(Options& o) {
  finalize_config(o);
  Graph g = o.config.graph_model == GraphModel::kFile
                ? read_edge_list_file(o.config.graph_file)
                : generate_graph(o.config, mix_seed(mix_seed(o.config.seed, 0), 0));
  RewiringPlan plan;
  bool shortfall = false;
  if (!o.plan_file.empty()) {
    plan = read_plan_file(o.plan_file);
  } else {
    PlanSelection sel = select_rewirings(g, o.config.strategy, o.config.rewirings,
                                         mix_seed(mix_seed(o.config.seed, 0), 1),
                                         o.config.focus_node);
    shortfall = sel.shortfall();
    plan = std::move(sel.plan);
  }

  PlanApplication applied = apply_plan(g, plan);
  const ShiftOperator original = build_shift(g, o.config.gamma);
  const ShiftOperator perturbed = build_shift(applied.perturbed, o.config.gamma);
  const ErrorMatrix err = error_matrix(original, perturbed);

  print_count("n", g.num_nodes());
  print_count("edges", g.num_edges());
  print_value("gamma", o.config.gamma);
  print_count("rewirings", plan.size());
  if (shortfall) std::printf("%-22s %s\n", "shortfall", "yes");
  print_value("norm_max", norm_max(err));
  print_value("norm_two", norm_two(err, o.config.tol));
  print_value("norm_one", norm_one(err));
  print_value("rewiring_bound", rewiring_bound(g, applied.summary, o.config.gamma));

  if (o.config.fixed_filter) {
    const PolynomialFilter& f = *o.config.fixed_filter;
    const double e2 = norm_two(err, o.config.tol);
    print_value("filter_distance", filter_distance(f, original, perturbed, o.config.tol));
    print_value("filter_bound", filter_stability_bound(f, e2));
    print_value("chain_bound",
                filter_stability_bound(f, rewiring_bound(g, applied.summary, o.config.gamma)));
  }

  if (!o.dump_shift_file.empty()) {
    std::ofstream out(o.dump_shift_file);
    if (!out)
      throw std::runtime_error("cannot open '" + o.dump_shift_file + "' for writing");
    write_matrix_csv(original.matrix(), out);
  }
  if (!o.dump_error_file.empty()) {
    std::ofstream out(o.dump_error_file);
    if (!out)
      throw std::runtime_error("cannot open '" + o.dump_error_file + "' for writing");
    write_matrix_csv(err.values, out);
  }
  return 0;
}

int cmd_rewire(Options& o) {
  finalize_config(o);
  Graph g = o.config.graph_model == GraphModel::kFile
                ? read_edge_list_file(o.config.graph_file)
                : generate_graph(o.config, mix_seed(mix_seed(o.config.seed, 0), 0));
  PlanSelection sel = select_rewirings(g, o.config.strategy, o.config.rewirings,
                                       mix_seed(mix_seed(o.config.seed, 0), 1),
                                       o.config.focus_node);
  if (sel.shortfall())
    std::fprintf(stderr, "rewire: candidates exhausted after %zu of %zu rewirings\n",
                 sel.plan.size(), sel.requested);
  std::ostringstream text;
  write_plan(sel.plan, text);
  if (o.out_file.empty())
    std::fputs(text.str().c_str(), stdout);
  else
    write_text_file(o.out_file, text.str());
  return 0;
}

int cmd_verify(Options& o) {
  finalize_config(o);
  const VerificationResult result = run_verification(o.config);
  const std::string csv = report_csv(result, o.config);
  if (o.out_file.empty())
    std::fputs(csv.c_str(), stdout);
  else
    write_text_file(o.out_file, csv);

  const std::string summary = summary_json(result, o.config);
  if (o.json_file.empty())
    std::fputs(summary.c_str(), stdout);
  else
    write_text_file(o.json_file, summary);

  if (!result.any_violation) return 0;

  for (const TrialReport& r : result.trials) {
    if (!r.violation) continue;
    nlohmann::ordered_json dump;
    dump["trial"] = r.trial;
    dump["subseed"] = r.subseed;
    dump["note"] = r.note;
    dump["gamma"] = r.gamma;
    dump["measured"] = {{"norm_max", r.norm_max},     {"norm_two", r.norm_two},
                        {"norm_one", r.norm_one},     {"rewiring_bound", r.rewiring_bound},
                        {"distance", r.distance},     {"bound", r.bound},
                        {"chain_bound", r.chain_bound}};
    try {
      const TrialArtifacts artifacts = materialize_trial(o.config, r.trial);
      std::ostringstream graph_text;
      write_edge_list(artifacts.graph, graph_text);
      dump["graph"] = graph_text.str();
      std::ostringstream plan_text;
      write_plan(artifacts.plan, plan_text);
      dump["plan"] = plan_text.str();
    } catch (const std::exception& e) {
      dump["graph"] = nullptr;
      dump["plan"] = nullptr;
      dump["materialize_error"] = e.what();
    }
    const std::string path =
        (o.out_file.empty() ? std::string("verify") : o.out_file) + ".violation.json";
    write_text_file(path, dump.dump(2) + "\n");
    std::fprintf(stderr, "verify: trial %zu violated a bound (%s); replay data in %s\n",
                 r.trial, r.note.c_str(), path.c_str());
    break;  // first offender is enough for replay
  }
  return 1;
}

int cmd_experiment(Options& o) {
  finalize_config(o);
  const std::string csv = run_experiment_csv(o.config, parse_double_list(o.gammas_text),
                                             parse_strategy_list(o.strategies_text));
  if (o.out_file.empty())
    std::fputs(csv.c_str(), stdout);
  else
    write_text_file(o.out_file, csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stability bounds for spectral graph filters under degree-preserving edge "
               "rewiring"};
  app.require_subcommand(1);
  Options o;

  CLI::App* analyze = app.add_subcommand(
      "analyze", "norms and bounds for one graph and one rewiring plan");
  add_graph_options(analyze, o);
  add_plan_options(analyze, o);
  analyze->add_option("--plan", o.plan_file, "read the plan from a file instead of sampling");
  analyze->add_option("--filter", o.filter_text, "filter coefficients \"c0,c1,...\"");
  analyze->add_option("--dump-shift", o.dump_shift_file,
                      "write the shift operator matrix as CSV");
  analyze->add_option("--dump-error", o.dump_error_file,
                      "write the error matrix as CSV");

  CLI::App* rewire = app.add_subcommand("rewire", "sample a rewiring plan and print it");
  add_graph_options(rewire, o);
  add_plan_options(rewire, o);
  rewire->add_option("--out", o.out_file, "write the plan here instead of stdout");

  CLI::App* verify = app.add_subcommand(
      "verify", "run a bound-verification campaign; exit 0 only if every bound held");
  add_graph_options(verify, o);
  add_plan_options(verify, o);
  add_model_options(verify, o);
  verify->add_option("--trials", o.config.trials, "number of trials")->capture_default_str();
  verify->add_option("--out", o.out_file, "CSV report path (default: stdout)");
  verify->add_option("--json", o.json_file, "JSON summary path (default: stdout)");

  CLI::App* experiment = app.add_subcommand(
      "experiment", "sweep gamma and strategy, emit long-format CSV for plotting");
  add_graph_options(experiment, o);
  add_plan_options(experiment, o);
  add_model_options(experiment, o);
  experiment->add_option("--trials", o.config.trials, "trials per sweep point")
      ->capture_default_str();
  experiment->add_option("--gammas", o.gammas_text, "comma-separated gamma values")
      ->capture_default_str();
  experiment->add_option("--strategies", o.strategies_text, "comma-separated strategies")
      ->capture_default_str();
  experiment->add_option("--out", o.out_file, "CSV path (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(analyze)) return cmd_analyze(o);
    if (app.got_subcommand(rewire)) return cmd_rewire(o);
    if (app.got_subcommand(verify)) return cmd_verify(o);
    if (app.got_subcommand(experiment)) return cmd_experiment(o);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
