#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graphstab/filter.hpp"
#include "graphstab/gnn.hpp"
#include "graphstab/graph.hpp"
#include "graphstab/rewiring.hpp"

namespace graphstab {

enum class GraphModel { kErdosRenyi, kBarabasiAlbert, kFile };

enum class Strategy { kRandom, kHighDegree, kLowDegree, kLocalized };

enum class MeasureKind { kFilter, kSgcn, kGcn };

const char* to_string(Strategy s);
const char* to_string(MeasureKind k);
Strategy parse_strategy(const std::string& name);

struct ExperimentConfig {
  std::uint64_t seed = 1;

  GraphModel graph_model = GraphModel::kErdosRenyi;
  std::size_t num_nodes = 32;
  double edge_probability = 0.2;  // Erdos-Renyi
  std::size_t attach_edges = 2;   // Barabasi-Albert edges per arriving node
  std::string graph_file;

  double gamma = 1.0;
  std::size_t rewirings = 5;
  Strategy strategy = Strategy::kRandom;
  NodeId focus_node = 0;  // shared endpoint for the localized strategy

  MeasureKind measure = MeasureKind::kFilter;
  std::optional<PolynomialFilter> fixed_filter;  // random per trial when unset
  std::size_t filter_order = 3;

  std::size_t power = 2;         // linear model propagation steps
  std::size_t depth = 2;         // ReLU stack layers
  std::size_t num_features = 4;
  std::size_t num_classes = 2;
  std::string features_file;             // CSV override, random when empty
  std::vector<std::string> weights_files;  // CSV override, random when empty

  std::size_t trials = 100;
  double tol = kDefaultNormTol;
};

// Draws a graph for one trial. Erdos-Renyi includes each pair independently
// with the configured probability (p = 1 gives the complete graph); when
// gamma is 0 the draw is repeated until no node is isolated, up to 100
// attempts. Barabasi-Albert starts from a complete graph on attach_edges
// nodes and attaches every later node to attach_edges distinct predecessors
// chosen proportionally to degree, resampling collisions, which makes the
// edge count exactly C(attach_edges, 2) + attach_edges * (n - attach_edges).
Graph generate_graph(const ExperimentConfig& config, std::uint64_t seed);

// Samples a plan under the given strategy. The degree-targeted strategies
// restrict all four endpoints to the top or bottom degree quartile (ties
// broken by node index); localized forces focus to participate in every
// rewiring. Candidate exhaustion yields a short plan, reported through
// PlanSelection::shortfall.
PlanSelection select_rewirings(const Graph& g, Strategy strategy, std::size_t count,
                               std::uint64_t seed, NodeId focus = 0);

struct TrialReport {
  std::size_t trial = 0;
  std::uint64_t subseed = 0;
  std::size_t num_nodes = 0;
  std::size_t num_edges = 0;
  double gamma = 0.0;
  std::size_t requested_rewirings = 0;
  std::size_t applied_rewirings = 0;
  bool shortfall = false;

  double norm_max = 0.0;
  double norm_two = 0.0;
  double norm_one = 0.0;
  double rewiring_bound = 0.0;

  double distance = 0.0;     // measured filter or logit change
  double bound = 0.0;        // bound through the measured error norm
  double chain_bound = 0.0;  // bound through the degree-based rewiring bound

  double slack = 0.0;        // bound / distance, +inf when distance ~ 0
  double chain_slack = 0.0;

  bool violation = false;
  std::string note;  // first failed check or the exception that aborted the trial

  double wall_seconds = 0.0;  // kept out of the CSV so output stays reproducible
};

struct VerificationResult {
  std::vector<TrialReport> trials;
  bool any_violation = false;
  double wall_seconds = 0.0;
};

// Runs the configured number of trials (in parallel; every trial derives its
// randomness from mix_seed(config.seed, trial), so scheduling cannot change
// any number). Each trial re-derives the row norms of the error matrix from
// the degree data and checks every bound against its measured quantity;
// failures mark the report instead of throwing.
VerificationResult run_verification(const ExperimentConfig& config);

TrialReport run_single_trial(const ExperimentConfig& config, std::size_t trial);

// Regenerates the trial's inputs for replay or failure dumps.
struct TrialArtifacts {
  Graph graph;
  RewiringPlan plan;
};
TrialArtifacts materialize_trial(const ExperimentConfig& config, std::size_t trial);

// Fixed-schema CSV, one row per trial, floats in "%.17g", slack columns use
// the literal "inf" when the measured distance is below 1e-12. Byte-identical
// across runs with the same config.
std::string report_csv(const VerificationResult& result, const ExperimentConfig& config);

// Aggregate summary as JSON text (config echo, violation count, slack
// statistics over the finite slacks, wall time).
std::string summary_json(const VerificationResult& result, const ExperimentConfig& config);

// Sweep driver: runs the config once per (gamma, strategy) pair and emits
// long-format rows "gamma,strategy,trial,metric,value" for plotting. Only the
// filter measure permits gamma != 1.
std::string run_experiment_csv(const ExperimentConfig& config,
                               const std::vector<double>& gammas,
                               const std::vector<Strategy>& strategies);

}  // namespace graphstab
