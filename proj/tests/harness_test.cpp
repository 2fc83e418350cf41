#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "graphstab/harness.hpp"
#include "graphstab/random.hpp"

using namespace graphstab;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig config;
  config.seed = 7;
  config.num_nodes = 16;
  config.edge_probability = 0.35;
  config.rewirings = 2;
  config.trials = 12;
  return config;
}

std::vector<std::size_t> sorted_degrees(const Graph& g) {
  auto d = g.degree_sequence();
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace

TEST_CASE("strategy names round trip") {
  for (Strategy s : {Strategy::kRandom, Strategy::kHighDegree, Strategy::kLowDegree,
                     Strategy::kLocalized})
    CHECK(parse_strategy(to_string(s)) == s);
  CHECK_THROWS_AS(parse_strategy("bogus"), std::invalid_argument);
}

TEST_CASE("edge probability one yields the complete graph") {
  ExperimentConfig config;
  config.num_nodes = 8;
  config.edge_probability = 1.0;
  const Graph g = generate_graph(config, 42);
  CHECK(g.num_edges() == 28);
  for (NodeId u = 0; u < 8; ++u) CHECK(g.degree(u) == 7);
}

TEST_CASE("edge probability is validated") {
  ExperimentConfig config;
  config.edge_probability = 0.0;
  CHECK_THROWS_AS(generate_graph(config, 1), std::invalid_argument);
  config.edge_probability = 1.5;
  CHECK_THROWS_AS(generate_graph(config, 1), std::invalid_argument);
}

TEST_CASE("gamma zero forces isolated-free draws") {
  ExperimentConfig config;
  config.num_nodes = 24;
  config.edge_probability = 0.12;  // isolated nodes are likely in a single draw
  config.gamma = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Graph g = generate_graph(config, mix_seed(1000, seed));
    for (NodeId u = 0; u < g.num_nodes(); ++u) CHECK(g.degree(u) >= 1);
  }
}

TEST_CASE("preferential attachment has a fixed edge count") {
  ExperimentConfig config;
  config.graph_model = GraphModel::kBarabasiAlbert;
  config.num_nodes = 20;
  config.attach_edges = 2;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Graph g = generate_graph(config, mix_seed(1001, seed));
    CHECK(g.num_edges() == 37);  // C(2,2)=1 seed edge + 2 * 18 attachments
    for (NodeId u = 0; u < g.num_nodes(); ++u) CHECK(g.degree(u) >= 2);
  }

  config.attach_edges = 20;
  CHECK_THROWS_AS(generate_graph(config, 1), std::invalid_argument);
}

TEST_CASE("graph generation is reproducible") {
  ExperimentConfig config = small_config();
  const Graph a = generate_graph(config, 99);
  const Graph b = generate_graph(config, 99);
  CHECK(a.edges() == b.edges());

  config.graph_model = GraphModel::kBarabasiAlbert;
  const Graph c = generate_graph(config, 99);
  const Graph d = generate_graph(config, 99);
  CHECK(c.edges() == d.edges());
}

TEST_CASE("degree-targeted strategies stay inside their quartile") {
  ExperimentConfig config;
  config.graph_model = GraphModel::kBarabasiAlbert;
  config.num_nodes = 40;
  config.attach_edges = 3;
  const Graph g = generate_graph(config, 5);

  // Quartile membership by (degree, index), matching the selector's ordering.
  std::vector<NodeId> order(g.num_nodes());
  for (NodeId u = 0; u < g.num_nodes(); ++u) order[u] = u;
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    return g.degree(a) != g.degree(b) ? g.degree(a) < g.degree(b) : a < b;
  });
  const std::size_t q = std::max<std::size_t>((g.num_nodes() + 3) / 4, 4);
  std::set<NodeId> low(order.begin(), order.begin() + q);
  std::set<NodeId> high(order.end() - q, order.end());

  const auto hi = select_rewirings(g, Strategy::kHighDegree, 3, 6);
  for (const Rewiring& r : hi.plan)
    for (NodeId id : {r.u, r.v, r.u2, r.v2}) CHECK(high.count(id) == 1);

  const auto lo = select_rewirings(g, Strategy::kLowDegree, 3, 6);
  for (const Rewiring& r : lo.plan)
    for (NodeId id : {r.u, r.v, r.u2, r.v2}) CHECK(low.count(id) == 1);
}

TEST_CASE("localized plans involve the focus node every time") {
  ExperimentConfig config = small_config();
  const Graph g = generate_graph(config, 11);
  const NodeId focus = 3;
  const auto sel = select_rewirings(g, Strategy::kLocalized, 3, 12, focus);
  CHECK_FALSE(sel.plan.empty());
  for (const Rewiring& r : sel.plan) {
    const bool involved = r.u == focus || r.v == focus || r.u2 == focus || r.v2 == focus;
    CHECK(involved);
  }
  const auto [gp, summary] = apply_plan(g, sel.plan);
  (void)gp;
  CHECK(summary.involvement[focus] == sel.plan.size());

  CHECK_THROWS_AS(select_rewirings(g, Strategy::kLocalized, 1, 13, 99), std::out_of_range);
}

TEST_CASE("plans never change the degree sequence") {
  ExperimentConfig config = small_config();
  for (Strategy s : {Strategy::kRandom, Strategy::kHighDegree, Strategy::kLowDegree,
                     Strategy::kLocalized}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const Graph g = generate_graph(config, mix_seed(1002, seed));
      const auto sel = select_rewirings(g, s, 3, mix_seed(1003, seed));
      const auto [gp, summary] = apply_plan(g, sel.plan);
      (void)summary;
      CHECK(gp.degree_sequence() == g.degree_sequence());
      CHECK(sorted_degrees(gp) == sorted_degrees(g));
    }
  }
}

TEST_CASE("a trial with no rewirings measures nothing but passes") {
  ExperimentConfig config = small_config();
  config.rewirings = 0;
  const TrialReport r = run_single_trial(config, 0);
  CHECK(r.applied_rewirings == 0);
  CHECK_FALSE(r.shortfall);
  CHECK(r.norm_two == 0.0);
  CHECK(r.distance == 0.0);
  CHECK_FALSE(r.violation);
  CHECK_FALSE(std::isfinite(r.slack));
}

TEST_CASE("single trials are deterministic and consistent with the batch") {
  const ExperimentConfig config = small_config();
  const TrialReport a = run_single_trial(config, 4);
  const TrialReport b = run_single_trial(config, 4);
  CHECK(a.subseed == b.subseed);
  CHECK(a.norm_two == b.norm_two);
  CHECK(a.distance == b.distance);
  CHECK(a.bound == b.bound);

  const VerificationResult batch = run_verification(config);
  REQUIRE(batch.trials.size() == config.trials);
  CHECK(batch.trials[4].subseed == a.subseed);
  CHECK(batch.trials[4].norm_two == a.norm_two);
  CHECK(batch.trials[4].distance == a.distance);
}

TEST_CASE("verification passes on small configs for every measure") {
  ExperimentConfig config = small_config();
  for (MeasureKind kind : {MeasureKind::kFilter, MeasureKind::kSgcn, MeasureKind::kGcn}) {
    config.measure = kind;
    const VerificationResult result = run_verification(config);
    CHECK_FALSE(result.any_violation);
    for (const TrialReport& r : result.trials) {
      CHECK(r.note.empty());
      CHECK(r.distance <= r.bound + 1e-9);
      CHECK(r.bound <= r.chain_bound + 1e-9);
      CHECK(r.norm_one <= r.rewiring_bound + 1e-9);
    }
  }
}

TEST_CASE("verification respects a fixed filter") {
  ExperimentConfig config = small_config();
  config.trials = 4;
  config.fixed_filter = make_filter({0.0, 1.0});
  const VerificationResult result = run_verification(config);
  for (const TrialReport& r : result.trials) {
    // Degree-one filter: distance is exactly the error norm, bound equals it.
    CHECK(r.distance == doctest::Approx(r.norm_two).epsilon(1e-9));
    CHECK(r.bound == doctest::Approx(r.norm_two).epsilon(1e-12));
  }
}

TEST_CASE("gnn measures reject gamma other than one") {
  ExperimentConfig config = small_config();
  config.measure = MeasureKind::kSgcn;
  config.gamma = 0.0;
  CHECK_THROWS_AS(run_verification(config), std::invalid_argument);
  config.measure = MeasureKind::kGcn;
  CHECK_THROWS_AS(run_verification(config), std::invalid_argument);
  config.measure = MeasureKind::kFilter;
  CHECK_NOTHROW(run_verification(config));
}

TEST_CASE("report CSV is byte-identical across runs and threads") {
  const ExperimentConfig config = small_config();
  const std::string first = report_csv(run_verification(config), config);
  const std::string second = report_csv(run_verification(config), config);
  CHECK(first == second);

  const std::string header = first.substr(0, first.find('\n'));
  CHECK(header ==
        "trial,subseed,n,edges,gamma,kind,strategy,requested_rewirings,"
        "applied_rewirings,shortfall,norm_max,norm_two,norm_one,rewiring_bound,"
        "distance,bound,chain_bound,slack,chain_slack,violation");

  // One line per trial plus header and trailing newline.
  const std::size_t lines = std::count(first.begin(), first.end(), '\n');
  CHECK(lines == config.trials + 1);
}

TEST_CASE("summary JSON reports counts and slack statistics") {
  const ExperimentConfig config = small_config();
  const VerificationResult result = run_verification(config);
  const std::string json = summary_json(result, config);
  CHECK(json.find("\"violations\": 0") != std::string::npos);
  CHECK(json.find("\"trials\": 12") != std::string::npos);
  CHECK(json.find("\"pass\": true") != std::string::npos);
}

TEST_CASE("materialized trials replay the reported numbers") {
  const ExperimentConfig config = small_config();
  const TrialReport r = run_single_trial(config, 2);
  const TrialArtifacts artifacts = materialize_trial(config, 2);
  CHECK(artifacts.graph.num_nodes() == r.num_nodes);
  CHECK(artifacts.graph.num_edges() == r.num_edges);
  CHECK(artifacts.plan.size() == r.applied_rewirings);
  const auto [gp, summary] = apply_plan(artifacts.graph, artifacts.plan);
  (void)gp;
  CHECK(rewiring_bound(artifacts.graph, summary, config.gamma) ==
        doctest::Approx(r.rewiring_bound).epsilon(1e-12));
}

TEST_CASE("experiment sweeps cover every gamma-strategy pair") {
  ExperimentConfig config = small_config();
  config.trials = 3;
  const std::vector<double> gammas = {0.0, 1.0};
  const std::vector<Strategy> strategies = {Strategy::kRandom, Strategy::kHighDegree};
  const std::string csv = run_experiment_csv(config, gammas, strategies);

  const std::string header = csv.substr(0, csv.find('\n'));
  CHECK(header == "gamma,strategy,trial,metric,value");
  CHECK(csv.find("high-degree") != std::string::npos);
  CHECK(csv.find("rewiring_bound") != std::string::npos);

  config.measure = MeasureKind::kSgcn;
  CHECK_THROWS_AS(run_experiment_csv(config, gammas, strategies), std::invalid_argument);
}
