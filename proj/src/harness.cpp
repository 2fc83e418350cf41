#include "graphstab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "graphstab/kernels.hpp"
#include "graphstab/random.hpp"

namespace graphstab {

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::kRandom: return "random";
    case Strategy::kHighDegree: return "high-degree";
    case Strategy::kLowDegree: return "low-degree";
    case Strategy::kLocalized: return "localized";
  }
  return "?";
}

const char* to_string(MeasureKind k) {
  switch (k) {
    case MeasureKind::kFilter: return "filter";
    case MeasureKind::kSgcn: return "sgcn";
    case MeasureKind::kGcn: return "gcn";
  }
  return "?";
}

Strategy parse_strategy(const std::string& name) {
  if (name == "random") return Strategy::kRandom;
  if (name == "high-degree") return Strategy::kHighDegree;
  if (name == "low-degree") return Strategy::kLowDegree;
  if (name == "localized") return Strategy::kLocalized;
  throw std::invalid_argument("unknown strategy '" + name +
                              "' (expected random, high-degree, low-degree or localized)");
}

namespace {

Graph erdos_renyi(std::size_t n, double p, double gamma, std::mt19937_64& rng) {
  if (!(p > 0.0) || p > 1.0)
    throw std::invalid_argument("erdos-renyi: edge probability must be in (0, 1], got " +
                                std::to_string(p));
  std::bernoulli_distribution coin(p);
  constexpr int kAttempts = 100;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    Graph g(n);
    std::vector<Edge> list;
    for (NodeId u = 0; u + 1 < n; ++u)
      for (NodeId v = u + 1; v < n; ++v)
        if (coin(rng)) list.push_back({u, v});
    g = graph_from_edge_list(n, list);
    if (gamma > 0.0) return g;
    bool isolated = false;
    for (NodeId u = 0; u < n && !isolated; ++u) isolated = g.degree(u) == 0;
    if (!isolated) return g;
  }
  throw std::runtime_error(
      "erdos-renyi: could not draw a graph without isolated nodes in 100 attempts "
      "(gamma = 0 requires them); raise p or n");
}

Graph barabasi_albert(std::size_t n, std::size_t m, std::mt19937_64& rng) {
  if (m < 1 || m >= n)
    throw std::invalid_argument("barabasi-albert: need 1 <= attach_edges < n, got " +
                                std::to_string(m) + " with n = " + std::to_string(n));
  std::vector<Edge> list;
  for (NodeId u = 0; u < m; ++u)
    for (NodeId v = u + 1; v < m; ++v) list.push_back({u, v});

  // One entry per edge endpoint; drawing uniformly from it is the same as
  // drawing a node proportionally to its degree.
  std::vector<NodeId> stubs;
  for (const Edge& e : list) {
    stubs.push_back(e.u);
    stubs.push_back(e.v);
  }

  std::vector<NodeId> chosen;
  for (NodeId t = static_cast<NodeId>(m); t < n; ++t) {
    chosen.clear();
    for (std::size_t k = 0; k < m; ++k) {
      NodeId target = 0;
      bool found = false;
      for (int attempt = 0; attempt < 1000 && !found; ++attempt) {
        if (stubs.empty()) {
          target = std::uniform_int_distribution<NodeId>(0, t - 1)(rng);
        } else {
          target = stubs[std::uniform_int_distribution<std::size_t>(0, stubs.size() - 1)(rng)];
        }
        found = std::find(chosen.begin(), chosen.end(), target) == chosen.end();
      }
      if (!found) {
        // Collision resampling got unlucky; take the smallest node not yet
        // chosen so the arrival still brings exactly m edges.
        for (NodeId candidate = 0; candidate < t; ++candidate) {
          if (std::find(chosen.begin(), chosen.end(), candidate) == chosen.end()) {
            target = candidate;
            break;
          }
        }
      }
      chosen.push_back(target);
    }
    for (NodeId target : chosen) {
      list.push_back({target, t});
      stubs.push_back(target);
      stubs.push_back(t);
    }
  }
  return graph_from_edge_list(n, list);
}

}  // namespace

Graph generate_graph(const ExperimentConfig& config, std::uint64_t seed) {
  auto rng = make_rng(seed);
  switch (config.graph_model) {
    case GraphModel::kErdosRenyi:
      return erdos_renyi(config.num_nodes, config.edge_probability, config.gamma, rng);
    case GraphModel::kBarabasiAlbert:
      return barabasi_albert(config.num_nodes, config.attach_edges, rng);
    case GraphModel::kFile:
      return read_edge_list_file(config.graph_file);
  }
  throw std::logic_error("generate_graph: unhandled graph model");
}

namespace {

Edge normalized(NodeId a, NodeId b) { return {std::min(a, b), std::max(a, b)}; }

bool rewiring_valid(const Graph& g, const Rewiring& r) {
  const NodeId ids[4] = {r.u, r.v, r.u2, r.v2};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (ids[i] == ids[j]) return false;
  return g.has_edge(r.u, r.v) && g.has_edge(r.u2, r.v2) && !g.has_edge(r.u, r.u2) &&
         !g.has_edge(r.u, r.v2) && !g.has_edge(r.v, r.u2) && !g.has_edge(r.v, r.v2);
}

constexpr std::size_t kAttemptsPerRewiring = 1000;

// Shared endpoint mask for the degree-targeted strategies: the q = max(n/4
// rounded up, 4) nodes with the highest (or lowest) degrees, ties broken by
// node index so the selection is reproducible.
std::vector<char> quartile_mask(const Graph& g, bool top) {
  const std::size_t n = g.num_nodes();
  if (n < 4)
    throw std::invalid_argument("degree-quartile strategy needs at least 4 nodes, graph has " +
                                std::to_string(n));
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&g](NodeId a, NodeId b) {
    const std::size_t da = g.degree(a), db = g.degree(b);
    return da != db ? da < db : a < b;
  });
  const std::size_t q = std::max<std::size_t>((n + 3) / 4, 4);
  std::vector<char> mask(n, 0);
  for (std::size_t i = 0; i < q; ++i) mask[top ? order[n - 1 - i] : order[i]] = 1;
  return mask;
}

PlanSelection masked_plan(const Graph& g, std::size_t count, std::mt19937_64& rng,
                          const std::vector<char>& mask) {
  PlanSelection out;
  out.requested = count;
  Graph current = g;
  std::vector<Edge> pool;
  for (const Edge& e : current.edges())
    if (mask[e.u] && mask[e.v]) pool.push_back(e);

  for (std::size_t step = 0; step < count; ++step) {
    if (pool.size() < 2) break;
    bool placed = false;
    for (std::size_t attempt = 0; attempt < kAttemptsPerRewiring && !placed; ++attempt) {
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      const std::size_t i = pick(rng);
      const std::size_t j = pick(rng);
      if (i == j) continue;
      const Edge e1 = pool[i];
      Edge e2 = pool[j];
      if (std::uniform_int_distribution<int>(0, 1)(rng) == 1) std::swap(e2.u, e2.v);
      const Rewiring r{e1.u, e1.v, e2.u, e2.v};
      if (!rewiring_valid(current, r)) continue;
      current = apply_rewiring(current, r);
      out.plan.push_back(r);
      std::erase(pool, e1);
      std::erase(pool, normalized(e2.u, e2.v));
      pool.push_back(normalized(r.u, r.u2));  // endpoints stay inside the mask
      pool.push_back(normalized(r.v, r.v2));
      placed = true;
    }
    if (!placed) break;
  }
  return out;
}

PlanSelection localized_plan(const Graph& g, std::size_t count, std::mt19937_64& rng,
                             NodeId focus) {
  if (focus >= g.num_nodes())
    throw std::out_of_range("localized strategy: focus node " + std::to_string(focus) +
                            " out of range (n = " + std::to_string(g.num_nodes()) + ")");
  PlanSelection out;
  out.requested = count;
  Graph current = g;
  std::vector<Edge> pool = current.edges();

  for (std::size_t step = 0; step < count; ++step) {
    if (current.degree(focus) == 0 || pool.size() < 2) break;
    bool placed = false;
    for (std::size_t attempt = 0; attempt < kAttemptsPerRewiring && !placed; ++attempt) {
      const auto nbrs = current.neighbors(focus);
      const NodeId v =
          nbrs[std::uniform_int_distribution<std::size_t>(0, nbrs.size() - 1)(rng)];
      Edge e2 = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
      if (std::uniform_int_distribution<int>(0, 1)(rng) == 1) std::swap(e2.u, e2.v);
      const Rewiring r{focus, v, e2.u, e2.v};
      if (!rewiring_valid(current, r)) continue;
      current = apply_rewiring(current, r);
      out.plan.push_back(r);
      std::erase(pool, normalized(focus, v));
      std::erase(pool, normalized(e2.u, e2.v));
      pool.push_back(normalized(r.u, r.u2));
      pool.push_back(normalized(r.v, r.v2));
      placed = true;
    }
    if (!placed) break;
  }
  return out;
}

}  // namespace

PlanSelection select_rewirings(const Graph& g, Strategy strategy, std::size_t count,
                               std::uint64_t seed, NodeId focus) {
  auto rng = make_rng(seed);
  switch (strategy) {
    case Strategy::kRandom:
      return random_plan(g, count, seed);
    case Strategy::kHighDegree:
      return masked_plan(g, count, rng, quartile_mask(g, true));
    case Strategy::kLowDegree:
      return masked_plan(g, count, rng, quartile_mask(g, false));
    case Strategy::kLocalized:
      return localized_plan(g, count, rng, focus);
  }
  throw std::logic_error("select_rewirings: unhandled strategy");
}

namespace {

constexpr double kBoundSlack = 1e-9;        // absolute play for bound comparisons
constexpr double kRowNormTol = 1e-12;       // closed form vs direct row sums
constexpr double kZeroDistance = 1e-12;     // below this, slack becomes "inf"

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void flag(TrialReport& report, const std::string& what) {
  report.violation = true;
  if (!report.note.empty()) report.note += "; ";
  report.note += what;
}

Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file '" + path + "'");
  return read_matrix_csv(in);
}

struct TrialInputs {
  Graph graph;
  PlanSelection selection;
};

TrialInputs trial_inputs(const ExperimentConfig& config, std::uint64_t subseed) {
  TrialInputs in;
  in.graph = generate_graph(config, mix_seed(subseed, 0));
  in.selection = select_rewirings(in.graph, config.strategy, config.rewirings,
                                  mix_seed(subseed, 1), config.focus_node);
  return in;
}

void validate_config(const ExperimentConfig& config) {
  if (config.trials == 0) throw std::invalid_argument("config: trials must be >= 1");
  if (!(config.tol > 0.0)) throw std::invalid_argument("config: tol must be positive");
  if (config.measure != MeasureKind::kFilter && config.gamma != 1.0)
    throw std::invalid_argument(
        "config: the sgcn and gcn measures require gamma = 1 (the propagation operator "
        "they are defined over)");
  if (config.graph_model == GraphModel::kFile && config.graph_file.empty())
    throw std::invalid_argument("config: graph model 'file' needs a graph file path");
  if (config.measure == MeasureKind::kGcn && !config.weights_files.empty() &&
      config.weights_files.size() != config.depth)
    throw std::invalid_argument("config: expected " + std::to_string(config.depth) +
                                " weight files, got " +
                                std::to_string(config.weights_files.size()));
  if (config.measure == MeasureKind::kSgcn && config.weights_files.size() > 1)
    throw std::invalid_argument("config: the sgcn measure takes a single weight file");
}

}  // namespace

TrialReport run_single_trial(const ExperimentConfig& config, std::size_t trial) {
  const auto start = std::chrono::steady_clock::now();
  TrialReport report;
  report.trial = trial;
  report.subseed = mix_seed(config.seed, trial);
  report.gamma = config.gamma;
  report.requested_rewirings = config.rewirings;

  TrialInputs in = trial_inputs(config, report.subseed);
  report.num_nodes = in.graph.num_nodes();
  report.num_edges = in.graph.num_edges();
  report.applied_rewirings = in.selection.plan.size();
  report.shortfall = in.selection.shortfall();

  PlanApplication applied = apply_plan(in.graph, in.selection.plan);
  const ShiftOperator original = build_shift(in.graph, config.gamma);
  const ShiftOperator perturbed = build_shift(applied.perturbed, config.gamma);
  const ErrorMatrix err = error_matrix(original, perturbed);

  report.norm_max = norm_max(err);
  report.norm_two = norm_two(err, config.tol);
  report.norm_one = norm_one(err);
  report.rewiring_bound = rewiring_bound(in.graph, applied.summary, config.gamma);

  const double two_eps = kBoundSlack + 1e-6 * report.norm_two;
  if (report.norm_max > report.norm_two + two_eps)
    flag(report, "max entry " + fmt17(report.norm_max) + " exceeds spectral norm " +
                     fmt17(report.norm_two));
  if (report.norm_two > report.norm_one + two_eps)
    flag(report, "spectral norm " + fmt17(report.norm_two) + " exceeds induced 1-norm " +
                     fmt17(report.norm_one));
  if (report.norm_one > report.rewiring_bound + kBoundSlack)
    flag(report, "induced 1-norm " + fmt17(report.norm_one) + " exceeds rewiring bound " +
                     fmt17(report.rewiring_bound));

  for (NodeId u = 0; u < in.graph.num_nodes(); ++u) {
    double direct = 0.0;
    for (std::size_t j = 0; j < err.values.cols(); ++j) direct += std::fabs(err.values(u, j));
    const double closed = row_norm_closed_form(in.graph, applied.summary, config.gamma, u);
    if (std::fabs(direct - closed) > kRowNormTol) {
      flag(report, "row norm mismatch at node " + std::to_string(u) + ": closed form " +
                       fmt17(closed) + " vs direct " + fmt17(direct));
      break;
    }
  }

  switch (config.measure) {
    case MeasureKind::kFilter: {
      PolynomialFilter f;
      if (config.fixed_filter) {
        f = *config.fixed_filter;
      } else {
        auto rng = make_rng(mix_seed(report.subseed, 2));
        std::uniform_real_distribution<double> coeff(-1.0, 1.0);
        std::vector<double> coefficients(config.filter_order + 1);
        for (double& c : coefficients) c = coeff(rng);
        f = make_filter(std::move(coefficients));
      }
      report.distance = filter_distance(f, original, perturbed, config.tol);
      report.bound = filter_stability_bound(f, report.norm_two);
      report.chain_bound = filter_stability_bound(f, report.rewiring_bound);
      break;
    }
    case MeasureKind::kSgcn: {
      const FeatureMatrix x =
          config.features_file.empty()
              ? random_feature_matrix(report.num_nodes, config.num_features,
                                      mix_seed(report.subseed, 2))
              : make_feature_matrix(read_matrix_file(config.features_file));
      const Matrix w = config.weights_files.empty()
                           ? random_weights(x.num_features(), config.num_classes,
                                            mix_seed(report.subseed, 3))
                           : read_matrix_file(config.weights_files.front());
      const SgcnModel model{config.power, w};
      const Matrix diff =
          kern::subtract(sgcn_logits(model, perturbed, x), sgcn_logits(model, original, x));
      const double wn = operator_norm(w, config.tol);
      report.distance = kern::frobenius(diff);
      report.bound =
          sgcn_logit_bound(x.num_features(), config.power, report.norm_two, wn);
      report.chain_bound =
          sgcn_logit_bound(x.num_features(), config.power, report.rewiring_bound, wn);
      break;
    }
    case MeasureKind::kGcn: {
      const FeatureMatrix x =
          config.features_file.empty()
              ? random_feature_matrix(report.num_nodes, config.num_features,
                                      mix_seed(report.subseed, 2))
              : make_feature_matrix(read_matrix_file(config.features_file));
      GcnModel model;
      std::vector<double> norms;
      for (std::size_t l = 0; l < config.depth; ++l) {
        const std::size_t cols =
            l + 1 == config.depth ? config.num_classes : x.num_features();
        Matrix w = config.weights_files.empty()
                       ? random_weights(x.num_features(), cols,
                                        mix_seed(report.subseed, 3 + l))
                       : read_matrix_file(config.weights_files[l]);
        norms.push_back(operator_norm(w, config.tol));
        model.layers.push_back(std::move(w));
      }
      const Matrix diff =
          kern::subtract(gcn_forward(model, perturbed, x), gcn_forward(model, original, x));
      report.distance = kern::frobenius(diff);
      report.bound =
          gcn_output_bound(x.num_features(), config.depth, report.norm_two, norms);
      report.chain_bound = rewired_output_bound(in.graph, applied.summary, x.num_features(),
                                                config.depth, norms);
      break;
    }
  }

  if (report.distance > report.bound + kBoundSlack)
    flag(report, "distance " + fmt17(report.distance) + " exceeds bound " +
                     fmt17(report.bound));
  if (report.bound > report.chain_bound + kBoundSlack)
    flag(report, "bound " + fmt17(report.bound) + " exceeds rewiring-chained bound " +
                     fmt17(report.chain_bound));

  report.slack = report.distance < kZeroDistance
                     ? std::numeric_limits<double>::infinity()
                     : report.bound / report.distance;
  report.chain_slack = report.distance < kZeroDistance
                           ? std::numeric_limits<double>::infinity()
                           : report.chain_bound / report.distance;

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

VerificationResult run_verification(const ExperimentConfig& config) {
  validate_config(config);
  const auto start = std::chrono::steady_clock::now();
  VerificationResult result;
  result.trials.resize(config.trials);
  const std::int64_t trials = static_cast<std::int64_t>(config.trials);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t t = 0; t < trials; ++t) {
    const std::size_t trial = static_cast<std::size_t>(t);
    try {
      result.trials[trial] = run_single_trial(config, trial);
    } catch (const std::exception& e) {
      TrialReport report;
      report.trial = trial;
      report.subseed = mix_seed(config.seed, trial);
      report.gamma = config.gamma;
      report.requested_rewirings = config.rewirings;
      report.violation = true;
      report.note = std::string("trial aborted: ") + e.what();
      result.trials[trial] = std::move(report);
    }
  }
  for (const TrialReport& r : result.trials) result.any_violation |= r.violation;
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

TrialArtifacts materialize_trial(const ExperimentConfig& config, std::size_t trial) {
  TrialInputs in = trial_inputs(config, mix_seed(config.seed, trial));
  return TrialArtifacts{std::move(in.graph), std::move(in.selection.plan)};
}

std::string report_csv(const VerificationResult& result, const ExperimentConfig& config) {
  std::string out =
      "trial,subseed,n,edges,gamma,kind,strategy,requested_rewirings,applied_rewirings,"
      "shortfall,norm_max,norm_two,norm_one,rewiring_bound,distance,bound,chain_bound,"
      "slack,chain_slack,violation\n";
  for (const TrialReport& r : result.trials) {
    out += std::to_string(r.trial);
    out += ',';
    out += std::to_string(r.subseed);
    out += ',';
    out += std::to_string(r.num_nodes);
    out += ',';
    out += std::to_string(r.num_edges);
    out += ',';
    out += fmt17(r.gamma);
    out += ',';
    out += to_string(config.measure);
    out += ',';
    out += to_string(config.strategy);
    out += ',';
    out += std::to_string(r.requested_rewirings);
    out += ',';
    out += std::to_string(r.applied_rewirings);
    out += ',';
    out += r.shortfall ? '1' : '0';
    out += ',';
    out += fmt17(r.norm_max);
    out += ',';
    out += fmt17(r.norm_two);
    out += ',';
    out += fmt17(r.norm_one);
    out += ',';
    out += fmt17(r.rewiring_bound);
    out += ',';
    out += fmt17(r.distance);
    out += ',';
    out += fmt17(r.bound);
    out += ',';
    out += fmt17(r.chain_bound);
    out += ',';
    out += std::isfinite(r.slack) ? fmt17(r.slack) : "inf";
    out += ',';
    out += std::isfinite(r.chain_slack) ? fmt17(r.chain_slack) : "inf";
    out += ',';
    out += r.violation ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::string summary_json(const VerificationResult& result, const ExperimentConfig& config) {
  nlohmann::ordered_json j;
  j["config"]["seed"] = config.seed;
  switch (config.graph_model) {
    case GraphModel::kErdosRenyi:
      j["config"]["graph"] = {{"model", "erdos-renyi"},
                              {"n", config.num_nodes},
                              {"p", config.edge_probability}};
      break;
    case GraphModel::kBarabasiAlbert:
      j["config"]["graph"] = {{"model", "barabasi-albert"},
                              {"n", config.num_nodes},
                              {"attach_edges", config.attach_edges}};
      break;
    case GraphModel::kFile:
      j["config"]["graph"] = {{"model", "file"}, {"path", config.graph_file}};
      break;
  }
  j["config"]["gamma"] = config.gamma;
  j["config"]["rewirings"] = config.rewirings;
  j["config"]["strategy"] = to_string(config.strategy);
  j["config"]["measure"] = to_string(config.measure);
  j["config"]["trials"] = config.trials;
  j["config"]["tol"] = config.tol;

  std::size_t violations = 0, shortfalls = 0, infinite = 0;
  std::vector<double> slacks;
  for (const TrialReport& r : result.trials) {
    violations += r.violation ? 1 : 0;
    shortfalls += r.shortfall ? 1 : 0;
    if (std::isfinite(r.slack))
      slacks.push_back(r.slack);
    else
      ++infinite;
  }
  j["trials"] = result.trials.size();
  j["violations"] = violations;
  j["shortfall_trials"] = shortfalls;
  j["infinite_slack_trials"] = infinite;
  if (!slacks.empty()) {
    std::sort(slacks.begin(), slacks.end());
    j["slack"]["min"] = slacks.front();
    j["slack"]["median"] = slacks[slacks.size() / 2];
    j["slack"]["max"] = slacks.back();
  } else {
    j["slack"] = nullptr;
  }
  j["wall_seconds"] = result.wall_seconds;
  j["pass"] = !result.any_violation;
  return j.dump(2) + "\n";
}

std::string run_experiment_csv(const ExperimentConfig& config,
                               const std::vector<double>& gammas,
                               const std::vector<Strategy>& strategies) {
  if (gammas.empty() || strategies.empty())
    throw std::invalid_argument("experiment: needs at least one gamma and one strategy");
  if (config.measure != MeasureKind::kFilter)
    for (double gamma : gammas)
      if (gamma != 1.0)
        throw std::invalid_argument(
            "experiment: gamma sweeps away from 1 are only defined for the filter measure");

  static const char* kMetrics[] = {"norm_max",       "norm_two",  "norm_one",
                                   "rewiring_bound", "distance",  "bound",
                                   "chain_bound",    "applied_rewirings"};
  std::string out = "gamma,strategy,trial,metric,value\n";
  for (double gamma : gammas) {
    for (Strategy strategy : strategies) {
      ExperimentConfig local = config;
      local.gamma = gamma;
      local.strategy = strategy;
      const VerificationResult result = run_verification(local);
      for (const TrialReport& r : result.trials) {
        const double values[] = {r.norm_max,
                                 r.norm_two,
                                 r.norm_one,
                                 r.rewiring_bound,
                                 r.distance,
                                 r.bound,
                                 r.chain_bound,
                                 static_cast<double>(r.applied_rewirings)};
        for (std::size_t k = 0; k < std::size(kMetrics); ++k) {
          out += fmt17(gamma);
          out += ',';
          out += to_string(strategy);
          out += ',';
          out += std::to_string(r.trial);
          out += ',';
          out += kMetrics[k];
          out += ',';
          out += fmt17(values[k]);
          out += '\n';
        }
      }
    }
  }
  return out;
}

}  // namespace graphstab
