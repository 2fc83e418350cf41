#include "graphstab/rewiring.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "graphstab/kernels.hpp"
#include "graphstab/random.hpp"

namespace graphstab {

namespace {

std::string describe(const Rewiring& r) {
  return "rewiring ((" + std::to_string(r.u) + ", " + std::to_string(r.v) + "), (" +
         std::to_string(r.u2) + ", " + std::to_string(r.v2) + "))";
}

bool rewiring_valid(const Graph& g, const Rewiring& r) {
  const NodeId ids[4] = {r.u, r.v, r.u2, r.v2};
  for (NodeId id : ids)
    if (id >= g.num_nodes()) return false;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (ids[i] == ids[j]) return false;
  return g.has_edge(r.u, r.v) && g.has_edge(r.u2, r.v2) && !g.has_edge(r.u, r.u2) &&
         !g.has_edge(r.u, r.v2) && !g.has_edge(r.v, r.u2) && !g.has_edge(r.v, r.v2);
}

}  // namespace

Graph apply_rewiring(const Graph& g, const Rewiring& r) {
  const NodeId ids[4] = {r.u, r.v, r.u2, r.v2};
  for (NodeId id : ids)
    if (id >= g.num_nodes())
      throw std::out_of_range(describe(r) + ": node " + std::to_string(id) +
                              " out of range (n = " + std::to_string(g.num_nodes()) + ")");
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (ids[i] == ids[j])
        throw std::invalid_argument(describe(r) + ": endpoints are not distinct (node " +
                                    std::to_string(ids[i]) + " repeats)");
  auto require_edge = [&](NodeId a, NodeId b) {
    if (!g.has_edge(a, b))
      throw std::invalid_argument(describe(r) + ": edge (" + std::to_string(a) + ", " +
                                  std::to_string(b) + ") to delete is not present");
  };
  auto forbid_edge = [&](NodeId a, NodeId b) {
    if (g.has_edge(a, b))
      throw std::invalid_argument(describe(r) + ": nodes " + std::to_string(a) + " and " +
                                  std::to_string(b) + " are already adjacent");
  };
  require_edge(r.u, r.v);
  require_edge(r.u2, r.v2);
  forbid_edge(r.u, r.u2);
  forbid_edge(r.u, r.v2);
  forbid_edge(r.v, r.u2);
  forbid_edge(r.v, r.v2);

  Graph out = delete_edge(g, r.u, r.v);
  out = delete_edge(out, r.u2, r.v2);
  out = add_edge(out, r.u, r.u2);
  out = add_edge(out, r.v, r.v2);
  return out;
}

std::optional<std::size_t> RewiringSummary::min_changed_degree(NodeId u) const {
  std::optional<std::size_t> best;
  auto scan = [&](const std::vector<NodeId>& nodes) {
    for (NodeId v : nodes) {
      const std::size_t d = degrees[v];
      if (!best || d < *best) best = d;
    }
  };
  scan(deleted[u]);
  scan(added[u]);
  return best;
}

PlanApplication apply_plan(const Graph& g, const RewiringPlan& plan) {
  const std::size_t n = g.num_nodes();
  RewiringSummary summary;
  summary.involvement.assign(n, 0);
  summary.deleted.resize(n);
  summary.added.resize(n);
  summary.degrees = g.degree_sequence();

  Graph current = g;
  for (const Rewiring& r : plan) {
    current = apply_rewiring(current, r);
    for (NodeId id : {r.u, r.v, r.u2, r.v2}) ++summary.involvement[id];
  }

  if (current.degree_sequence() != summary.degrees)
    throw std::logic_error("apply_plan: degree sequence changed, rewiring is broken");

  // Net change sets come from diffing the neighbourhoods, which makes the
  // delete-then-restore cancellation automatic.
  for (NodeId u = 0; u < n; ++u) {
    const auto before = g.neighbors(u);
    const auto after = current.neighbors(u);
    std::set_difference(before.begin(), before.end(), after.begin(), after.end(),
                        std::back_inserter(summary.deleted[u]));
    std::set_difference(after.begin(), after.end(), before.begin(), before.end(),
                        std::back_inserter(summary.added[u]));
  }
  return PlanApplication{std::move(current), std::move(summary)};
}

ErrorMatrix error_matrix(const ShiftOperator& original, const ShiftOperator& perturbed) {
  if (original.dim() != perturbed.dim())
    throw std::invalid_argument("error_matrix: operator dimensions differ (" +
                                std::to_string(original.dim()) + " vs " +
                                std::to_string(perturbed.dim()) + ")");
  if (original.gamma() != perturbed.gamma())
    throw std::invalid_argument("error_matrix: operators built with different gamma (" +
                                std::to_string(original.gamma()) + " vs " +
                                std::to_string(perturbed.gamma()) + ")");
  return ErrorMatrix{kern::subtract(perturbed.matrix(), original.matrix()),
                     original.gamma()};
}

double norm_max(const ErrorMatrix& e) { return kern::max_abs(e.values); }

double norm_one(const ErrorMatrix& e) { return kern::max_row_abs_sum(e.values); }

double norm_two(const ErrorMatrix& e, double tol, SpectralNormStats* stats) {
  return spectral_norm(e.values, tol, stats);
}

double row_norm_closed_form(const Graph& g, const RewiringSummary& summary, double gamma,
                            NodeId u) {
  if (!std::isfinite(gamma) || gamma < 0.0)
    throw std::invalid_argument("row_norm_closed_form: gamma must be finite and >= 0");
  const std::size_t n = g.num_nodes();
  if (summary.degrees.size() != n)
    throw std::invalid_argument("row_norm_closed_form: summary describes " +
                                std::to_string(summary.degrees.size()) +
                                " nodes, graph has " + std::to_string(n));
  if (u >= n)
    throw std::out_of_range("row_norm_closed_form: node " + std::to_string(u) +
                            " out of range (n = " + std::to_string(n) + ")");
  if (g.degree_sequence() != summary.degrees)
    throw std::invalid_argument(
        "row_norm_closed_form: degree sequence mismatch, the closed form only holds "
        "under degree preservation");
  double changed = 0.0;
  for (NodeId v : summary.deleted[u])
    changed += 1.0 / std::sqrt(static_cast<double>(summary.degrees[v]) + gamma);
  for (NodeId v : summary.added[u])
    changed += 1.0 / std::sqrt(static_cast<double>(summary.degrees[v]) + gamma);
  return changed / std::sqrt(static_cast<double>(summary.degrees[u]) + gamma);
}

double rewiring_bound_term(std::size_t involvement, std::size_t degree,
                           std::size_t min_changed_degree, double gamma) {
  if (!std::isfinite(gamma) || gamma < 0.0)
    throw std::invalid_argument("rewiring_bound_term: gamma must be finite and >= 0");
  if (involvement == 0) return 0.0;
  const double du = static_cast<double>(degree) + gamma;
  const double dmin = static_cast<double>(min_changed_degree) + gamma;
  if (du <= 0.0 || dmin <= 0.0)
    throw std::invalid_argument(
        "rewiring_bound_term: degree + gamma must be positive for involved nodes");
  return 2.0 * static_cast<double>(involvement) / std::sqrt(du * dmin);
}

double rewiring_bound(const Graph& g, const RewiringSummary& summary, double gamma) {
  const std::size_t n = g.num_nodes();
  if (summary.degrees.size() != n || summary.involvement.size() != n)
    throw std::invalid_argument("rewiring_bound: summary does not match graph size");
  if (g.degree_sequence() != summary.degrees)
    throw std::invalid_argument("rewiring_bound: degree sequence mismatch");
  double best = 0.0;
  for (NodeId u = 0; u < n; ++u) {
    if (summary.involvement[u] == 0) continue;
    const auto dmin = summary.min_changed_degree(u);
    // All participations at u cancelled out: the error row is exactly zero.
    if (!dmin) continue;
    best = std::max(best, rewiring_bound_term(summary.involvement[u], summary.degrees[u],
                                              *dmin, gamma));
  }
  return best;
}

PlanSelection random_plan(const Graph& g, std::size_t count, std::uint64_t seed) {
  PlanSelection out;
  out.requested = count;
  if (count == 0) return out;

  auto rng = make_rng(seed);
  Graph current = g;
  std::vector<Edge> edges = current.edges();
  constexpr std::size_t kAttemptsPerRewiring = 1000;

  for (std::size_t step = 0; step < count; ++step) {
    if (edges.size() < 2) break;
    bool placed = false;
    for (std::size_t attempt = 0; attempt < kAttemptsPerRewiring && !placed; ++attempt) {
      std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
      const std::size_t i = pick(rng);
      const std::size_t j = pick(rng);
      if (i == j) continue;
      const Edge e1 = edges[i];
      Edge e2 = edges[j];
      if (std::uniform_int_distribution<int>(0, 1)(rng) == 1) std::swap(e2.u, e2.v);
      const Rewiring r{e1.u, e1.v, e2.u, e2.v};
      if (!rewiring_valid(current, r)) continue;
      current = apply_rewiring(current, r);
      out.plan.push_back(r);
      std::erase(edges, e1);
      std::erase(edges, Edge{std::min(e2.u, e2.v), std::max(e2.u, e2.v)});
      edges.push_back({std::min(r.u, r.u2), std::max(r.u, r.u2)});
      edges.push_back({std::min(r.v, r.v2), std::max(r.v, r.v2)});
      placed = true;
    }
    if (!placed) break;  // candidate exhaustion: return the partial plan
  }
  return out;
}

RewiringPlan read_plan(std::istream& in) {
  RewiringPlan plan;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    long long a, b, c, d;
    if (!(fields >> a)) continue;  // blank or comment-only line
    if (!(fields >> b >> c >> d))
      throw std::invalid_argument("plan line " + std::to_string(line_no) +
                                  ": expected four endpoints");
    std::string extra;
    if (fields >> extra)
      throw std::invalid_argument("plan line " + std::to_string(line_no) +
                                  ": trailing token '" + extra + "'");
    if (a < 0 || b < 0 || c < 0 || d < 0)
      throw std::out_of_range("plan line " + std::to_string(line_no) + ": negative endpoint");
    plan.push_back({static_cast<NodeId>(a), static_cast<NodeId>(b), static_cast<NodeId>(c),
                    static_cast<NodeId>(d)});
  }
  return plan;
}

void write_plan(const RewiringPlan& plan, std::ostream& out) {
  for (const Rewiring& r : plan)
    out << r.u << ' ' << r.v << ' ' << r.u2 << ' ' << r.v2 << '\n';
}

RewiringPlan read_plan_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open plan file '" + path + "'");
  return read_plan(in);
}

void write_plan_file(const RewiringPlan& plan, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open plan file '" + path + "' for writing");
  write_plan(plan, out);
}

}  // namespace graphstab
