#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "graphstab/graph.hpp"
#include "graphstab/shift.hpp"

namespace graphstab {

// Degree-preserving double edge rewiring: deletes (u, v) and (u2, v2), adds
// (u, u2) and (v, v2). Valid only when all four endpoints are distinct, both
// deleted edges exist, and neither u nor v is adjacent to u2 or v2.
struct Rewiring {
  NodeId u;
  NodeId v;
  NodeId u2;
  NodeId v2;
  friend bool operator==(const Rewiring&, const Rewiring&) = default;
};

using RewiringPlan = std::vector<Rewiring>;

// Applies one rewiring, rejecting it with the violated condition named.
Graph apply_rewiring(const Graph& g, const Rewiring& r);

// Per-node bookkeeping over a plan applied in sequence. deleted/added are the
// net neighbourhood changes between the original and the final graph, so a
// later rewiring that restores an earlier deletion cancels out of both;
// involvement counts raw participations regardless of cancellation.
struct RewiringSummary {
  std::vector<std::size_t> involvement;
  std::vector<std::vector<NodeId>> deleted;
  std::vector<std::vector<NodeId>> added;
  std::vector<std::size_t> degrees;  // original graph; rewiring preserves them

  // Smallest original-graph degree among the net-changed neighbours of u;
  // empty when nothing changed at u.
  std::optional<std::size_t> min_changed_degree(NodeId u) const;
};

struct PlanApplication {
  Graph perturbed;
  RewiringSummary summary;
};

// Applies the plan front to back; each step sees the graph produced by the
// previous one.
PlanApplication apply_plan(const Graph& g, const RewiringPlan& plan);

// Difference of two shift operators built over the same node set with the
// same gamma.
struct ErrorMatrix {
  Matrix values;
  double gamma;
};

ErrorMatrix error_matrix(const ShiftOperator& original, const ShiftOperator& perturbed);

double norm_max(const ErrorMatrix& e);
double norm_one(const ErrorMatrix& e);
double norm_two(const ErrorMatrix& e, double tol = kDefaultNormTol,
                SpectralNormStats* stats = nullptr);

// Row 1-norm of the error matrix at node u, computed from the degree data
// alone: (1/sqrt(d_u+gamma)) * sum over net-changed neighbours v of
// 1/sqrt(d_v+gamma). Exact under degree preservation, which is re-checked
// against g.
double row_norm_closed_form(const Graph& g, const RewiringSummary& summary, double gamma,
                            NodeId u);

// Single node's contribution to the rewiring bound:
// 2 r / sqrt((degree+gamma) (min_changed+gamma)).
double rewiring_bound_term(std::size_t involvement, std::size_t degree,
                           std::size_t min_changed_degree, double gamma);

// max_u 2 R_u / sqrt((d_u+gamma)(delta_u+gamma)), an upper bound on the
// induced 1-norm (hence the spectral norm) of the error matrix. Nodes whose
// net change sets are empty contribute zero: their error rows vanish.
double rewiring_bound(const Graph& g, const RewiringSummary& summary, double gamma);

struct PlanSelection {
  RewiringPlan plan;
  std::size_t requested = 0;

  bool shortfall() const noexcept { return plan.size() < requested; }
};

// Samples count rewirings uniformly: two disjoint edges plus a coin flip for
// the pairing, retried until the validity conditions hold, up to 1000
// attempts per rewiring. A plan shorter than requested signals candidate
// exhaustion, never an error.
PlanSelection random_plan(const Graph& g, std::size_t count, std::uint64_t seed);

// Text format: one "u v u2 v2" line per rewiring, '#' comments allowed.
RewiringPlan read_plan(std::istream& in);
void write_plan(const RewiringPlan& plan, std::ostream& out);
RewiringPlan read_plan_file(const std::string& path);
void write_plan_file(const RewiringPlan& plan, const std::string& path);

}  // namespace graphstab
