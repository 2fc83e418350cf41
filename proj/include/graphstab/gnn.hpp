#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "graphstab/rewiring.hpp"
#include "graphstab/shift.hpp"

namespace graphstab {

// Tolerance for the unit-column check on feature matrices.
inline constexpr double kFeatureNormTol = 1e-9;

// Node feature matrix (one row per node, one column per feature) whose
// columns all have unit Euclidean norm, so its Frobenius norm is exactly
// sqrt(num_features). Enforced at construction; inputs that fail the check
// are rejected rather than rescaled.
struct FeatureMatrix {
  Matrix values;

  std::size_t num_nodes() const noexcept { return values.rows(); }
  std::size_t num_features() const noexcept { return values.cols(); }
};

FeatureMatrix make_feature_matrix(Matrix values);

// Gaussian features with columns normalised to unit length.
FeatureMatrix random_feature_matrix(std::size_t num_nodes, std::size_t num_features,
                                    std::uint64_t seed);

Matrix random_weights(std::size_t rows, std::size_t cols, std::uint64_t seed);

// Linear graph convolution without intermediate nonlinearities: logits =
// S^power X W. The operator must be built with gamma = 1.
struct SgcnModel {
  std::size_t power;  // >= 1
  Matrix weights;     // num_features x num_classes
};

Matrix sgcn_logits(const SgcnModel& model, const ShiftOperator& s, const FeatureMatrix& x);

// ReLU graph convolution stack: X_l = relu(S X_{l-1} W_l) for all but the
// last layer, which stays linear to produce logits. Hidden weights must be
// square of the feature width; the final layer may be rectangular. Requires
// gamma = 1 like the linear model.
struct GcnModel {
  std::vector<Matrix> layers;

  std::size_t depth() const noexcept { return layers.size(); }
};

Matrix gcn_forward(const GcnModel& model, const ShiftOperator& s, const FeatureMatrix& x);

// All intermediate activations including the input, layer_outputs[l] being
// X_l; the last entry holds the logits.
std::vector<Matrix> gcn_layer_outputs(const GcnModel& model, const ShiftOperator& s,
                                      const FeatureMatrix& x);

// Row-wise softmax with max subtraction.
Matrix softmax_rows(const Matrix& logits);

// Largest singular value, computed as sqrt of the spectral norm of W^T W.
double operator_norm(const Matrix& w, double tol = kDefaultNormTol);

// Frobenius bound on the logit change of the linear model:
// sqrt(num_features) * power * error_norm * weight_norm.
double sgcn_logit_bound(std::size_t num_features, std::size_t power, double error_norm,
                        double weight_norm);

// Frobenius bound on the output change of the ReLU stack:
// sqrt(num_features) * depth * error_norm * prod weight_norms.
double gcn_output_bound(std::size_t num_features, std::size_t depth, double error_norm,
                        std::span<const double> weight_norms);

// Same bound with the error norm replaced by the degree-based rewiring bound
// at gamma = 1, tying the output change directly to the rewiring plan.
double rewired_output_bound(const Graph& g, const RewiringSummary& summary,
                            std::size_t num_features, std::size_t depth,
                            std::span<const double> weight_norms);

}  // namespace graphstab
