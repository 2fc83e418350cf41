#include "graphstab/gnn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "graphstab/kernels.hpp"
#include "graphstab/random.hpp"

namespace graphstab {

namespace {

void check_gamma_one(const ShiftOperator& s, const char* who) {
  if (s.gamma() != 1.0)
    throw std::invalid_argument(std::string(who) +
                                ": operator must be built with gamma = 1, got " +
                                std::to_string(s.gamma()));
}

void check_feature_shape(const ShiftOperator& s, const FeatureMatrix& x, const char* who) {
  if (x.num_nodes() != s.dim())
    throw std::invalid_argument(std::string(who) + ": feature rows " +
                                std::to_string(x.num_nodes()) +
                                " do not match operator dimension " + std::to_string(s.dim()));
}

}  // namespace

FeatureMatrix make_feature_matrix(Matrix values) {
  for (std::size_t j = 0; j < values.cols(); ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < values.rows(); ++i) acc += values(i, j) * values(i, j);
    const double len = std::sqrt(acc);
    if (std::fabs(len - 1.0) > kFeatureNormTol)
      throw std::invalid_argument("feature matrix: column " + std::to_string(j) +
                                  " has norm " + std::to_string(len) +
                                  ", expected 1 within " + std::to_string(kFeatureNormTol));
  }
  return FeatureMatrix{std::move(values)};
}

FeatureMatrix random_feature_matrix(std::size_t num_nodes, std::size_t num_features,
                                    std::uint64_t seed) {
  if (num_nodes == 0 || num_features == 0)
    throw std::invalid_argument("feature matrix: empty shape");
  auto rng = make_rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix values(num_nodes, num_features);
  for (std::size_t j = 0; j < num_features; ++j) {
    double acc = 0.0;
    while (acc == 0.0) {
      for (std::size_t i = 0; i < num_nodes; ++i) {
        values(i, j) = gauss(rng);
        acc += values(i, j) * values(i, j);
      }
    }
    const double len = std::sqrt(acc);
    for (std::size_t i = 0; i < num_nodes; ++i) values(i, j) /= len;
  }
  return FeatureMatrix{std::move(values)};
}

Matrix random_weights(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("weights: empty shape");
  auto rng = make_rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix w(rows, cols);
  for (double& v : w.values()) v = gauss(rng);
  return w;
}

Matrix sgcn_logits(const SgcnModel& model, const ShiftOperator& s, const FeatureMatrix& x) {
  check_gamma_one(s, "sgcn_logits");
  check_feature_shape(s, x, "sgcn_logits");
  if (model.power == 0)
    throw std::invalid_argument("sgcn_logits: power must be >= 1");
  if (model.weights.rows() != x.num_features())
    throw std::invalid_argument("sgcn_logits: weight rows " +
                                std::to_string(model.weights.rows()) +
                                " do not match feature width " +
                                std::to_string(x.num_features()));
  Matrix propagated = x.values;
  for (std::size_t k = 0; k < model.power; ++k)
    propagated = kern::matmul(s.matrix(), propagated);
  return kern::matmul(propagated, model.weights);
}

std::vector<Matrix> gcn_layer_outputs(const GcnModel& model, const ShiftOperator& s,
                                      const FeatureMatrix& x) {
  check_gamma_one(s, "gcn_forward");
  check_feature_shape(s, x, "gcn_forward");
  if (model.layers.empty())
    throw std::invalid_argument("gcn_forward: model needs at least one layer");
  const std::size_t width = x.num_features();
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const Matrix& w = model.layers[l];
    if (w.rows() != width)
      throw std::invalid_argument("gcn_forward: layer " + std::to_string(l) + " expects " +
                                  std::to_string(w.rows()) + " inputs, feature width is " +
                                  std::to_string(width));
    if (l + 1 < model.layers.size() && w.cols() != width)
      throw std::invalid_argument("gcn_forward: hidden layer " + std::to_string(l) +
                                  " must be square (" + std::to_string(w.rows()) + "x" +
                                  std::to_string(w.cols()) + " given)");
  }

  std::vector<Matrix> outputs;
  outputs.reserve(model.layers.size() + 1);
  outputs.push_back(x.values);
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    Matrix next = kern::matmul(kern::matmul(s.matrix(), outputs.back()), model.layers[l]);
    if (l + 1 < model.layers.size())
      for (double& v : next.values()) v = std::max(v, 0.0);
    outputs.push_back(std::move(next));
  }
  return outputs;
}

Matrix gcn_forward(const GcnModel& model, const ShiftOperator& s, const FeatureMatrix& x) {
  return gcn_layer_outputs(model, s, x).back();
}

Matrix softmax_rows(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < logits.cols(); ++j) top = std::max(top, logits(i, j));
    double total = 0.0;
    for (std::size_t j = 0; j < logits.cols(); ++j) {
      out(i, j) = std::exp(logits(i, j) - top);
      total += out(i, j);
    }
    for (std::size_t j = 0; j < logits.cols(); ++j) out(i, j) /= total;
  }
  return out;
}

double operator_norm(const Matrix& w, double tol) {
  if (w.rows() == 0 || w.cols() == 0) return 0.0;
  // Gram matrix is positive semidefinite, so power iteration cannot run into
  // a +/- tie here.
  Matrix gram(w.cols(), w.cols());
  for (std::size_t i = 0; i < w.cols(); ++i)
    for (std::size_t j = 0; j < w.cols(); ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < w.rows(); ++k) acc += w(k, i) * w(k, j);
      gram(i, j) = acc;
    }
  return std::sqrt(spectral_norm(gram, tol));
}

namespace {

void check_bound_inputs(std::size_t num_features, std::size_t depth, double error_norm,
                        const char* who) {
  if (num_features == 0)
    throw std::invalid_argument(std::string(who) + ": num_features must be >= 1");
  if (depth == 0) throw std::invalid_argument(std::string(who) + ": depth must be >= 1");
  if (!std::isfinite(error_norm) || error_norm < 0.0)
    throw std::invalid_argument(std::string(who) + ": error norm must be finite and >= 0");
}

}  // namespace

double sgcn_logit_bound(std::size_t num_features, std::size_t power, double error_norm,
                        double weight_norm) {
  check_bound_inputs(num_features, power, error_norm, "sgcn_logit_bound");
  if (!std::isfinite(weight_norm) || weight_norm < 0.0)
    throw std::invalid_argument("sgcn_logit_bound: weight norm must be finite and >= 0");
  return std::sqrt(static_cast<double>(num_features)) * static_cast<double>(power) *
         error_norm * weight_norm;
}

double gcn_output_bound(std::size_t num_features, std::size_t depth, double error_norm,
                        std::span<const double> weight_norms) {
  check_bound_inputs(num_features, depth, error_norm, "gcn_output_bound");
  if (weight_norms.size() != depth)
    throw std::invalid_argument("gcn_output_bound: expected " + std::to_string(depth) +
                                " weight norms, got " + std::to_string(weight_norms.size()));
  double product = 1.0;
  for (double nw : weight_norms) {
    if (!std::isfinite(nw) || nw < 0.0)
      throw std::invalid_argument("gcn_output_bound: weight norms must be finite and >= 0");
    product *= nw;
  }
  return std::sqrt(static_cast<double>(num_features)) * static_cast<double>(depth) *
         error_norm * product;
}

double rewired_output_bound(const Graph& g, const RewiringSummary& summary,
                            std::size_t num_features, std::size_t depth,
                            std::span<const double> weight_norms) {
  return gcn_output_bound(num_features, depth, rewiring_bound(g, summary, 1.0),
                          weight_norms);
}

}  // namespace graphstab
