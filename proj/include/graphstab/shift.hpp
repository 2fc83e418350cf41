#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphstab/graph.hpp"
#include "graphstab/matrix.hpp"

namespace graphstab {

inline constexpr double kDefaultNormTol = 1e-10;
inline constexpr double kReconstructionTol = 1e-8;

// Fixed seed for the power iteration start vector; recorded here so runs are
// reproducible by construction.
inline constexpr std::uint64_t kPowerStartSeed = 0x715C0FFEE5EEDULL;

inline constexpr std::size_t kPowerIterationCap = 10000;

// Degree-normalised adjacency operator of a graph with self-loop weight
// gamma: diagonal entries gamma / (d_u + gamma), off-diagonal entries
// 1 / sqrt((d_u + gamma) (d_v + gamma)) wherever an edge exists, zero
// elsewhere. Symmetric with spectrum inside [-1, 1]; 1 is always attained.
class ShiftOperator {
 public:
  ShiftOperator(Graph graph, double gamma, Matrix matrix)
      : graph_(std::move(graph)), gamma_(gamma), matrix_(std::move(matrix)) {}

  const Graph& graph() const noexcept { return graph_; }
  double gamma() const noexcept { return gamma_; }
  const Matrix& matrix() const noexcept { return matrix_; }
  std::size_t dim() const noexcept { return matrix_.rows(); }

 private:
  Graph graph_;
  double gamma_;
  Matrix matrix_;
};

// Builds the operator. gamma must be finite and >= 0, and strictly positive
// when the graph has an isolated node (otherwise that row has no mass to
// normalise by).
ShiftOperator build_shift(const Graph& g, double gamma);

struct SpectralDecomposition {
  std::vector<double> eigenvalues;  // ascending
  Matrix eigenvectors;              // orthonormal, column k pairs with eigenvalues[k]
};

// Thrown when power iteration exhausts its iteration budget without either
// converging or detecting the oscillation pattern that the dense fallback
// handles. Carries the last Rayleigh estimate for diagnosis.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& msg, double last_estimate, std::size_t iterations)
      : std::runtime_error(msg), last_estimate_(last_estimate), iterations_(iterations) {}

  double last_estimate() const noexcept { return last_estimate_; }
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  double last_estimate_;
  std::size_t iterations_;
};

struct SpectralNormStats {
  std::size_t iterations = 0;
  bool dense_fallback = false;
};

// Largest absolute eigenvalue of a symmetric matrix. Power iteration on m
// itself with a Rayleigh-quotient stopping test; when the quotient stalls at
// an uncertified value (the signature of a +/- eigenvalue tie, where the
// iterate oscillates with period 2) the dense Jacobi solver takes over.
double spectral_norm(const Matrix& m, double tol = kDefaultNormTol,
                     SpectralNormStats* stats = nullptr);

// Cyclic Jacobi eigensolver for symmetric matrices. Quadratic cost per sweep
// but exact to roundoff, which is what the tests and the power iteration
// fallback need at the sizes this project runs at.
SpectralDecomposition jacobi_eigensolve(const Matrix& m);

SpectralDecomposition eigendecompose(const ShiftOperator& s);

// Graph Fourier transform: coefficients of x in the eigenvector basis.
Signal gft(const SpectralDecomposition& d, const Signal& x);
Signal inverse_gft(const SpectralDecomposition& d, const Signal& coeffs);

namespace detail {

enum class PowerStatus { kConverged, kStalled, kBudgetExhausted };

struct PowerOutcome {
  double estimate = 0.0;  // signed Rayleigh quotient at exit
  std::size_t iterations = 0;
  PowerStatus status = PowerStatus::kBudgetExhausted;
};

PowerOutcome power_iteration(const Matrix& m, double tol, std::size_t max_iterations,
                             std::uint64_t seed);

double spectral_norm_impl(const Matrix& m, double tol, std::size_t max_iterations,
                          SpectralNormStats* stats);

}  // namespace detail

}  // namespace graphstab
