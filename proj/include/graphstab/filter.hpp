#pragma once

#include <string>
#include <vector>

#include "graphstab/shift.hpp"

namespace graphstab {

// Polynomial filter sum_k coefficients[k] * lambda^k acting on a shift
// operator. Order is coefficients.size() - 1; at least the constant term
// must be present and every coefficient must be finite.
struct PolynomialFilter {
  std::vector<double> coefficients;

  std::size_t order() const noexcept { return coefficients.size() - 1; }
};

PolynomialFilter make_filter(std::vector<double> coefficients);

// Parses "c0,c1,...,cK" as used by the command line tools.
PolynomialFilter parse_filter(const std::string& text);

// Applies the filter through repeated matvec; never forms matrix powers or
// an eigendecomposition.
Signal apply_filter(const PolynomialFilter& f, const ShiftOperator& s, const Signal& x);

// Dense matrix of the filtered operator sum_k c_k S^k. Quadratic storage;
// meant for norm computations, not for applying filters to signals.
Matrix filter_matrix(const PolynomialFilter& f, const ShiftOperator& s);

// Spectral norm of filter_matrix(f, a) - filter_matrix(f, b). Both operators
// must share the dimension and the gamma they were built with.
double filter_distance(const PolynomialFilter& f, const ShiftOperator& a,
                       const ShiftOperator& b, double tol = kDefaultNormTol);

// Upper bound on filter_distance in terms of the spectral norm of the
// operator difference: sum_{k>=1} k |c_k| * error_norm. Valid because both
// spectra live in [-1, 1].
double filter_stability_bound(const PolynomialFilter& f, double error_norm);

}  // namespace graphstab
