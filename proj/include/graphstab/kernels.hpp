#pragma once

#include <span>

#include "graphstab/matrix.hpp"

namespace graphstab::kern {

// OpenMP kernels. Each output element is produced by exactly one thread with
// a fixed serial accumulation order, so results are bit-identical across
// runs, schedules and thread counts. Scalar reductions over matrices combine
// per-row partials in row order for the same reason.

// out = a * x
void matvec(const Matrix& a, std::span<const double> x, std::span<double> out);

// out = a^T * x
void tmatvec(const Matrix& a, std::span<const double> x, std::span<double> out);

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix subtract(const Matrix& a, const Matrix& b);

// max_ij |a_ij|
double max_abs(const Matrix& a);

// max_i sum_j |a_ij|; equals the induced 1-norm for symmetric matrices
double max_row_abs_sum(const Matrix& a);

double frobenius(const Matrix& a);

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);

// Single-threaded textbook implementations, kept as the reference the
// parallel kernels are tested and benchmarked against.
namespace serial {

void matvec(const Matrix& a, std::span<const double> x, std::span<double> out);
void tmatvec(const Matrix& a, std::span<const double> x, std::span<double> out);
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix subtract(const Matrix& a, const Matrix& b);
double max_abs(const Matrix& a);
double max_row_abs_sum(const Matrix& a);
double frobenius(const Matrix& a);
double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);

}  // namespace serial

}  // namespace graphstab::kern
