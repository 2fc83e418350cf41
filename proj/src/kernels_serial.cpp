#include "graphstab/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace graphstab::kern::serial {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

void matvec(const Matrix& a, std::span<const double> x, std::span<double> out) {
  require(a.cols() == x.size(), "matvec: x length does not match matrix columns");
  require(a.rows() == out.size(), "matvec: out length does not match matrix rows");
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
    out[i] = acc;
  }
}

void tmatvec(const Matrix& a, std::span<const double> x, std::span<double> out) {
  require(a.rows() == x.size(), "tmatvec: x length does not match matrix rows");
  require(a.cols() == out.size(), "tmatvec: out length does not match matrix columns");
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) acc += a(i, j) * x[i];
    out[j] = acc;
  }
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows(), "matmul: inner dimensions do not match");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      c(i, j) = acc;
    }
  }
  return c;
}

Matrix subtract(const Matrix& a, const Matrix& b) {
  require(a.same_shape(b), "subtract: shapes do not match");
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.values().size(); ++i)
    c.values()[i] = a.values()[i] - b.values()[i];
  return c;
}

double max_abs(const Matrix& a) {
  double best = 0.0;
  for (double v : a.values()) best = std::max(best, std::fabs(v));
  return best;
}

double max_row_abs_sum(const Matrix& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) acc += std::fabs(a(i, j));
    best = std::max(best, acc);
  }
  return best;
}

double frobenius(const Matrix& a) {
  // One running accumulator over all entries; groups roundoff differently
  // from the per-row partials of the parallel kernel on purpose.
  double acc = 0.0;
  for (double v : a.values()) acc += v * v;
  return std::sqrt(acc);
}

double dot(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), "dot: lengths do not match");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

double norm2(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc);
}

}  // namespace graphstab::kern::serial
