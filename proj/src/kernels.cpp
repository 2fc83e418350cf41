#include "graphstab/kernels.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace graphstab::kern {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

void matvec(const Matrix& a, std::span<const double> x, std::span<double> out) {
  require(a.cols() == x.size(), "matvec: x length does not match matrix columns");
  require(a.rows() == out.size(), "matvec: out length does not match matrix rows");
  const std::int64_t rows = static_cast<std::int64_t>(a.rows());
  const std::size_t cols = a.cols();
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < rows; ++i) {
    const double* ai = a.row(static_cast<std::size_t>(i)).data();
    double acc = 0.0;
    for (std::size_t j = 0; j < cols; ++j) acc += ai[j] * x[j];
    out[static_cast<std::size_t>(i)] = acc;
  }
}

void tmatvec(const Matrix& a, std::span<const double> x, std::span<double> out) {
  require(a.rows() == x.size(), "tmatvec: x length does not match matrix rows");
  require(a.cols() == out.size(), "tmatvec: out length does not match matrix columns");
  const std::int64_t cols = static_cast<std::int64_t>(a.cols());
  const std::size_t rows = a.rows();
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < cols; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rows; ++i)
      acc += a(i, static_cast<std::size_t>(j)) * x[i];
    out[static_cast<std::size_t>(j)] = acc;
  }
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows(), "matmul: inner dimensions do not match");
  Matrix c(a.rows(), b.cols());
  const std::int64_t rows = static_cast<std::int64_t>(a.rows());
  const std::size_t inner = a.cols();
  const std::size_t cols = b.cols();
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < rows; ++i) {
    double* ci = c.row(static_cast<std::size_t>(i)).data();
    const double* ai = a.row(static_cast<std::size_t>(i)).data();
    // Accumulates c(i,j) in ascending k order, matching the serial reference.
    for (std::size_t k = 0; k < inner; ++k) {
      const double aik = ai[k];
      const double* bk = b.row(k).data();
      for (std::size_t j = 0; j < cols; ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

Matrix subtract(const Matrix& a, const Matrix& b) {
  require(a.same_shape(b), "subtract: shapes do not match");
  Matrix c(a.rows(), a.cols());
  const std::int64_t total = static_cast<std::int64_t>(a.values().size());
  const double* pa = a.values().data();
  const double* pb = b.values().data();
  double* pc = c.values().data();
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < total; ++i) pc[i] = pa[i] - pb[i];
  return c;
}

double max_abs(const Matrix& a) {
  const std::int64_t total = static_cast<std::int64_t>(a.values().size());
  const double* p = a.values().data();
  double best = 0.0;
#pragma omp parallel for schedule(static) reduction(max : best)
  for (std::int64_t i = 0; i < total; ++i) {
    const double v = std::fabs(p[i]);
    if (v > best) best = v;
  }
  return best;
}

double max_row_abs_sum(const Matrix& a) {
  const std::int64_t rows = static_cast<std::int64_t>(a.rows());
  const std::size_t cols = a.cols();
  double best = 0.0;
#pragma omp parallel for schedule(static) reduction(max : best)
  for (std::int64_t i = 0; i < rows; ++i) {
    const double* ai = a.row(static_cast<std::size_t>(i)).data();
    double acc = 0.0;
    for (std::size_t j = 0; j < cols; ++j) acc += std::fabs(ai[j]);
    if (acc > best) best = acc;
  }
  return best;
}

double frobenius(const Matrix& a) {
  const std::int64_t rows = static_cast<std::int64_t>(a.rows());
  const std::size_t cols = a.cols();
  std::vector<double> partial(a.rows(), 0.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < rows; ++i) {
    const double* ai = a.row(static_cast<std::size_t>(i)).data();
    double acc = 0.0;
    for (std::size_t j = 0; j < cols; ++j) acc += ai[j] * ai[j];
    partial[static_cast<std::size_t>(i)] = acc;
  }
  // Row partials combined in row order: the result does not depend on the
  // thread count.
  double total = 0.0;
  for (double v : partial) total += v;
  return std::sqrt(total);
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

}  // namespace graphstab::kern
