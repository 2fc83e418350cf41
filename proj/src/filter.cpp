#include "graphstab/filter.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "graphstab/kernels.hpp"

namespace graphstab {

PolynomialFilter make_filter(std::vector<double> coefficients) {
  if (coefficients.empty())
    throw std::invalid_argument("filter: needs at least the constant coefficient");
  for (std::size_t k = 0; k < coefficients.size(); ++k)
    if (!std::isfinite(coefficients[k]))
      throw std::invalid_argument("filter: coefficient " + std::to_string(k) +
                                  " is not finite");
  return PolynomialFilter{std::move(coefficients)};
}

PolynomialFilter parse_filter(const std::string& text) {
  std::vector<double> coefficients;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      coefficients.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw std::invalid_argument("filter: unparseable coefficient '" + item + "' in '" +
                                  text + "'");
    }
  }
  return make_filter(std::move(coefficients));
}

Signal apply_filter(const PolynomialFilter& f, const ShiftOperator& s, const Signal& x) {
  if (f.coefficients.empty())
    throw std::invalid_argument("apply_filter: empty filter");
  if (x.size() != s.dim())
    throw std::invalid_argument("apply_filter: signal length " + std::to_string(x.size()) +
                                " does not match operator dimension " +
                                std::to_string(s.dim()));
  const std::size_t n = x.size();
  Signal result(n), power = x, next(n);
  for (std::size_t i = 0; i < n; ++i) result[i] = f.coefficients[0] * x[i];
  for (std::size_t k = 1; k < f.coefficients.size(); ++k) {
    kern::matvec(s.matrix(), power, next);
    std::swap(power, next);
    const double ck = f.coefficients[k];
    if (ck == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) result[i] += ck * power[i];
  }
  return result;
}

Matrix filter_matrix(const PolynomialFilter& f, const ShiftOperator& s) {
  if (f.coefficients.empty())
    throw std::invalid_argument("filter_matrix: empty filter");
  const std::size_t n = s.dim();
  Matrix result(n, n);
  for (std::size_t i = 0; i < n; ++i) result(i, i) = f.coefficients[0];
  Matrix power = Matrix::identity(n);
  for (std::size_t k = 1; k < f.coefficients.size(); ++k) {
    power = kern::matmul(s.matrix(), power);
    const double ck = f.coefficients[k];
    if (ck == 0.0) continue;
    for (std::size_t i = 0; i < n * n; ++i) result.values()[i] += ck * power.values()[i];
  }
  return result;
}

double filter_distance(const PolynomialFilter& f, const ShiftOperator& a,
                       const ShiftOperator& b, double tol) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("filter_distance: operator dimensions differ (" +
                                std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) +
                                ")");
  if (a.gamma() != b.gamma())
    throw std::invalid_argument("filter_distance: operators built with different gamma (" +
                                std::to_string(a.gamma()) + " vs " +
                                std::to_string(b.gamma()) + ")");
  const Matrix diff = kern::subtract(filter_matrix(f, a), filter_matrix(f, b));
  return spectral_norm(diff, tol);
}

double filter_stability_bound(const PolynomialFilter& f, double error_norm) {
  if (f.coefficients.empty())
    throw std::invalid_argument("filter_stability_bound: empty filter");
  if (!std::isfinite(error_norm) || error_norm < 0.0)
    throw std::invalid_argument("filter_stability_bound: error norm must be finite and >= 0");
  double weight = 0.0;
  for (std::size_t k = 1; k < f.coefficients.size(); ++k)
    weight += static_cast<double>(k) * std::fabs(f.coefficients[k]);
  return weight * error_norm;
}

}  // namespace graphstab
