#include "elicit/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "elicit/errors.hpp"

namespace elicit {

AttributeMatrix::AttributeMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (rows_ < 2 || cols_ < 2) throw InputError("attribute matrix must be at least 2 x 2");
  if (values_.size() != rows_ * cols_) throw InputError("attribute matrix size mismatch");
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw InputError("attribute matrix entries must be finite and nonnegative");
    }
  }
}

AttributeMatrix AttributeMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw InputError("attribute matrix has no rows");
  const std::size_t cols = rows.front().size();
  std::vector<double> values;
  values.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw InputError("attribute matrix rows have unequal length");
    values.insert(values.end(), r.begin(), r.end());
  }
  return AttributeMatrix(rows.size(), cols, std::move(values));
}

std::vector<double> AttributeMatrix::column(std::size_t j) const {
  std::vector<double> col(rows_);
  for (std::size_t i = 0; i < rows_; ++i) col[i] = at(i, j);
  return col;
}

double Halfspace::evaluate(std::span<const double> point) const {
  double g = offset;
  for (std::size_t j = 0; j < normal.size(); ++j) g += normal[j] * point[j];
  return g;
}

bool Halfspace::vacuous() const {
  return offset == 0.0 && std::all_of(normal.begin(), normal.end(), [](double a) { return a == 0.0; });
}

LambdaPoint sigma_to_lambda(const SigmaPoint& sigma, double eps) {
  const auto& s = sigma.coords;
  if (s.empty()) throw DomainError("sigma point has no coordinates");
  double total = 0.0;
  for (double v : s) {
    if (!(v >= -eps)) throw DomainError("sigma coordinate is negative");
    total += v;
  }
  if (total > 1.0 + eps) throw DomainError("sigma coordinates sum above one");

  LambdaPoint lambda;
  lambda.weights.reserve(s.size() + 1);
  for (double v : s) lambda.weights.push_back(std::clamp(v, 0.0, 1.0));
  lambda.weights.push_back(std::clamp(1.0 - total, 0.0, 1.0));
  return lambda;
}

SigmaPoint lambda_to_sigma(const LambdaPoint& lambda) {
  if (lambda.weights.size() < 2) throw DomainError("lambda point needs p >= 2");
  return SigmaPoint{{lambda.weights.begin(), lambda.weights.end() - 1}};
}

WeightVector realize_weights(const AttributeMatrix& y, const LambdaPoint& lambda) {
  if (lambda.weights.size() != y.cols()) {
    throw InputError("lambda has " + std::to_string(lambda.weights.size()) +
                     " components, attribute matrix has " + std::to_string(y.cols()) +
                     " columns");
  }
  WeightVector w(y.rows(), 0.0);
  for (std::size_t i = 0; i < y.rows(); ++i) {
    const auto row = y.row(i);
    w[i] = std::inner_product(row.begin(), row.end(), lambda.weights.begin(), 0.0);
  }
  return w;
}

PreferenceConstraint preference_halfspace(const AttributeMatrix& y, Element preferred,
                                          Element other) {
  if (preferred >= y.rows() || other >= y.rows()) {
    throw InputError("preference references an element outside the attribute matrix");
  }
  if (preferred == other) throw InputError("preference needs two distinct elements");
  const std::size_t last = y.cols() - 1;
  // w_l - w_k expanded with lambda_p = 1 - sum(sigma).
  PreferenceConstraint c;
  c.preferred = preferred;
  c.other = other;
  c.halfspace.normal.resize(last);
  for (std::size_t j = 0; j < last; ++j) {
    c.halfspace.normal[j] = y.at(preferred, j) - y.at(preferred, last) - y.at(other, j) +
                            y.at(other, last);
  }
  c.halfspace.offset = y.at(preferred, last) - y.at(other, last);
  return c;
}

}  // namespace elicit
