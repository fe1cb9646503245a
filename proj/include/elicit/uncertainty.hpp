#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "elicit/matroid.hpp"

namespace elicit {

/// Membership tolerance for simplex and halfspace tests.
inline constexpr double kEpsilon = 1e-9;

/// n x p matrix of nonnegative attribute vectors; row i holds element i's
/// attributes and column j is the j-th extreme weight vector.
class AttributeMatrix {
 public:
  AttributeMatrix() = default;
  /// `values` is row-major. Requires n >= 2, p >= 2 and entries >= 0.
  AttributeMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);
  static AttributeMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double at(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * cols_, cols_};
  }
  std::vector<double> column(std::size_t j) const;
  const std::vector<double>& values() const { return values_; }

  friend bool operator==(const AttributeMatrix&, const AttributeMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

/// Convex weights over the p attribute columns.
struct LambdaPoint {
  std::vector<double> weights;
};

/// The first p-1 coordinates of a LambdaPoint; the uncertainty region lives
/// in this (p-1)-dimensional space.
struct SigmaPoint {
  std::vector<double> coords;
};

/// {x : normal . x + offset >= 0}
struct Halfspace {
  std::vector<double> normal;
  double offset = 0.0;

  double evaluate(std::span<const double> point) const;
  bool vacuous() const;
};

/// The halfspace equivalent to "element `preferred` weighs at least as much
/// as element `other`".
struct PreferenceConstraint {
  Element preferred = 0;
  Element other = 0;
  Halfspace halfspace;
};

/// Throws DomainError when sigma is outside the simplex by more than eps.
LambdaPoint sigma_to_lambda(const SigmaPoint& sigma, double eps = kEpsilon);
SigmaPoint lambda_to_sigma(const LambdaPoint& lambda);

WeightVector realize_weights(const AttributeMatrix& y, const LambdaPoint& lambda);

PreferenceConstraint preference_halfspace(const AttributeMatrix& y, Element preferred,
                                          Element other);

}  // namespace elicit
