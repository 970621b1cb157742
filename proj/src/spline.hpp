#pragma once

#include <vector>

#include "duality/optics.hpp"

namespace duality::detail {

/// Interpolating cubic B-spline over an intensity image with mirror
/// boundaries. Coordinates are (row, column) in pixel index units.
class CubicSpline2D {
public:
  explicit CubicSpline2D(const IntensityImage &image);

  double operator()(double row, double column) const;

private:
  int width_;
  int height_;
  std::vector<double> coefficients_;
};

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(int n);

} // namespace duality::detail
