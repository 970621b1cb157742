#include "spline.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace duality::detail {
namespace {

constexpr double kPole = -0.26794919243112270; // sqrt(3) - 2

void prefilter_line(double *c, std::size_t n, std::size_t stride) {
  auto at = [&](std::size_t k) -> double & { return c[k * stride]; };
  constexpr double gain = (1.0 - kPole) * (1.0 - 1.0 / kPole);
  for (std::size_t k = 0; k < n; ++k) at(k) *= gain;

  const std::size_t horizon = std::min<std::size_t>(n, 30);
  double sum = at(0);
  double zn = kPole;
  for (std::size_t k = 1; k < horizon; ++k) {
    sum += zn * at(k);
    zn *= kPole;
  }
  at(0) = sum;
  for (std::size_t k = 1; k < n; ++k) at(k) += kPole * at(k - 1);

  at(n - 1) = (kPole / (kPole * kPole - 1.0)) * (kPole * at(n - 2) + at(n - 1));
  for (std::size_t k = n - 1; k-- > 0;) at(k) = kPole * (at(k + 1) - at(k));
}

int mirror(int k, int n) {
  const int period = 2 * n - 2;
  k = std::abs(k) % period;
  return k < n ? k : period - k;
}

void bspline_weights(double t, double w[4]) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  w[0] = (1.0 - t) * (1.0 - t) * (1.0 - t) / 6.0;
  w[1] = (4.0 - 6.0 * t2 + 3.0 * t3) / 6.0;
  w[2] = (1.0 + 3.0 * t + 3.0 * t2 - 3.0 * t3) / 6.0;
  w[3] = t3 / 6.0;
}

} // namespace

CubicSpline2D::CubicSpline2D(const IntensityImage &image)
    : width_(image.grid.width), height_(image.grid.height), coefficients_(image.pixels) {
  if (width_ < 2 || height_ < 2) throw std::invalid_argument("spline needs at least 2x2 samples");
  for (int row = 0; row < height_; ++row)
    prefilter_line(coefficients_.data() + static_cast<std::size_t>(row) * width_, width_, 1);
  for (int column = 0; column < width_; ++column)
    prefilter_line(coefficients_.data() + column, height_, width_);
}

double CubicSpline2D::operator()(double row, double column) const {
  const double fr = std::floor(row);
  const double fc = std::floor(column);
  double wr[4];
  double wc[4];
  bspline_weights(row - fr, wr);
  bspline_weights(column - fc, wc);
  const int r0 = static_cast<int>(fr) - 1;
  const int c0 = static_cast<int>(fc) - 1;
  double value = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double *line = coefficients_.data() + static_cast<std::size_t>(mirror(r0 + i, height_)) * width_;
    double partial = 0.0;
    for (int j = 0; j < 4; ++j) partial += wc[j] * line[mirror(c0 + j, width_)];
    value += wr[i] * partial;
  }
  return value;
}

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("quadrature order must be positive");
  QuadratureRule rule{std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double derivative = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      const double pn = n == 1 ? x : p1;
      const double pn1 = n == 1 ? 1.0 : p0;
      derivative = n * (x * pn - pn1) / (x * x - 1.0);
      const double step = pn / derivative;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const double weight = 2.0 / ((1.0 - x * x) * derivative * derivative);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = weight;
    rule.weights[n - 1 - i] = weight;
  }
  return rule;
}

} // namespace duality::detail
