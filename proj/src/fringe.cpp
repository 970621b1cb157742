#include "duality/fringe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "duality/errors.hpp"
#include "spline.hpp"

namespace duality {
namespace {

constexpr double kDegree = std::numbers::pi / 180.0;

std::size_t bin_count(double window_degrees) {
  if (!(window_degrees > 0.0) || window_degrees > 360.0)
    throw std::invalid_argument("angular window must lie in (0, 360] degrees");
  const double bins = std::round(360.0 / window_degrees);
  if (std::abs(bins * window_degrees - 360.0) > 1e-9)
    throw std::invalid_argument("angular window must divide 360 degrees evenly");
  return static_cast<std::size_t>(bins);
}

void check_annulus(const GridSpec &grid, PixelCenter center, const Annulus &annulus) {
  if (!(annulus.r_min >= 0.0) || !(annulus.r_min < annulus.r_max))
    throw std::invalid_argument("annulus requires 0 <= r_min < r_max");
  const double reach = std::min({center.x + 0.5, grid.width - 0.5 - center.x, center.y + 0.5,
                                 grid.height - 0.5 - center.y}) *
                       grid.pixel_size();
  if (annulus.r_max > reach + 1e-12) throw std::invalid_argument("annulus extends beyond the image");
}

double window_response(int harmonic, double window_degrees) {
  const double half = 0.5 * harmonic * window_degrees * kDegree;
  return half == 0.0 ? 1.0 : std::sin(half) / half;
}

} // namespace

double annulus_total(const IntensityImage &image, PixelCenter center, const Annulus &annulus) {
  const GridSpec &grid = image.grid;
  const double ps = grid.pixel_size();
  double sum = 0.0;
  for (int row = 0; row < grid.height; ++row) {
    const double dy = (row - center.y) * ps;
    for (int column = 0; column < grid.width; ++column) {
      const double dx = (column - center.x) * ps;
      const double r = std::hypot(dx, dy);
      if (r >= annulus.r_min && r < annulus.r_max) sum += image.at(row, column);
    }
  }
  return sum;
}

AzimuthalProfile azimuthal_profile(const IntensityImage &image, PixelCenter center,
                                   const Annulus &annulus, double window_degrees,
                                   ProfileMethod method) {
  const std::size_t bins = bin_count(window_degrees);
  const GridSpec &grid = image.grid;
  check_annulus(grid, center, annulus);

  std::vector<double> sum(bins, 0.0);
  std::vector<double> sum_sq(bins, 0.0);
  std::vector<std::size_t> count(bins, 0);
  const double ps = grid.pixel_size();
  for (int row = 0; row < grid.height; ++row) {
    const double dy = (row - center.y) * ps;
    for (int column = 0; column < grid.width; ++column) {
      const double dx = (column - center.x) * ps;
      const double r = std::hypot(dx, dy);
      if (r < annulus.r_min || r >= annulus.r_max) continue;
      double degrees = std::atan2(dy, dx) / kDegree;
      if (degrees < 0.0) degrees += 360.0;
      const auto bin = static_cast<std::size_t>(std::floor((degrees + 0.5 * window_degrees) / window_degrees)) % bins;
      const double value = image.at(row, column);
      sum[bin] += value;
      sum_sq[bin] += value * value;
      ++count[bin];
    }
  }

  AzimuthalProfile profile;
  profile.window_degrees = window_degrees;
  profile.angle_degrees.resize(bins);
  profile.mean_intensity.resize(bins);
  profile.standard_error.resize(bins);
  profile.pixel_count = count;
  for (std::size_t k = 0; k < bins; ++k) {
    if (count[k] == 0) throw EmptyBin(k);
    const double n = static_cast<double>(count[k]);
    const double mean = sum[k] / n;
    const double variance = count[k] > 1 ? std::max(0.0, (sum_sq[k] - n * mean * mean) / (n - 1.0)) : 0.0;
    profile.angle_degrees[k] = static_cast<double>(k) * window_degrees;
    profile.mean_intensity[k] = mean;
    profile.standard_error[k] = std::sqrt(variance / n);
  }

  if (method == ProfileMethod::spline) {
    const detail::CubicSpline2D spline(image);
    const int radial_nodes =
        std::clamp(static_cast<int>(std::ceil((annulus.r_max - annulus.r_min) / ps)), 16, 512);
    const detail::QuadratureRule radial = detail::gauss_legendre(radial_nodes);
    const detail::QuadratureRule angular = detail::gauss_legendre(8);
    const double r_mid = 0.5 * (annulus.r_max + annulus.r_min);
    const double r_half = 0.5 * (annulus.r_max - annulus.r_min);
    const double half_window = 0.5 * window_degrees * kDegree;
    for (std::size_t k = 0; k < bins; ++k) {
      const double phi_center = profile.angle_degrees[k] * kDegree;
      double weighted = 0.0;
      double total_weight = 0.0;
      for (std::size_t j = 0; j < angular.nodes.size(); ++j) {
        const double phi = phi_center + half_window * angular.nodes[j];
        const double cos_phi = std::cos(phi);
        const double sin_phi = std::sin(phi);
        for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
          const double r = r_mid + r_half * radial.nodes[i];
          const double weight = angular.weights[j] * radial.weights[i] * r;
          weighted += weight * spline(center.y + r * sin_phi / ps, center.x + r * cos_phi / ps);
          total_weight += weight;
        }
      }
      profile.mean_intensity[k] = weighted / total_weight;
    }
  }
  return profile;
}

FringeEstimate fringe_visibility(const AzimuthalProfile &profile, int l, FitMethod method) {
  if (l == 0) throw std::invalid_argument("fringe analysis needs |l| >= 1");
  const std::size_t n = profile.size();
  if (n < 4) throw DegenerateProfile("profile needs at least four bins");
  const auto &values = profile.mean_intensity;
  if (std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; }))
    throw DegenerateProfile("profile is identically zero");

  const int harmonic = 2 * std::abs(l);
  const double response = window_response(harmonic, profile.window_degrees);
  FringeEstimate estimate;

  if (method == FitMethod::extrema) {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double top = *hi;
    const double bottom = *lo;
    if (!(top + bottom > 0.0)) throw DegenerateProfile("profile extrema sum to zero");
    const double denominator = (top + bottom) * (top + bottom);
    const double se_top = profile.standard_error[static_cast<std::size_t>(hi - values.begin())];
    const double se_bottom = profile.standard_error[static_cast<std::size_t>(lo - values.begin())];
    estimate.offset = 0.5 * (top + bottom);
    estimate.amplitude = 0.5 * (top - bottom) / response;
    estimate.phase = -harmonic * profile.angle_degrees[static_cast<std::size_t>(hi - values.begin())] * kDegree;
    estimate.visibility = std::clamp((top - bottom) / (top + bottom) / response, 0.0, 1.0);
    estimate.uncertainty =
        std::hypot(2.0 * bottom * se_top, 2.0 * top * se_bottom) / denominator / response;
    return estimate;
  }

  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd rhs(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double phi = harmonic * profile.angle_degrees[k] * kDegree;
    design(k, 0) = 1.0;
    design(k, 1) = response * std::cos(phi);
    design(k, 2) = response * std::sin(phi);
    rhs(k) = values[k];
  }
  const Eigen::Vector3d coefficients = design.colPivHouseholderQr().solve(rhs);
  const double c0 = coefficients(0);
  if (!(c0 > 0.0)) throw DegenerateProfile("fitted fringe offset is not positive");
  const double a = coefficients(1);
  const double b = coefficients(2);
  const double amplitude = std::hypot(a, b);

  const double rss = (design * coefficients - rhs).squaredNorm();
  const double residual_variance = n > 3 ? rss / static_cast<double>(n - 3) : 0.0;
  const Eigen::Matrix3d covariance =
      residual_variance * (design.transpose() * design).inverse();

  // gradient of amplitude / c0 with respect to (c0, a, b)
  Eigen::Vector3d gradient(-amplitude / (c0 * c0), 0.0, 0.0);
  if (amplitude > 0.0) {
    gradient(1) = a / (amplitude * c0);
    gradient(2) = b / (amplitude * c0);
  }
  double variance = gradient.dot(covariance * gradient);
  if (amplitude == 0.0) variance += (covariance(1, 1) + covariance(2, 2)) / (c0 * c0);

  estimate.offset = c0;
  estimate.amplitude = amplitude;
  estimate.phase = std::atan2(-b, a);
  estimate.visibility = std::clamp(amplitude / c0, 0.0, 1.0);
  estimate.uncertainty = std::sqrt(std::max(0.0, variance));
  return estimate;
}

double predictability_from_intensities(double i_plus, double i_minus, double tolerance) {
  const double total = i_plus + i_minus;
  if (!(total >= tolerance)) throw ZeroIntensity("arm intensities sum to zero");
  return std::abs(i_plus - i_minus) / total;
}

double predictability_from_images(const IntensityImage &plus_arm, const IntensityImage &minus_arm,
                                  PixelCenter center, const Annulus &annulus) {
  if (!(plus_arm.grid == minus_arm.grid)) throw std::invalid_argument("arm images must share a grid");
  check_annulus(plus_arm.grid, center, annulus);
  return predictability_from_intensities(annulus_total(plus_arm, center, annulus),
                                         annulus_total(minus_arm, center, annulus));
}

int count_petals(const AzimuthalProfile &profile) {
  const auto &values = profile.mean_intensity;
  if (values.empty()) return 0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  int runs = 0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const bool above = values[k] > mean;
    const bool previous_above = values[(k + values.size() - 1) % values.size()] > mean;
    if (above && !previous_above) ++runs;
  }
  return runs;
}

double azimuthal_contrast(const AzimuthalProfile &profile) {
  const auto [lo, hi] = std::minmax_element(profile.mean_intensity.begin(), profile.mean_intensity.end());
  if (!(*lo > 0.0)) throw DegenerateProfile("profile has a non-positive bin");
  return *hi / *lo - 1.0;
}

} // namespace duality
