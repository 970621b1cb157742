#pragma once

// Recovery of visibility and predictability from camera images: azimuthal
// integration into angular windows, sinusoidal fringe fitting, and
// arm-intensity comparison.

#include <vector>

#include "duality/optics.hpp"

namespace duality {

/// Radial limits of the analysed ring, in beam-waist units.
struct Annulus {
  double r_min = 0.5;
  double r_max = 2.5;
};

enum class ProfileMethod {
  /// Mean of the pixels whose centers fall in each window.
  pixel,
  /// Area average of a cubic B-spline interpolant over each window
  /// (Gauss-Legendre in r and phi). Per-bin errors still come from pixels.
  spline,
};

struct PixelCenter {
  double x = 0.0;
  double y = 0.0;
};

inline PixelCenter center_of(const GridSpec &grid) { return {grid.center_x, grid.center_y}; }

/// Intensity versus angle. Bin k covers [k*w - w/2, k*w + w/2) degrees, so
/// the bins tile the full circle.
struct AzimuthalProfile {
  double window_degrees = 3.0;
  std::vector<double> angle_degrees;
  std::vector<double> mean_intensity;
  std::vector<double> standard_error;
  std::vector<std::size_t> pixel_count;

  std::size_t size() const { return angle_degrees.size(); }
};

/// Throws std::invalid_argument when `window_degrees` does not divide 360 or
/// the annulus is empty or leaves the image; EmptyBin when a window holds no pixel.
AzimuthalProfile azimuthal_profile(const IntensityImage &image, PixelCenter center,
                                   const Annulus &annulus = {}, double window_degrees = 3.0,
                                   ProfileMethod method = ProfileMethod::pixel);

enum class FitMethod { fit, extrema };

struct FringeEstimate {
  double visibility = 0.0;
  /// One-sigma uncertainty of the visibility.
  double uncertainty = 0.0;
  /// Offset, amplitude and phase of c0 + c1 cos(2|l| phi + delta).
  double offset = 0.0;
  double amplitude = 0.0;
  double phase = 0.0;
};

/// Visibility of the 2|l|-fold fringe in `profile`. The window average of
/// the harmonic (a sinc factor) is divided out for both methods. Throws
/// DegenerateProfile for a non-positive offset or an all-zero profile and
/// std::invalid_argument for l = 0.
FringeEstimate fringe_visibility(const AzimuthalProfile &profile, int l,
                                 FitMethod method = FitMethod::fit);

/// |I+ - I-| / (I+ + I-). Throws ZeroIntensity when I+ + I- < tolerance.
double predictability_from_intensities(double i_plus, double i_minus, double tolerance = 1e-12);

/// Predictability from two renders of the same port taken with only the +l
/// (upper) arm and only the -l (lower) arm open, each summed over `annulus`.
double predictability_from_images(const IntensityImage &plus_arm, const IntensityImage &minus_arm,
                                  PixelCenter center, const Annulus &annulus = {});

/// Sum of pixel values whose centers lie in the annulus.
double annulus_total(const IntensityImage &image, PixelCenter center, const Annulus &annulus);

/// Number of circular runs of bins lying above the profile mean.
int count_petals(const AzimuthalProfile &profile);

/// Ratio of the largest to the smallest bin, minus one.
double azimuthal_contrast(const AzimuthalProfile &profile);

} // namespace duality
