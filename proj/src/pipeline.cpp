#include "duality/pipeline.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "duality/errors.hpp"

namespace duality {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double weighted(double probability, double value) {
  return probability < kMinProbability ? 0.0 : probability * value;
}

struct FitResult {
  double visibility = kNaN;
  double uncertainty = kNaN;
  AzimuthalProfile profile;
};

FitResult fit_port(const IntensityImage &image, const PipelineOptions &options) {
  FitResult result;
  result.profile = azimuthal_profile(image, center_of(image.grid), options.annulus,
                                     options.window_degrees, options.profile_method);
  try {
    const FringeEstimate estimate = fringe_visibility(result.profile, options.l, options.fit_method);
    result.visibility = estimate.visibility;
    result.uncertainty = estimate.uncertainty;
  } catch (const DegenerateProfile &) {
  }
  return result;
}

double arm_predictability(const IntensityImage &plus, const IntensityImage &minus,
                          const PipelineOptions &options) {
  try {
    return predictability_from_images(plus, minus, center_of(plus.grid), options.annulus);
  } catch (const ZeroIntensity &) {
    return kNaN;
  }
}

} // namespace

PipelineImages render_pipeline_images(const StateParams &params, const ModePair &modes,
                                      const PipelineOptions &options) {
  const PortFields both = simulate_interferometer(params, modes, {options.path_phase, Arms::both});
  const PortFields upper = simulate_interferometer(params, modes, {options.path_phase, Arms::upper_only});
  const PortFields lower = simulate_interferometer(params, modes, {options.path_phase, Arms::lower_only});
  const NoiseModel &noise = options.noise;
  return {render_image(both.h, noise.substream(0)),  render_image(both.v, noise.substream(1)),
          render_image(upper.h, noise.substream(2)), render_image(lower.h, noise.substream(3)),
          render_image(upper.v, noise.substream(4)), render_image(lower.v, noise.substream(5))};
}

MeasuredDuality analyze_pipeline_images(const PipelineImages &images, const PipelineOptions &options) {
  MeasuredDuality m;
  FitResult v_fit = fit_port(images.v, options);
  FitResult h_fit = fit_port(images.h, options);
  m.v_given_v = v_fit.visibility;
  m.v_given_v_uncertainty = v_fit.uncertainty;
  m.v_given_h = h_fit.visibility;
  m.v_profile = std::move(v_fit.profile);
  m.h_profile = std::move(h_fit.profile);
  m.p_given_h = arm_predictability(images.h_upper, images.h_lower, options);
  m.p_given_v = arm_predictability(images.v_upper, images.v_lower, options);

  const double h_total = images.h.total();
  const double v_total = images.v.total();
  if (h_total + v_total > 0.0) {
    m.p_h = h_total / (h_total + v_total);
    m.p_v = v_total / (h_total + v_total);
  } else {
    m.p_h = m.p_v = kNaN;
  }
  m.v_avg = weighted(m.p_h, m.v_given_h) + weighted(m.p_v, m.v_given_v);
  m.p_avg = weighted(m.p_h, m.p_given_h) + weighted(m.p_v, m.p_given_v);
  return m;
}

MeasuredDuality measure_duality(const StateParams &params, const ModePair &modes,
                                const PipelineOptions &options) {
  return analyze_pipeline_images(render_pipeline_images(params, modes, options), options);
}

Calibration camera_calibration() {
  NoiseModel noise;
  noise.photon_budget = 1e7;
  noise.readout_sigma = 0.8;
  noise.seed = 2014;
  return {{std::numbers::pi / 2.0, 17.0 * std::numbers::pi / 36.0}, noise};
}

} // namespace duality
