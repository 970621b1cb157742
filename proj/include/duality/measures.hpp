#pragma once

#include <string>

#include "duality/qubit.hpp"

namespace duality {

/// |Tr[(sigma_x + i sigma_y) rho]|, twice the coherence magnitude.
double visibility(const QubitState &rho);

/// |Tr[sigma_z rho]|.
double predictability(const QubitState &rho);

struct DualityReport {
  double visibility = 0.0;
  double predictability = 0.0;
  /// Postselection probability; 1 for unconditional and averaged reports.
  double probability = 1.0;
  std::string label;

  double sum_of_squares() const { return visibility * visibility + predictability * predictability; }
};

/// Measures of the reduced OAM state, computed through the density-matrix path.
DualityReport unconditional_duality(const StateParams &params);

/// Measures of the OAM state conditioned on `proj`. Propagates
/// ZeroProbabilityPostselection.
DualityReport conditional_duality(const StateParams &params, const Projector &proj,
                                  std::string label = "projector");

/// Probability-weighted measures over the complete {H, V} postselection set.
/// A branch with probability below kMinProbability contributes zero.
DualityReport averaged_duality(const StateParams &params);

struct ConditionalClosedForm {
  double v_given_v = 0.0;
  double p_given_h = 1.0;

  double sum_of_squares() const { return v_given_v * v_given_v + p_given_h * p_given_h; }
};

/// V_{pi_V} = |sin(theta) sin(alpha/2)| / (cos^2(theta/2) + sin^2(theta/2) sin^2(alpha/2)),
/// P_{pi_H} = 1. Throws ZeroProbabilityPostselection when the denominator is below p_min.
ConditionalClosedForm closed_form_conditional(const StateParams &params,
                                              double p_min = kMinProbability);

struct AveragedClosedForm {
  double visibility = 0.0;
  double predictability = 0.0;

  double sum_of_squares() const { return visibility * visibility + predictability * predictability; }
};

AveragedClosedForm closed_form_averaged(const StateParams &params);

/// sin^2(alpha/2) sin^2(theta) + cos^2(theta).
double closed_form_unconditional_sum(const StateParams &params);

/// Postselection probabilities of the H and V outputs.
struct PortProbabilities {
  double h = 0.0;
  double v = 0.0;
};

PortProbabilities port_probabilities(const StateParams &params);

} // namespace duality
