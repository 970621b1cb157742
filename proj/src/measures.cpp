#include "duality/measures.hpp"

#include <cmath>

#include "duality/errors.hpp"

namespace duality {

double visibility(const QubitState &rho) {
  const Mat2 raising = pauli::sigma_x() + cplx(0.0, 1.0) * pauli::sigma_y();
  return std::abs((raising * rho.matrix()).trace());
}

double predictability(const QubitState &rho) {
  return std::abs((pauli::sigma_z() * rho.matrix()).trace());
}

DualityReport unconditional_duality(const StateParams &params) {
  const auto state = TwoQubitState::from_density(build_state(params).density());
  const QubitState reduced = partial_trace_env(state);
  return {visibility(reduced), predictability(reduced), 1.0, "unconditional"};
}

DualityReport conditional_duality(const StateParams &params, const Projector &proj,
                                  std::string label) {
  const auto state = TwoQubitState::from_density(build_state(params).density());
  const Postselected post = postselect_env(state, proj);
  return {visibility(post.state), predictability(post.state), post.probability, std::move(label)};
}

DualityReport averaged_duality(const StateParams &params) {
  const auto state = TwoQubitState::from_density(build_state(params).density());
  DualityReport report{0.0, 0.0, 1.0, "averaged"};
  for (const Projector &proj : {Projector::horizontal(), Projector::vertical()}) {
    try {
      const Postselected post = postselect_env(state, proj);
      report.visibility += post.probability * visibility(post.state);
      report.predictability += post.probability * predictability(post.state);
    } catch (const ZeroProbabilityPostselection &) {
      // empty branch contributes nothing
    }
  }
  return report;
}

ConditionalClosedForm closed_form_conditional(const StateParams &params, double p_min) {
  const double c = std::cos(params.theta / 2.0);
  const double s = std::sin(params.theta / 2.0);
  const double sa = std::sin(params.alpha / 2.0);
  const double denominator = c * c + s * s * sa * sa;
  if (!(denominator >= p_min)) throw ZeroProbabilityPostselection(denominator);
  return {std::abs(std::sin(params.theta) * sa) / denominator, 1.0};
}

AveragedClosedForm closed_form_averaged(const StateParams &params) {
  const double c2 = std::pow(std::cos(params.theta / 2.0), 2);
  const double s2 = std::pow(std::sin(params.theta / 2.0), 2);
  const double ca2 = std::pow(std::cos(params.alpha / 2.0), 2);
  const double sa2 = std::pow(std::sin(params.alpha / 2.0), 2);
  return {std::abs(std::sin(params.theta) * std::sin(params.alpha / 2.0)),
          s2 * ca2 + std::abs(c2 - s2 * sa2)};
}

double closed_form_unconditional_sum(const StateParams &params) {
  const double sa = std::sin(params.alpha / 2.0);
  const double st = std::sin(params.theta);
  const double ct = std::cos(params.theta);
  return sa * sa * st * st + ct * ct;
}

PortProbabilities port_probabilities(const StateParams &params) {
  const double s2 = std::pow(std::sin(params.theta / 2.0), 2);
  const double ca2 = std::pow(std::cos(params.alpha / 2.0), 2);
  const double h = s2 * ca2;
  return {h, 1.0 - h};
}

} // namespace duality
