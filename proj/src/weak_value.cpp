#include "duality/weak_value.hpp"

#include <cmath>
#include <stdexcept>

#include "duality/errors.hpp"

namespace duality {

TransverseWavefunction::TransverseWavefunction(std::vector<cplx> samples, double spacing)
    : amplitudes_(std::move(samples)), spacing_(spacing) {
  if (amplitudes_.empty()) throw std::invalid_argument("wavefunction needs at least one sample");
  if (!(spacing_ > 0.0)) throw std::invalid_argument("grid spacing must be positive");
  double norm2 = 0.0;
  for (const cplx &a : amplitudes_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      throw std::invalid_argument("wavefunction samples must be finite");
    norm2 += std::norm(a);
  }
  if (!(norm2 > 0.0)) throw std::invalid_argument("wavefunction is identically zero");
  const double norm = std::sqrt(norm2);
  for (cplx &a : amplitudes_) a /= norm;
}

double TransverseWavefunction::x(std::size_t i) const {
  return (static_cast<double>(i) - 0.5 * static_cast<double>(size() - 1)) * spacing_;
}

TransverseWavefunction TransverseWavefunction::gaussian(std::size_t n, double sigma, double spacing) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian width must be positive");
  std::vector<cplx> samples(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = (static_cast<double>(i) - 0.5 * static_cast<double>(n - 1)) * spacing;
    samples[i] = std::exp(-x * x / (4.0 * sigma * sigma));
  }
  return TransverseWavefunction(std::move(samples), spacing);
}

TransverseWavefunction TransverseWavefunction::uniform(std::size_t n, double spacing) {
  return TransverseWavefunction(std::vector<cplx>(n, cplx(1.0, 0.0)), spacing);
}

cplx TransverseWavefunction::zero_momentum() const {
  cplx sum(0.0, 0.0);
  for (const cplx &a : amplitudes_) sum += a;
  return sum / std::sqrt(static_cast<double>(size()));
}

std::vector<cplx> TransverseWavefunction::amplitude_ratio(double p_min) const {
  const cplx reference = zero_momentum();
  if (!(std::abs(reference) >= p_min)) throw ZeroProbabilityPostselection(std::norm(reference));
  std::vector<cplx> ratio(size());
  for (std::size_t i = 0; i < size(); ++i) ratio[i] = amplitudes_[i] / reference;
  return ratio;
}

double JointState::norm_squared() const {
  double sum = 0.0;
  for (const cplx &a : h) sum += std::norm(a);
  for (const cplx &a : v) sum += std::norm(a);
  return sum;
}

JointState apply_sliver(const TransverseWavefunction &psi, const SliverCoupling &coupling) {
  if (coupling.x0 >= psi.size()) throw std::invalid_argument("sliver position is outside the grid");
  if (!std::isfinite(coupling.phi)) throw std::invalid_argument("sliver angle must be finite");
  JointState joint{std::vector<cplx>(psi.size(), cplx(0.0, 0.0)), psi.amplitudes(), psi.zero_momentum()};
  const cplx at_sliver = psi[coupling.x0];
  if (coupling.mode == CouplingMode::linearized) {
    joint.h[coupling.x0] = 0.5 * coupling.phi * at_sliver;
  } else {
    joint.h[coupling.x0] = std::sin(0.5 * coupling.phi) * at_sliver;
    joint.v[coupling.x0] = std::cos(0.5 * coupling.phi) * at_sliver;
  }
  return joint;
}

PointerState::PointerState(cplx h, cplx v) {
  const double norm = std::sqrt(std::norm(h) + std::norm(v));
  if (!(norm > 0.0)) throw std::invalid_argument("pointer state cannot be the zero vector");
  h_ = h / norm;
  v_ = v / norm;
}

QubitState PointerState::density() const { return QubitState::from_ket(Vec2(h_, v_)); }

double PointerState::weakness() const {
  return std::abs(v_) > 0.0 ? std::abs(h_) / std::abs(v_) : std::numeric_limits<double>::infinity();
}

PostselectedPointer postselect_zero_momentum(const JointState &joint, double p_min) {
  if (!(std::abs(joint.source_zero_momentum) >= p_min))
    throw ZeroProbabilityPostselection(std::norm(joint.source_zero_momentum));
  const double overlap = 1.0 / std::sqrt(static_cast<double>(joint.v.size()));
  cplx h(0.0, 0.0);
  cplx v(0.0, 0.0);
  for (std::size_t i = 0; i < joint.v.size(); ++i) {
    h += joint.h[i];
    v += joint.v[i];
  }
  h *= overlap;
  v *= overlap;
  const double probability = (std::norm(h) + std::norm(v)) / joint.norm_squared();
  return {PointerState(h, v), probability};
}

cplx reconstruct_weak_value(const PointerState &s, double phi) {
  if (phi == 0.0 || !std::isfinite(phi)) throw InvalidCoupling("weak-value readout needs a nonzero finite phi");
  const Vec2 ket(s.h(), s.v());
  const Mat2 readout = pauli::sigma_x() - cplx(0.0, 1.0) * pauli::sigma_y();
  return ket.dot(readout * ket) / phi;
}

Reconstruction reconstruct_wavefunction(const TransverseWavefunction &psi, double phi,
                                        CouplingMode mode) {
  if (phi == 0.0 || !std::isfinite(phi)) throw InvalidCoupling("weak-value readout needs a nonzero finite phi");
  const std::vector<cplx> truth = psi.amplitude_ratio();
  const double inverse_overlap = std::sqrt(static_cast<double>(psi.size()));

  Reconstruction result;
  result.phi = phi;
  result.mode = mode;
  result.points.reserve(psi.size());
  for (std::size_t x0 = 0; x0 < psi.size(); ++x0) {
    const PostselectedPointer post = postselect_zero_momentum(apply_sliver(psi, {x0, phi, mode}));
    const cplx estimate = inverse_overlap * reconstruct_weak_value(post.pointer, phi);
    const double error = std::abs(estimate - truth[x0]);
    result.points.push_back({psi.x(x0), estimate, truth[x0], error});
    result.max_abs_error = std::max(result.max_abs_error, error);
    result.max_weakness = std::max(result.max_weakness, 0.5 * std::abs(phi * truth[x0]));
  }
  return result;
}

double convergence_order(const std::vector<double> &phis, const std::vector<double> &errors) {
  if (phis.size() != errors.size() || phis.size() < 2)
    throw std::invalid_argument("convergence order needs at least two matched samples");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < phis.size(); ++i) {
    mx += std::log(std::abs(phis[i]));
    my += std::log(errors[i]);
  }
  mx /= static_cast<double>(phis.size());
  my /= static_cast<double>(phis.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < phis.size(); ++i) {
    const double dx = std::log(std::abs(phis[i])) - mx;
    sxy += dx * (std::log(errors[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

} // namespace duality
