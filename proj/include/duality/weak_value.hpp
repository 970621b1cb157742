#pragma once

// Discrete model of the sliver-coupling direct measurement: a 1-D transverse
// wavefunction on N grid points, a polarization pointer rotated at one grid
// site, postselection on zero transverse momentum, and weak-value readout.
//
// Conventions: psi~(0) = (1/sqrt(N)) sum_x psi(x), and the zero-momentum state
// has amplitude 1/sqrt(N) on every site. The pointer therefore carries the
// discrete weak value psi(x0) / sum_x psi(x); multiplying by sqrt(N) gives
// the amplitude ratio psi(x0) / psi~(0).

#include <complex>
#include <cstddef>
#include <vector>

#include "duality/qubit.hpp"

namespace duality {

class TransverseWavefunction {
public:
  /// Normalizes `samples`; throws std::invalid_argument if empty or all zero.
  explicit TransverseWavefunction(std::vector<cplx> samples, double spacing = 1.0);

  /// exp(-x^2 / (4 sigma^2)) on a grid centered on x = 0 (|psi|^2 has width sigma).
  static TransverseWavefunction gaussian(std::size_t n, double sigma, double spacing = 1.0);
  static TransverseWavefunction uniform(std::size_t n, double spacing = 1.0);

  std::size_t size() const { return amplitudes_.size(); }
  double spacing() const { return spacing_; }
  /// Coordinate of site i; the grid is symmetric about zero.
  double x(std::size_t i) const;
  const std::vector<cplx> &amplitudes() const { return amplitudes_; }
  cplx operator[](std::size_t i) const { return amplitudes_[i]; }

  /// (1/sqrt(N)) sum_x psi(x).
  cplx zero_momentum() const;
  /// psi(x) / psi~(0) for every site. Throws ZeroProbabilityPostselection
  /// when |psi~(0)| < p_min.
  std::vector<cplx> amplitude_ratio(double p_min = kMinProbability) const;

private:
  std::vector<cplx> amplitudes_;
  double spacing_;
};

enum class CouplingMode { linearized, exact };

struct SliverCoupling {
  std::size_t x0 = 0;
  double phi = 0.0;
  CouplingMode mode = CouplingMode::linearized;
};

/// Polarization x position state, one position vector per polarization.
struct JointState {
  std::vector<cplx> h;
  std::vector<cplx> v;
  /// psi~(0) of the wavefunction the sliver acted on.
  cplx source_zero_momentum;

  double norm_squared() const;
};

/// Starting from |V, psi>: linearized mode returns |V,psi> + (phi/2)|H> pi_x0 |psi>
/// (unnormalized); exact mode rotates the polarization at x0 by phi,
/// |V> -> cos(phi/2)|V> + sin(phi/2)|H>, and is unitary.
/// Throws std::invalid_argument when x0 is outside the grid or phi is not finite.
JointState apply_sliver(const TransverseWavefunction &psi, const SliverCoupling &coupling);

/// Normalized polarization qubit in the (H, V) basis.
class PointerState {
public:
  /// Normalizes; throws std::invalid_argument for a zero vector.
  PointerState(cplx h, cplx v);

  cplx h() const { return h_; }
  cplx v() const { return v_; }
  QubitState density() const;
  /// |s_H / s_V|, the size of the perturbation away from |V>.
  double weakness() const;

private:
  cplx h_;
  cplx v_;
};

struct PostselectedPointer {
  PointerState pointer;
  double probability;
};

/// Projects the position register onto the zero-momentum state. Throws
/// ZeroProbabilityPostselection when |psi~(0)| of the source is below p_min.
PostselectedPointer postselect_zero_momentum(const JointState &joint, double p_min = kMinProbability);

/// (1/phi) <s| sigma_x - i sigma_y |s>. Throws InvalidCoupling when phi = 0.
cplx reconstruct_weak_value(const PointerState &s, double phi);

/// Weak-value readout above this |(phi/2) psi(x)/psi~(0)| is flagged as not weak.
inline constexpr double kWeaknessThreshold = 0.1;

struct ReconstructionPoint {
  double x = 0.0;
  cplx estimate;
  cplx truth;
  double abs_error = 0.0;
};

struct Reconstruction {
  double phi = 0.0;
  CouplingMode mode = CouplingMode::linearized;
  std::vector<ReconstructionPoint> points;
  double max_abs_error = 0.0;
  /// Largest |(phi/2) psi(x)/psi~(0)| over the scan.
  double max_weakness = 0.0;

  bool weak() const { return max_weakness <= kWeaknessThreshold; }
};

/// Scans the sliver over every site and estimates psi(x)/psi~(0) from each
/// pointer. Throws InvalidCoupling for phi = 0.
Reconstruction reconstruct_wavefunction(const TransverseWavefunction &psi, double phi,
                                        CouplingMode mode);

/// Least-squares slope of log(error) against log(phi).
double convergence_order(const std::vector<double> &phis, const std::vector<double> &errors);

} // namespace duality
