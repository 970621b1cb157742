#pragma once

// Exact state algebra for the OAM (system) x polarization (environment)
// two-qubit problem.
//
// Basis ordering is fixed for the whole library:
//   index 0: |+l, H>   index 1: |+l, V>   index 2: |-l, H>   index 3: |-l, V>
// i.e. index = 2 * oam + pol with oam in {+l = 0, -l = 1}, pol in {H = 0, V = 1}.
// Single-qubit matrices use (|+l>, |-l>) for OAM and (|H>, |V>) for polarization.

#include <complex>
#include <variant>

#include <Eigen/Dense>

namespace duality {

using cplx = std::complex<double>;
using Vec2 = Eigen::Vector2cd;
using Vec4 = Eigen::Vector4cd;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

inline constexpr double kStateTolerance = 1e-12;
inline constexpr double kPsdTolerance = 1e-10;
inline constexpr double kMinProbability = 1e-12;

enum class Oam : int { plus = 0, minus = 1 };
enum class Pol : int { H = 0, V = 1 };

constexpr int basis_index(Oam oam, Pol pol) {
  return 2 * static_cast<int>(oam) + static_cast<int>(pol);
}

/// Preparation angles: theta is the half-wave plate before the
/// interferometer, alpha the plate inside the lower arm (radians).
struct StateParams {
  double theta = 0.0;
  double alpha = 0.0;

  /// Both angles wrapped into [0, 2pi).
  StateParams canonical() const;
};

double wrap_angle(double radians);

namespace pauli {
const Mat2 &identity();
const Mat2 &sigma_x();
const Mat2 &sigma_y();
const Mat2 &sigma_z();
} // namespace pauli

/// Rank-one polarization projector |e><e|.
class Projector {
public:
  static Projector horizontal();
  static Projector vertical();
  /// cos(polar/2)|H> + e^{i azimuth} sin(polar/2)|V>.
  static Projector from_bloch(double polar, double azimuth);
  /// Normalizes `ket`; throws std::invalid_argument for a zero vector.
  static Projector from_ket(const Vec2 &ket);

  const Mat2 &matrix() const { return matrix_; }
  const Vec2 &ket() const { return ket_; }

private:
  Projector(const Vec2 &ket);
  Vec2 ket_;
  Mat2 matrix_;
};

/// 2x2 density matrix. Construction validates Hermiticity, unit trace and
/// positivity and throws std::invalid_argument on violation.
class QubitState {
public:
  explicit QubitState(const Mat2 &rho);
  static QubitState from_ket(const Vec2 &ket);

  const Mat2 &matrix() const { return rho_; }
  /// Off-diagonal element <0|rho|1>.
  cplx coherence() const { return rho_(0, 1); }

private:
  Mat2 rho_;
};

/// Pure amplitude vector or 4x4 density matrix over OAM x polarization.
class TwoQubitState {
public:
  /// Throws std::invalid_argument unless |psi| = 1 within kStateTolerance.
  static TwoQubitState from_amplitudes(const Vec4 &psi);
  /// Throws std::invalid_argument unless rho is a valid density matrix.
  static TwoQubitState from_density(const Mat4 &rho);

  bool is_pure_vector() const { return std::holds_alternative<Vec4>(repr_); }
  /// Amplitudes of a vector-backed state; throws std::logic_error otherwise.
  const Vec4 &amplitudes() const;
  Mat4 density() const;

private:
  explicit TwoQubitState(std::variant<Vec4, Mat4> repr) : repr_(std::move(repr)) {}
  std::variant<Vec4, Mat4> repr_;
};

/// cos(theta/2)|l,V> + sin(theta/2)|-l>(cos(alpha/2)|H> + sin(alpha/2)|V>).
TwoQubitState build_state(const StateParams &params);

/// Reduced OAM state Tr_pol[Psi].
QubitState partial_trace_env(const TwoQubitState &state);

struct Postselected {
  QubitState state;
  double probability;
};

/// Conditional OAM state Tr_pol[(1 x pi) Psi] / p with p = Tr[(1 x pi) Psi].
/// Throws ZeroProbabilityPostselection when p < p_min.
Postselected postselect_env(const TwoQubitState &state, const Projector &proj,
                            double p_min = kMinProbability);

/// Unnormalized Tr_pol[(1 x pi) Psi]; its trace is the success probability.
Mat2 postselect_unnormalized(const TwoQubitState &state, const Projector &proj);

enum class Factor { first, second };

/// Traces out one tensor factor of a 4x4 operator on C^2 x C^2.
Mat2 trace_out(const Mat4 &rho, Factor factor);

/// Reorders C^2 x C^2 into C^2 x C^2 with the factors exchanged.
Mat4 swap_factors(const Mat4 &rho);

bool is_density_matrix(const Mat2 &rho, double tol = kStateTolerance);
bool is_density_matrix(const Mat4 &rho, double tol = kStateTolerance);

} // namespace duality
