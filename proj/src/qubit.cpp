#include "duality/qubit.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "duality/errors.hpp"

namespace duality {

ZeroProbabilityPostselection::ZeroProbabilityPostselection(double probability)
    : Error("postselection probability " + std::to_string(probability) +
            " is below the validity floor"),
      probability_(probability) {}

EmptyBin::EmptyBin(std::size_t bin)
    : Error("angular window " + std::to_string(bin) + " contains no pixels"), bin_(bin) {}

double wrap_angle(double radians) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double wrapped = std::fmod(radians, two_pi);
  if (wrapped < 0.0) wrapped += two_pi;
  // fmod of a tiny negative number can round up to exactly 2pi
  if (wrapped >= two_pi) wrapped = 0.0;
  return wrapped;
}

StateParams StateParams::canonical() const { return {wrap_angle(theta), wrap_angle(alpha)}; }

namespace pauli {

const Mat2 &identity() {
  static const Mat2 m = Mat2::Identity();
  return m;
}

const Mat2 &sigma_x() {
  static const Mat2 m = (Mat2() << 0.0, 1.0, 1.0, 0.0).finished();
  return m;
}

const Mat2 &sigma_y() {
  static const Mat2 m = (Mat2() << 0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0).finished();
  return m;
}

const Mat2 &sigma_z() {
  static const Mat2 m = (Mat2() << 1.0, 0.0, 0.0, -1.0).finished();
  return m;
}

} // namespace pauli

Projector::Projector(const Vec2 &ket) : ket_(ket), matrix_(ket * ket.adjoint()) {}

Projector Projector::horizontal() { return Projector(Vec2(1.0, 0.0)); }

Projector Projector::vertical() { return Projector(Vec2(0.0, 1.0)); }

Projector Projector::from_bloch(double polar, double azimuth) {
  return Projector(Vec2(std::cos(polar / 2.0), std::polar(1.0, azimuth) * std::sin(polar / 2.0)));
}

Projector Projector::from_ket(const Vec2 &ket) {
  const double norm = ket.norm();
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw std::invalid_argument("projector ket must be a finite nonzero vector");
  return Projector(ket / norm);
}

namespace {

template <typename Matrix>
bool hermitian_unit_trace(const Matrix &rho, double tol) {
  if (!rho.allFinite()) return false;
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  return std::abs(rho.trace() - cplx(1.0, 0.0)) <= tol;
}

} // namespace

bool is_density_matrix(const Mat2 &rho, double tol) {
  if (!hermitian_unit_trace(rho, tol)) return false;
  // eigenvalues of a unit-trace Hermitian 2x2: (1 +- |r|) / 2 with |r| the Bloch length
  const double a = rho(0, 0).real() - rho(1, 1).real();
  const double bloch = std::sqrt(a * a + 4.0 * std::norm(rho(0, 1)));
  return (1.0 - bloch) / 2.0 >= -kPsdTolerance;
}

bool is_density_matrix(const Mat4 &rho, double tol) {
  if (!hermitian_unit_trace(rho, tol)) return false;
  const Mat4 hermitian = (rho + rho.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Mat4> solver(hermitian, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff() >= -kPsdTolerance;
}

QubitState::QubitState(const Mat2 &rho) : rho_(rho) {
  if (!is_density_matrix(rho_))
    throw std::invalid_argument("matrix is not a valid single-qubit density matrix");
}

QubitState QubitState::from_ket(const Vec2 &ket) {
  const double norm = ket.norm();
  if (!(norm > 0.0)) throw std::invalid_argument("cannot build a state from a zero ket");
  const Vec2 unit = ket / norm;
  return QubitState(unit * unit.adjoint());
}

TwoQubitState TwoQubitState::from_amplitudes(const Vec4 &psi) {
  if (!psi.allFinite() || std::abs(psi.norm() - 1.0) > kStateTolerance)
    throw std::invalid_argument("two-qubit amplitude vector must have unit norm");
  return TwoQubitState(psi);
}

TwoQubitState TwoQubitState::from_density(const Mat4 &rho) {
  if (!is_density_matrix(rho))
    throw std::invalid_argument("matrix is not a valid two-qubit density matrix");
  return TwoQubitState(rho);
}

const Vec4 &TwoQubitState::amplitudes() const {
  if (const auto *psi = std::get_if<Vec4>(&repr_)) return *psi;
  throw std::logic_error("state is stored as a density matrix");
}

Mat4 TwoQubitState::density() const {
  if (const auto *psi = std::get_if<Vec4>(&repr_)) return (*psi) * psi->adjoint();
  return std::get<Mat4>(repr_);
}

TwoQubitState build_state(const StateParams &params) {
  const double c = std::cos(params.theta / 2.0);
  const double s = std::sin(params.theta / 2.0);
  Vec4 psi = Vec4::Zero();
  psi(basis_index(Oam::plus, Pol::V)) = c;
  psi(basis_index(Oam::minus, Pol::H)) = s * std::cos(params.alpha / 2.0);
  psi(basis_index(Oam::minus, Pol::V)) = s * std::sin(params.alpha / 2.0);
  // exact unit norm up to rounding of cos^2 + sin^2
  return TwoQubitState::from_amplitudes(psi / psi.norm());
}

Mat2 trace_out(const Mat4 &rho, Factor factor) {
  Mat2 out = Mat2::Zero();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int k = 0; k < 2; ++k)
        out(a, b) += factor == Factor::second ? rho(2 * a + k, 2 * b + k) : rho(2 * k + a, 2 * k + b);
  return out;
}

Mat4 swap_factors(const Mat4 &rho) {
  Mat4 out;
  auto swapped = [](int i) { return 2 * (i % 2) + i / 2; };
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out(swapped(i), swapped(j)) = rho(i, j);
  return out;
}

Mat2 postselect_unnormalized(const TwoQubitState &state, const Projector &proj) {
  const Mat2 &pi = proj.matrix();
  Mat2 out = Mat2::Zero();
  if (state.is_pure_vector()) {
    // sum_{p,r} pi_{pr} psi_{a r} conj(psi_{b p})
    const Vec4 &psi = state.amplitudes();
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int p = 0; p < 2; ++p)
          for (int r = 0; r < 2; ++r)
            out(a, b) += pi(p, r) * psi(2 * a + r) * std::conj(psi(2 * b + p));
    return out;
  }
  const Mat4 rho = state.density();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int p = 0; p < 2; ++p)
        for (int r = 0; r < 2; ++r) out(a, b) += pi(p, r) * rho(2 * a + r, 2 * b + p);
  return out;
}

QubitState partial_trace_env(const TwoQubitState &state) {
  if (state.is_pure_vector()) {
    const Vec4 &psi = state.amplitudes();
    Mat2 out;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        out(a, b) = psi(2 * a) * std::conj(psi(2 * b)) + psi(2 * a + 1) * std::conj(psi(2 * b + 1));
    return QubitState(out);
  }
  return QubitState(trace_out(state.density(), Factor::second));
}

Postselected postselect_env(const TwoQubitState &state, const Projector &proj, double p_min) {
  const Mat2 unnormalized = postselect_unnormalized(state, proj);
  const double p = unnormalized.trace().real();
  if (!(p >= p_min)) throw ZeroProbabilityPostselection(p);
  Mat2 rho = unnormalized / p;
  // remove rounding-level anti-Hermitian residue before validation
  rho = (rho + rho.adjoint()).eval() / 2.0;
  return {QubitState(rho), std::min(p, 1.0)};
}

} // namespace duality
