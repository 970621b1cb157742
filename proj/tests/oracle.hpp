#pragma once

// Brute-force reference model used only by tests: states are assembled from
// explicit Kronecker products of basis kets, reduced states by summing
// (1 x <k|) rho (1 x |k>) over the environment basis. Shares no code with
// the library's index arithmetic.

#include <cmath>
#include <complex>

#include <Eigen/Dense>

namespace oracle {

using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec2 = Eigen::Vector2cd;
using Vec4 = Eigen::Vector4cd;
using cplx = std::complex<double>;

inline Vec4 kron(const Vec2 &a, const Vec2 &b) {
  Vec4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out(2 * i + j) = a(i) * b(j);
  return out;
}

inline Mat4 kron(const Mat2 &a, const Mat2 &b) {
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return out;
}

inline Vec2 ket0() { return Vec2(1.0, 0.0); }
inline Vec2 ket1() { return Vec2(0.0, 1.0); }

inline Mat4 state(double theta, double alpha) {
  const Vec2 plus_l = ket0(), minus_l = ket1(), h = ket0(), v = ket1();
  const Vec4 psi = std::cos(theta / 2) * kron(plus_l, v) +
                   std::sin(theta / 2) * kron(minus_l, std::cos(alpha / 2) * h + std::sin(alpha / 2) * v);
  return psi * psi.adjoint();
}

/// Tr_env via (1 x <k|) rho (1 x |k>).
inline Mat2 trace_env(const Mat4 &rho) {
  Mat2 out = Mat2::Zero();
  for (const Vec2 &k : {ket0(), ket1()}) {
    Eigen::Matrix<cplx, 4, 2> lift;
    lift.col(0) = kron(ket0(), k);
    lift.col(1) = kron(ket1(), k);
    out += lift.adjoint() * rho * lift;
  }
  return out;
}

struct Conditional {
  Mat2 rho;
  double p;
};

inline Conditional postselect(const Mat4 &rho, const Mat2 &projector) {
  const Mat4 lifted = kron(Mat2::Identity(), projector) * rho;
  const double p = lifted.trace().real();
  return {trace_env(lifted) / p, p};
}

inline double vis(const Mat2 &rho) {
  Mat2 sx, sy;
  sx << 0, 1, 1, 0;
  sy << 0, cplx(0, -1), cplx(0, 1), 0;
  return std::abs(((sx + cplx(0, 1) * sy) * rho).trace());
}

inline double pred(const Mat2 &rho) {
  Mat2 sz;
  sz << 1, 0, 0, -1;
  return std::abs((sz * rho).trace());
}

} // namespace oracle
