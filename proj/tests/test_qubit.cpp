#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "duality/errors.hpp"
#include "duality/qubit.hpp"
#include "oracle.hpp"

using namespace duality;
using std::numbers::pi;

namespace {

double max_diff(const Mat2 &a, const Mat2 &b) { return (a - b).cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("pauli algebra") {
  using namespace pauli;
  for (const Mat2 *s : {&sigma_x(), &sigma_y(), &sigma_z()})
    CHECK(max_diff(*s * *s, identity()) < 1e-15);
  CHECK(max_diff(sigma_x() * sigma_y(), cplx(0, 1) * sigma_z()) < 1e-15);
}

TEST_CASE("build_state examples") {
  SUBCASE("theta = 0 is |l,V> for any alpha") {
    for (double alpha : {0.0, 0.3, pi, 5.0}) {
      const Vec4 psi = build_state({0.0, alpha}).amplitudes();
      CHECK(std::abs(psi(basis_index(Oam::plus, Pol::V)) - 1.0) < 1e-15);
      CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-15));
    }
  }
  SUBCASE("theta = pi, alpha = 0 is |-l,H>") {
    const Vec4 psi = build_state({pi, 0.0}).amplitudes();
    CHECK(std::abs(psi(basis_index(Oam::minus, Pol::H)) - 1.0) < 1e-15);
    CHECK(std::abs(psi(basis_index(Oam::plus, Pol::V))) < 1e-15);
  }
  SUBCASE("maximally correlated configuration") {
    const Vec4 psi = build_state({pi / 2, 0.0}).amplitudes();
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(psi(basis_index(Oam::plus, Pol::V)) - r) < 1e-15);
    CHECK(std::abs(psi(basis_index(Oam::minus, Pol::H)) - r) < 1e-15);
    CHECK(std::abs(psi(basis_index(Oam::plus, Pol::H))) == 0.0);
    CHECK(std::abs(psi(basis_index(Oam::minus, Pol::V))) < 1e-16);
  }
}

TEST_CASE("build_state matches the kron-product oracle and is normalized on a dense grid") {
  for (int i = 0; i < 64; ++i) {
    for (int j = 0; j < 64; ++j) {
      const StateParams params{2 * pi * i / 64, 2 * pi * j / 64};
      const TwoQubitState state = build_state(params);
      REQUIRE(std::abs(state.amplitudes().norm() - 1.0) <= 1e-12);
      REQUIRE((state.density() - oracle::state(params.theta, params.alpha)).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
}

TEST_CASE("partial_trace_env examples") {
  SUBCASE("product state") {
    Vec4 psi = Vec4::Zero();
    psi(basis_index(Oam::plus, Pol::V)) = 1.0;
    const Mat2 rho = partial_trace_env(TwoQubitState::from_amplitudes(psi)).matrix();
    CHECK(max_diff(rho, (Mat2() << 1, 0, 0, 0).finished()) < 1e-15);
  }
  SUBCASE("maximally correlated state reduces to identity/2") {
    const Mat2 rho = partial_trace_env(build_state({pi / 2, 0.0})).matrix();
    CHECK(max_diff(rho, Mat2::Identity() / 2.0) < 1e-15);
  }
  SUBCASE("theta = alpha = pi/2") {
    // frozen from the brute-force oracle: diag (1/2, 1/2), |rho_01| = 0.35355339059327373
    const Mat2 rho = partial_trace_env(build_state({pi / 2, pi / 2})).matrix();
    CHECK(rho(0, 0).real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(rho(1, 1).real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(std::abs(rho(0, 1)) == doctest::Approx(0.35355339059327373).epsilon(1e-14));
    CHECK(max_diff(rho, oracle::trace_env(oracle::state(pi / 2, pi / 2))) < 1e-14);
  }
}

TEST_CASE("vector and density-matrix paths agree") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(-10.0, 10.0);
  for (int trial = 0; trial < 500; ++trial) {
    const StateParams params{angle(rng), angle(rng)};
    const TwoQubitState vec = build_state(params);
    const TwoQubitState mat = TwoQubitState::from_density(vec.density());
    CHECK(max_diff(partial_trace_env(vec).matrix(), partial_trace_env(mat).matrix()) < 1e-14);
    const Projector proj = Projector::from_bloch(angle(rng), angle(rng));
    CHECK(max_diff(postselect_unnormalized(vec, proj), postselect_unnormalized(mat, proj)) < 1e-14);
  }
}

TEST_CASE("postselect_env examples") {
  SUBCASE("horizontal postselection of |l,V> has zero probability") {
    CHECK_THROWS_AS(postselect_env(build_state({0.0, 1.3}), Projector::horizontal()),
                    ZeroProbabilityPostselection);
  }
  SUBCASE("vertical postselection of the maximally correlated state") {
    const Postselected post = postselect_env(build_state({pi / 2, 0.0}), Projector::vertical());
    CHECK(post.probability == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(max_diff(post.state.matrix(), (Mat2() << 1, 0, 0, 0).finished()) < 1e-14);
  }
  SUBCASE("theta = alpha = pi/2, vertical") {
    // oracle: p = 0.75, |rho_01| = 0.35355339059327373 / 0.75 = 0.4714045207910316
    const Postselected post = postselect_env(build_state({pi / 2, pi / 2}), Projector::vertical());
    CHECK(post.probability == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(std::abs(post.state.coherence()) == doctest::Approx(0.4714045207910316).epsilon(1e-13));
    const auto ref = oracle::postselect(oracle::state(pi / 2, pi / 2), Projector::vertical().matrix());
    CHECK(max_diff(post.state.matrix(), ref.rho) < 1e-14);
  }
  SUBCASE("custom floor") {
    CHECK_THROWS_AS(postselect_env(build_state({1e-4, 0.0}), Projector::horizontal(), 1e-6),
                    ZeroProbabilityPostselection);
    CHECK_NOTHROW(postselect_env(build_state({1e-4, 0.0}), Projector::horizontal(), 1e-12));
  }
}

TEST_CASE("postselection over {H, V} decomposes the reduced state") {
  for (int i = 0; i < 64; ++i) {
    for (int j = 0; j < 64; ++j) {
      const TwoQubitState state = build_state({2 * pi * i / 64, 2 * pi * j / 64});
      const Mat2 h = postselect_unnormalized(state, Projector::horizontal());
      const Mat2 v = postselect_unnormalized(state, Projector::vertical());
      REQUIRE(std::abs(h.trace().real() + v.trace().real() - 1.0) <= 1e-12);
      REQUIRE(max_diff(h + v, partial_trace_env(state).matrix()) <= 1e-12);
      // normalized branches recombine with their probabilities
      Mat2 recombined = Mat2::Zero();
      for (const Projector &proj : {Projector::horizontal(), Projector::vertical()}) {
        try {
          const Postselected post = postselect_env(state, proj);
          recombined += post.probability * post.state.matrix();
        } catch (const ZeroProbabilityPostselection &) {
        }
      }
      REQUIRE(max_diff(recombined, partial_trace_env(state).matrix()) <= 1e-12);
    }
  }
}

TEST_CASE("partial trace is independent of tensor-factor order") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 200; ++trial) {
    // random mixed two-qubit state A A^dagger / Tr
    Mat4 a;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) a(i, j) = cplx(gauss(rng), gauss(rng));
    Mat4 rho = a * a.adjoint();
    rho /= rho.trace();
    const TwoQubitState state = TwoQubitState::from_density(rho);
    const Mat2 direct = partial_trace_env(state).matrix();
    const Mat2 swapped = trace_out(swap_factors(rho), Factor::first);
    CHECK(max_diff(direct, swapped) <= 1e-12);
    CHECK(max_diff(direct, oracle::trace_env(rho)) <= 1e-12);
  }
}

TEST_CASE("projectors") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> angle(0.0, 2 * pi);
  for (int trial = 0; trial < 100; ++trial) {
    const Mat2 p = Projector::from_bloch(angle(rng), angle(rng)).matrix();
    CHECK(max_diff(p * p, p) < 1e-12);
    CHECK(max_diff(p, p.adjoint()) < 1e-15);
    CHECK(std::abs(p.trace() - 1.0) < 1e-12);
  }
  CHECK_THROWS_AS(Projector::from_ket(Vec2::Zero()), std::invalid_argument);
}

TEST_CASE("state validation") {
  CHECK_THROWS_AS(TwoQubitState::from_amplitudes(Vec4(1.0, 1.0, 0.0, 0.0)), std::invalid_argument);
  Mat4 not_psd = Mat4::Zero();
  not_psd(0, 0) = 1.5;
  not_psd(1, 1) = -0.5;
  CHECK_THROWS_AS(TwoQubitState::from_density(not_psd), std::invalid_argument);
  CHECK_THROWS_AS(QubitState((Mat2() << 1, 1, 0, 0).finished()), std::invalid_argument);
}

TEST_CASE("canonical angles") {
  const StateParams p = StateParams{-pi / 2, 5 * pi}.canonical();
  CHECK(p.theta == doctest::Approx(3 * pi / 2));
  CHECK(p.alpha == doctest::Approx(pi));
  CHECK(wrap_angle(-1e-300) < 2 * pi);
}
