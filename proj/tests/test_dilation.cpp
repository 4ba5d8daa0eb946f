#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "nhdqpt/dilation.hpp"
#include "nhdqpt/errors.hpp"
#include "oracles.hpp"

using namespace nhdqpt;
using std::numbers::pi;

namespace {

const Vector2C kUp(1.0, 0.0);

double infidelity(const Vector2C& a, const Vector2C& b) {
  return 1.0 - std::norm(a.normalized().dot(b.normalized()));
}

}  // namespace

TEST_CASE("ancilla basis") {
  const auto a = ancilla_basis();
  CHECK(std::abs(a.minus.norm() - 1.0) <= 1e-15);
  CHECK(std::abs(a.plus.norm() - 1.0) <= 1e-15);
  CHECK(std::abs(a.minus.dot(a.plus)) <= 1e-15);
  const Matrix2C sy = oracle::pauli_y();
  CHECK((sy * a.minus + a.minus).norm() <= 1e-15);
  CHECK((sy * a.plus - a.plus).norm() <= 1e-15);
  CHECK((oracle::pauli_z() * a.minus - kI * a.plus).norm() <= 1e-15);
}

TEST_CASE("metric and omega") {
  const auto lkc = build_lkc({1, 1, 0, 0.3});
  const auto herm = build_lkc({1, 1, 0.2, 0.0});
  CHECK(max_abs_diff(metric(lkc, 0.3, 0.0, 20.0), Matrix2C(20.0 * sigma0())) <= 1e-14);
  CHECK(max_abs_diff(metric(herm, 0.3, 2.7, 20.0), Matrix2C(20.0 * sigma0())) <= 1e-12);
  CHECK(max_abs_diff(omega(lkc, 0.3, 0.0, 2.0), sigma0()) <= 1e-14);
  CHECK(max_abs_diff(omega(herm, 1.1, 4.0, 5.0), Matrix2C(2.0 * sigma0())) <= 1e-12);

  const Matrix2C m = metric(lkc, pi / 4, 1.0, 20.0);
  CHECK(max_abs_diff(m, Matrix2C(m.adjoint())) <= 1e-12);
  Eigen::SelfAdjointEigenSolver<Matrix2C> es(m);
  CHECK(es.eigenvalues().minCoeff() > 1.0);
  const Matrix2C w = omega(lkc, pi / 4, 1.0, 20.0);
  CHECK(max_abs_diff(Matrix2C(w * w + sigma0()), m) <= 1e-10);
  CHECK(max_abs_diff(Matrix2C(w.adjoint() * w + sigma0()), m) <= 1e-10);
  CHECK(max_abs_diff(w, Matrix2C(w.adjoint())) <= 1e-14);

  // oracle: M from the matrix exponential
  const Matrix2C uinv = oracle::expm(kI * 1.0 * hamiltonian(lkc, pi / 4));
  CHECK(max_abs_diff(m, Matrix2C(20.0 * uinv.adjoint() * uinv)) <= 1e-10);
}

TEST_CASE("omega rate against a centered difference") {
  const ChiralTwoBandModel models[] = {build_lkc({1, 1, 0, 0.3}), build_nrssh({0.5, 0.4, 0.5})};
  for (const auto& m : models) {
    for (double t : {0.0, 0.7, 2.4}) {
      const double h = 1e-5;
      const Matrix2C fd = (omega(m, 0.6, t + h, 20.0) - omega(m, 0.6, t - h, 20.0)) / (2 * h);
      CHECK(max_abs_diff(omega_rate(m, 0.6, t, 20.0), fd) <= 1e-7);
      const auto a = dilated_hamiltonian(m, 0.6, t, 20.0);
      const auto b = dilated_hamiltonian(m, 0.6, t, 20.0, 1e-6);
      CHECK(max_abs_diff(a.h_prime, b.h_prime) <= 1e-7);
    }
  }
}

TEST_CASE("window exceeded") {
  // k = 0: E = 1 - 0.3i, U^-1 grows like e^{0.3 t}
  const auto lkc = build_lkc({1, 1, 0, 0.3});
  try {
    omega(lkc, 0.0, 10.0, 1.5);
    FAIL("expected WindowExceededError");
  } catch (const WindowExceededError& e) {
    CHECK(e.minimal_m0() > 1.5);
    CHECK(omega(lkc, 0.0, 10.0, 1.01 * e.minimal_m0()).allFinite());
  }
}

TEST_CASE("dilated hamiltonian") {
  SUBCASE("Hermitian model") {
    const auto herm = build_lkc({1, 1, 0.2, 0.0});
    const auto f = dilated_hamiltonian(herm, 0.7, 1.3, 20.0);
    CHECK(max_abs_diff(f.lambda, hamiltonian(herm, 0.7)) <= 1e-8);
    CHECK(f.gamma.cwiseAbs().maxCoeff() <= 1e-8);
  }
  SUBCASE("t = 0, m0 = 2") {
    const auto f = dilated_hamiltonian(build_nrssh({0.5, 0.8, 0.2}), 0.4, 0.0, 2.0);
    CHECK(max_abs_diff(f.metric.inverse(), Matrix2C(0.5 * sigma0())) <= 1e-14);
    CHECK(f.lambda.allFinite());
    CHECK(max_abs_diff(f.lambda, Matrix2C(f.lambda.adjoint())) <= 1e-8);
    CHECK(max_abs_diff(f.gamma, Matrix2C(f.gamma.adjoint())) <= 1e-8);
  }
  SUBCASE("LKC coefficients are real and reassemble H'") {
    const auto f = dilated_hamiltonian(build_lkc({1, 1, 0, 0.3}), pi / 4, 0.5, 20.0);
    CHECK(f.coefficient_imag <= 1e-10);
    CHECK(f.hermiticity_residual <= kHermiticityTolerance);
    CHECK(max_abs_diff(assemble_from_coefficients(f.a, f.b), f.h_prime) <= 1e-10);
    CHECK(max_abs_diff(f.h_prime, Matrix4C(kron(f.lambda, sigma0()) + kron(f.gamma, oracle::pauli_z()))) <= 1e-14);
  }
  SUBCASE("dilated generator reproduces d/dt of the composite ansatz") {
    // i d/dt (psi, omega psi) = H' (psi, omega psi) with psi = U psi0
    const auto m = build_lkc({1, 1, 0, 0.3});
    const double k = 1.0, t = 0.8, h = 1e-5;
    const auto anc = ancilla_basis();
    auto composite = [&](double s) {
      const Vector2C psi = evolution_operator(m, k, s) * kUp;
      const Vector2C chi = omega(m, k, s, 20.0) * psi;
      Vector4C out;
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) out(2 * i + j) = psi(i) * anc.minus(j) + chi(i) * anc.plus(j);
      }
      return out;
    };
    const Vector4C lhs = kI * (composite(t + h) - composite(t - h)) / (2 * h);
    const Vector4C rhs = dilated_hamiltonian(m, k, t, 20.0).h_prime * composite(t);
    CHECK((lhs - rhs).norm() <= 1e-6);
  }
}

TEST_CASE("kron layout") {
  Matrix2C a;
  a << 1, 2, 3, 4;
  const Matrix4C k = kron(a, oracle::pauli_x());
  CHECK(k(0, 1) == Complex(1, 0));
  CHECK(k(1, 0) == Complex(1, 0));
  CHECK(k(0, 3) == Complex(2, 0));
  CHECK(k(2, 1) == Complex(3, 0));
  CHECK(k(3, 2) == Complex(4, 0));
  CHECK(k(0, 0) == Complex(0, 0));
}

TEST_CASE("simulate dilated") {
  SUBCASE("Hermitian model") {
    DilationConfig c;
    c.k = 0.9;
    c.t_max = 2.0;
    c.n_steps = 400;
    const auto frames = simulate_dilated(build_lkc({1, 1, 0.2, 0.0}), kUp, c);
    REQUIRE(frames.size() == 401);
    double worst = 0.0;
    for (const auto& f : frames) worst = std::max(worst, f.infidelity);
    CHECK(worst <= 1e-10);
  }
  SUBCASE("t_max = 0") {
    DilationConfig c;
    c.t_max = 0.0;
    c.n_steps = 16;
    const auto frames = simulate_dilated(build_lkc({1, 1, 0, 0.3}), kUp, c);
    CHECK(frames.back().infidelity <= 1e-15);
  }
  SUBCASE("LKC at k = pi/2, m0 = 40") {
    DilationConfig c;
    c.k = pi / 2;
    c.m0 = 40.0;
    const auto m = build_lkc({1, 1, 0, 0.3});
    const auto frames = simulate_dilated(m, kUp, c);
    const auto anc = ancilla_basis();
    double worst = 0.0, plus = 0.0, drift = 0.0, oracle_inf = 0.0;
    for (std::size_t i = 0; i < frames.size(); i += 100) {
      const auto& f = frames[i];
      worst = std::max(worst, f.infidelity);
      plus = std::max(plus, f.plus_residual);
      drift = std::max(drift, f.norm_drift);
      Vector2C post;
      for (int s = 0; s < 2; ++s) {
        post(s) = std::conj(anc.minus(0)) * f.state(2 * s) + std::conj(anc.minus(1)) * f.state(2 * s + 1);
      }
      const Vector2C direct = oracle::expm(-kI * f.t * hamiltonian(m, c.k)) * kUp;
      oracle_inf = std::max(oracle_inf, infidelity(direct, post));
    }
    CHECK(worst <= 1e-6);
    CHECK(plus <= 1e-6);
    CHECK(drift <= 1e-8);
    CHECK(oracle_inf <= 1e-6);
  }
  SUBCASE("invalid configurations") {
    DilationConfig c;
    c.n_steps = 8;
    CHECK_THROWS_AS(simulate_dilated(build_lkc({}), kUp, c), ParameterError);
    c.n_steps = 100;
    c.m0 = 1.0;
    CHECK_THROWS_AS(simulate_dilated(build_lkc({}), kUp, c), ParameterError);
  }
}

TEST_CASE("run dilation over built-in models") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> kd(-pi, pi);
  const ChiralTwoBandModel models[] = {build_lkc({1, 1, 0, 0.3}), build_nnn_lkc({1, 1.5, 1, 1.5, 0.5, 0.4}),
                                       build_nrssh({0.5, 0.4, 0.5})};
  for (const auto& m : models) {
    for (int i = 0; i < 2; ++i) {
      DilationConfig c;
      c.k = kd(rng);
      c.n_steps = 1500;
      const auto run = run_dilation(m, Vector2C(1.0, 1.0).normalized(), c);
      CHECK(run.max_infidelity <= 1e-6);
      CHECK(run.max_hermiticity_residual <= 1e-8);
      CHECK(run.max_coefficient_imag <= 1e-10);
      CHECK(run.m0 >= c.m0);
      CHECK(run.frames.size() == 1501);
    }
  }
}

TEST_CASE("run dilation doubles m0 when the window is exceeded") {
  DilationConfig c;
  c.k = 0.0;
  c.m0 = 1.5;
  c.t_max = 3.0;
  c.n_steps = 600;
  const auto run = run_dilation(build_lkc({1, 1, 0, 0.3}), kUp, c);
  CHECK(run.doublings >= 1);
  CHECK(run.m0 == 1.5 * std::pow(2.0, run.doublings));
  CHECK(run.max_infidelity <= 1e-6);

  c.t_max = 60.0;
  c.n_steps = 1000;
  CHECK_THROWS_AS(run_dilation(build_lkc({1, 1, 0, 0.3}), kUp, c), WindowExceededError);
}
