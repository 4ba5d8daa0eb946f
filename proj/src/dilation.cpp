#include "nhdqpt/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "nhdqpt/errors.hpp"

namespace nhdqpt {

namespace {

Matrix2C hermitian_part(const Matrix2C& m) { return 0.5 * (m + m.adjoint()); }

void validate(const DilationConfig& c) {
  if (!(c.m0 > 1.0)) throw ParameterError("dilation: m0 must exceed 1");
  if (c.n_steps < 16) throw ParameterError("dilation: n_steps must be at least 16");
  if (!(c.t_max >= 0.0)) throw ParameterError("dilation: t_max must be non-negative");
  if (!std::isfinite(c.k)) throw ParameterError("dilation: k must be finite");
}

Vector2C component(const Vector4C& s, const Vector2C& anc) {
  Vector2C out;
  for (int i = 0; i < 2; ++i) {
    out(i) = std::conj(anc(0)) * s(2 * i) + std::conj(anc(1)) * s(2 * i + 1);
  }
  return out;
}

Vector4C product_state(const Vector2C& sys, const Vector2C& anc) {
  Vector4C out;
  for (int i = 0; i < 2; ++i) {
    for (int a = 0; a < 2; ++a) out(2 * i + a) = sys(i) * anc(a);
  }
  return out;
}

}  // namespace

AncillaBasis ancilla_basis() {
  const double r = std::numbers::sqrt2 / 2.0;
  return {Vector2C(r, -kI * r), Vector2C(-kI * r, r)};
}

Matrix4C kron(const Matrix2C& a, const Matrix2C& b) {
  Matrix4C out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) out(2 * i + p, 2 * j + q) = a(i, j) * b(p, q);
  return out;
}

Matrix2C metric(const ChiralTwoBandModel& model, double k, double t, double m0) {
  if (!(m0 > 1.0)) throw ParameterError("metric: m0 must exceed 1");
  const Matrix2C u = evolution_operator(model, k, t);
  if (!(std::abs(u.determinant()) >= 1e-14)) {
    throw SingularEvolutionError("metric: U(k,t) is numerically singular");
  }
  const Matrix2C uinv = u.inverse();
  return hermitian_part(m0 * uinv.adjoint() * uinv);
}

namespace {

/// omega and its exact time derivative. dM/dt = i (M H - H^dag M); omega_dot
/// solves omega X + X omega = dM/dt, diagonal in the eigenbasis of omega.
std::pair<Matrix2C, Matrix2C> omega_and_rate(const ChiralTwoBandModel& model, double k, double t,
                                             double m0) {
  const Matrix2C m = metric(model, k, t, m0);
  Eigen::SelfAdjointEigenSolver<Matrix2C> es(m);
  const auto& ev = es.eigenvalues();
  if (!(ev(0) > 1.0)) {
    // lambda_min(M) scales linearly with m0
    const double minimal = m0 / ev(0);
    throw WindowExceededError("omega: M(t) - 1 is not positive definite; m0 must exceed " +
                                  std::to_string(minimal),
                              minimal);
  }
  const Eigen::Vector2d root = (ev.array() - 1.0).sqrt();
  const Matrix2C& v = es.eigenvectors();
  const Matrix2C w = hermitian_part(v * root.cast<Complex>().asDiagonal() * v.adjoint());

  const Matrix2C h = hamiltonian(model, k);
  const Matrix2C mdot = hermitian_part(kI * (m * h - h.adjoint() * m));
  Matrix2C x = v.adjoint() * mdot * v;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) x(i, j) /= root(i) + root(j);
  return {w, hermitian_part(v * x * v.adjoint())};
}

}  // namespace

Matrix2C omega(const ChiralTwoBandModel& model, double k, double t, double m0) {
  return omega_and_rate(model, k, t, m0).first;
}

Matrix2C omega_rate(const ChiralTwoBandModel& model, double k, double t, double m0) {
  return omega_and_rate(model, k, t, m0).second;
}

Matrix4C assemble_from_coefficients(const std::array<double, 4>& a,
                                    const std::array<double, 4>& b) {
  const std::array<Matrix2C, 4> s{sigma0(), pauli(PauliAxis::x), pauli(PauliAxis::y),
                                  pauli(PauliAxis::z)};
  Matrix4C out = Matrix4C::Zero();
  for (int i = 0; i < 4; ++i) {
    out += a[i] * kron(s[i], sigma0()) + b[i] * kron(s[i], pauli(PauliAxis::z));
  }
  return out;
}

DilationFrame dilated_hamiltonian(const ChiralTwoBandModel& model, double k, double t, double m0,
                                  double h_omega) {
  if (!(h_omega >= 0.0)) throw ParameterError("dilated_hamiltonian: h_omega must be non-negative");
  DilationFrame f;
  f.t = t;
  f.metric = metric(model, k, t, m0);
  std::tie(f.omega, f.omega_dot) = omega_and_rate(model, k, t, m0);
  if (h_omega > 0.0) {
    f.omega_dot = (omega(model, k, t + h_omega, m0) - omega(model, k, t - h_omega, m0)) /
                  (2.0 * h_omega);
  }
  const Matrix2C h = hamiltonian(model, k);
  const Matrix2C minv = f.metric.inverse();
  f.gamma = (f.omega_dot + kI * (h * f.omega - f.omega * h)) * minv;
  f.lambda = h + kI * f.gamma * f.omega;
  f.h_prime = kron(f.lambda, sigma0()) + kron(f.gamma, pauli(PauliAxis::z));
  f.hermiticity_residual = max_abs_diff(f.h_prime, Matrix4C(f.h_prime.adjoint()));
  if (f.hermiticity_residual > kHermiticityTolerance) {
    throw HermiticityError("dilated Hamiltonian not Hermitian: residual " +
                           std::to_string(f.hermiticity_residual));
  }
  const std::array<Matrix2C, 4> s{sigma0(), pauli(PauliAxis::x), pauli(PauliAxis::y),
                                  pauli(PauliAxis::z)};
  for (int i = 0; i < 4; ++i) {
    const Complex ai = (kron(s[i], sigma0()) * f.h_prime).trace() / 4.0;
    const Complex bi = (kron(s[i], pauli(PauliAxis::z)) * f.h_prime).trace() / 4.0;
    f.a[i] = ai.real();
    f.b[i] = bi.real();
    f.coefficient_imag = std::max({f.coefficient_imag, std::abs(ai.imag()), std::abs(bi.imag())});
  }
  return f;
}

std::vector<DilationFrame> simulate_dilated(const ChiralTwoBandModel& model, const Vector2C& psi0,
                                            const DilationConfig& config) {
  validate(config);
  if (std::abs(psi0.norm() - 1.0) > 1e-10) throw ParameterError("simulate_dilated: psi0 must be normalized");
  const double k = config.k;
  const double m0 = config.m0;
  const double dt = config.t_max / config.n_steps;
  const auto anc = ancilla_basis();

  auto hp = [&](double t) { return dilated_hamiltonian(model, k, t, m0); };

  std::vector<DilationFrame> frames;
  frames.reserve(static_cast<std::size_t>(config.n_steps) + 1);
  DilationFrame cur = hp(0.0);
  Vector4C state = product_state(psi0, anc.minus) + product_state(cur.omega * psi0, anc.plus);
  const double norm0 = state.norm();

  for (int step = 0;; ++step) {
    const double t = step * dt;
    cur.state = state;
    const Vector2C minus = component(state, anc.minus);
    const Vector2C plus = component(state, anc.plus);
    const Vector2C direct = evolution_operator(model, k, t) * psi0;
    const double dn = direct.norm(), mn = minus.norm();
    const double overlap = (dn > 0.0 && mn > 0.0) ? std::abs(direct.dot(minus)) / (dn * mn) : 0.0;
    cur.infidelity = std::max(0.0, 1.0 - overlap * overlap);
    cur.plus_residual = (plus - cur.omega * minus).norm();
    cur.norm_drift = std::abs(state.norm() - norm0) / norm0;
    if (cur.norm_drift > 1e-6) {
      throw StepSizeError("dilated evolution: norm drift " + std::to_string(cur.norm_drift) +
                          " exceeds 1e-6; increase n_steps");
    }
    frames.push_back(cur);
    if (step == config.n_steps) break;

    // classic RK4 for i d|Omega>/dt = H'(t)|Omega>
    const DilationFrame mid = hp(t + 0.5 * dt);
    DilationFrame next = hp(t + dt);
    const Matrix4C& h1 = cur.h_prime;
    const Matrix4C& h2 = mid.h_prime;
    const Matrix4C& h3 = next.h_prime;
    const Vector4C k1 = -kI * (h1 * state);
    const Vector4C k2 = -kI * (h2 * (state + 0.5 * dt * k1));
    const Vector4C k3 = -kI * (h2 * (state + 0.5 * dt * k2));
    const Vector4C k4 = -kI * (h3 * (state + dt * k3));
    state += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    cur = std::move(next);
  }
  return frames;
}

DilationRun run_dilation(const ChiralTwoBandModel& model, const Vector2C& psi0,
                         const DilationConfig& config, int max_doublings) {
  DilationConfig c = config;
  DilationRun run;
  for (int attempt = 0;; ++attempt) {
    try {
      run.frames = simulate_dilated(model, psi0, c);
      break;
    } catch (const WindowExceededError&) {
      if (attempt >= max_doublings) throw;
      c.m0 *= 2.0;
      ++run.doublings;
    }
  }
  run.m0 = c.m0;
  for (const auto& f : run.frames) {
    run.max_infidelity = std::max(run.max_infidelity, f.infidelity);
    run.max_hermiticity_residual = std::max(run.max_hermiticity_residual, f.hermiticity_residual);
    run.max_plus_residual = std::max(run.max_plus_residual, f.plus_residual);
    run.max_norm_drift = std::max(run.max_norm_drift, f.norm_drift);
    run.max_coefficient_imag = std::max(run.max_coefficient_imag, f.coefficient_imag);
  }
  return run;
}

}  // namespace nhdqpt
