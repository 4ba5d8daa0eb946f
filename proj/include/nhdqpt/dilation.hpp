#pragma once

#include <array>
#include <vector>

#include "nhdqpt/bloch.hpp"

namespace nhdqpt {

struct DilationConfig {
  double m0 = 20.0;  ///< initial metric scale, > 1
  double t_max = 3.0;
  int n_steps = 3000;  ///< >= 16
  double k = 0.0;
};

/// Ancilla states |-> = (1, -i)/sqrt2 and |+> = -i (1, i)/sqrt2, eigenvectors
/// of sigma_y with sigma_z|-> = i|+>.
struct AncillaBasis {
  Vector2C minus;
  Vector2C plus;
};

AncillaBasis ancilla_basis();

/// M(t) = (U^-1)^dag m0 U^-1. Throws SingularEvolutionError if |det U| < 1e-14.
Matrix2C metric(const ChiralTwoBandModel& model, double k, double t, double m0);

/// Hermitian square root of M(t) - 1. Throws WindowExceededError when
/// M - 1 is not positive definite.
Matrix2C omega(const ChiralTwoBandModel& model, double k, double t, double m0);

/// d omega/dt from dM/dt = i (M H - H^dag M) via omega X + X omega = dM/dt.
Matrix2C omega_rate(const ChiralTwoBandModel& model, double k, double t, double m0);

inline constexpr double kHermiticityTolerance = 1e-8;

struct DilationFrame {
  double t = 0.0;
  Matrix2C metric;
  Matrix2C omega;
  Matrix2C omega_dot;
  Matrix2C lambda;
  Matrix2C gamma;
  Matrix4C h_prime;
  /// A_i = Tr[(s_i x s0) H']/4, B_i = Tr[(s_i x sz) H']/4, i = 0..3.
  std::array<double, 4> a{};
  std::array<double, 4> b{};
  double coefficient_imag = 0.0;  ///< largest |Im| among the eight projections
  double hermiticity_residual = 0.0;

  // Filled by simulate_dilated.
  Vector4C state = Vector4C::Zero();
  double infidelity = 0.0;
  double plus_residual = 0.0;  ///< |plus component - omega * minus component|
  double norm_drift = 0.0;
};

/// Lambda, Gamma and H' = Lambda x s0 + Gamma x sz at time t. d omega/dt is
/// omega_rate, or a centered difference of step h_omega when h_omega > 0.
/// Throws HermiticityError when H' - H'^dag exceeds kHermiticityTolerance.
DilationFrame dilated_hamiltonian(const ChiralTwoBandModel& model, double k, double t, double m0,
                                  double h_omega = 0.0);

/// sum_i A_i s_i x s0 + B_i s_i x sz
Matrix4C assemble_from_coefficients(const std::array<double, 4>& a,
                                    const std::array<double, 4>& b);

/// A x B with the first factor's index major.
Matrix4C kron(const Matrix2C& a, const Matrix2C& b);

/// RK4 integration of the dilated Schrodinger equation from
/// |psi0>|-> + omega(0)|psi0>|+>, one frame per step (n_steps + 1 frames).
/// Throws StepSizeError when the composite norm drifts by more than 1e-6.
std::vector<DilationFrame> simulate_dilated(const ChiralTwoBandModel& model, const Vector2C& psi0,
                                            const DilationConfig& config);

struct DilationRun {
  std::vector<DilationFrame> frames;
  double m0 = 0.0;  ///< metric scale actually used
  int doublings = 0;
  double max_infidelity = 0.0;
  double max_hermiticity_residual = 0.0;
  double max_plus_residual = 0.0;
  double max_norm_drift = 0.0;
  double max_coefficient_imag = 0.0;
};

/// simulate_dilated, doubling m0 up to three times on WindowExceededError.
DilationRun run_dilation(const ChiralTwoBandModel& model, const Vector2C& psi0,
                         const DilationConfig& config, int max_doublings = 3);

}  // namespace nhdqpt
