#pragma once

#include <array>
#include <optional>
#include <vector>

#include "nhdqpt/bloch.hpp"

namespace nhdqpt {

/// Smallest |G| at which the phase of the return amplitude is defined.
inline constexpr double kAmplitudeFloor = 1e-14;

/// Principal argument of G(k,t), in (-pi, pi]. Throws CriticalPointError
/// when |G| <= kAmplitudeFloor.
double total_phase(const ChiralTwoBandModel& model, double k, double t);

/// Phi_D = -Re E ln cosh(2 Im E t) / (2 Im E), with the series
/// ln cosh(x)/x = x/2 - x^3/12 for |x| < 1e-4.
double dynamical_phase_closed(const ChiralTwoBandModel& model, double k, double t);

/// Simpson quadrature of -Re(Tr[U~^dag U H] / Tr[U~^dag U]) over [0, t] with
/// n_t intervals (n_t >= 16, rounded up to even). Traces are built from the
/// biorthogonal evolution operators, not from the closed form.
double dynamical_phase_quadrature(const ChiralTwoBandModel& model, double k, double t,
                                  int n_t = 1024);

/// Phi_G = Phi - Phi_D.
double geometric_phase(const ChiralTwoBandModel& model, double k, double t);

struct PhaseTriple {
  double total = 0.0;
  double dynamical = 0.0;
  double geometric = 0.0;
};

PhaseTriple phase_triple(const ChiralTwoBandModel& model, double k, double t);

/// Right eigenvectors |psi_s>, left eigenvectors |psi~_s> (H^dag psi~ = E_s^* psi~)
/// and eigenvalues E_s, s = 0 for +E and 1 for -E. <psi~_s|psi_s'> = delta_ss'.
struct BiorthogonalPair {
  std::array<Vector2C, 2> right;
  std::array<Vector2C, 2> left;
  std::array<Complex, 2> energy;

  /// |psi_s><psi~_s|
  Matrix2C projector(int s) const { return right[s] * left[s].adjoint(); }
};

/// Throws ExceptionalPointError when |E(k)| <= eps.
BiorthogonalPair biorthogonal_decompose(const ChiralTwoBandModel& model, double k,
                                        double eps = kSmallEnergy);

/// U(t) = sum_s exp(-i E_s t) |psi_s><psi~_s|
Matrix2C biorthogonal_evolution(const BiorthogonalPair& pair, double t);
/// U~(t) = sum_s exp(-i E_s t) |psi~_s><psi_s|
Matrix2C dual_evolution(const BiorthogonalPair& pair, double t);

struct DynamicalTraces {
  Complex denominator;  ///< Tr[rho0 U~^dag U]
  Complex numerator;    ///< Tr[rho0 U~^dag U H]
};

/// Traces of the dynamical-phase integrand. Without rho0 the plain traces
/// are returned; with it rho0 = 1/2 is inserted.
DynamicalTraces dynamical_traces(const ChiralTwoBandModel& model, const BiorthogonalPair& pair,
                                 double k, double t, bool with_rho0 = false);

enum class BzRange { reduced, full };

struct DtopValue {
  double nu = 0.0;
  BzRange bz_range = BzRange::full;
  int n_k = 0;  ///< segments actually used after refinement
};

/// [0, pi] for LKC and NNN-LKC, [-pi, pi] otherwise.
BzRange default_bz_range(const ChiralTwoBandModel& model);

inline constexpr int kDefaultDtopGrid = 4096;

/// Nearest-branch accumulation of Phi_G along k, divided by 2pi. The grid is
/// doubled (at most twice) while any increment exceeds pi/2.
/// Throws CriticalPointError within 1e-6 of a critical time.
DtopValue dtop(const ChiralTwoBandModel& model, double t, int n_k = kDefaultDtopGrid,
               std::optional<BzRange> range = std::nullopt);

/// Half of the full-zone accumulation with each increment weighted by
/// sign(k). Equals the reduced-zone value for parity-symmetric Phi_G.
double dtop_symmetrized(const ChiralTwoBandModel& model, double t, int n_k = kDefaultDtopGrid);

/// Jump of nu across t_c measured at t_c -+ delta.
/// boundary_drift is the continuous part contributed by the motion of
/// Phi_G at the ends of the range (zero for the full zone), tracked in time.
struct DtopJump {
  double before = 0.0;
  double after = 0.0;
  double raw = 0.0;
  double boundary_drift = 0.0;
  double quantized = 0.0;  ///< raw - boundary_drift
};

DtopJump dtop_jump(const ChiralTwoBandModel& model, double t_c, double delta = 0.05,
                   int n_k = kDefaultDtopGrid, std::optional<BzRange> range = std::nullopt);

/// nu(t) for each time, parallel over t. NaN where dtop throws a
/// DomainError: within 1e-6 of a critical time, or so close to one that the
/// doubled grid still cannot follow Phi_G.
std::vector<DtopValue> dtop_series(const ChiralTwoBandModel& model,
                                   const std::vector<double>& times, int n_k = kDefaultDtopGrid,
                                   int workers = 1, std::optional<BzRange> range = std::nullopt);

}  // namespace nhdqpt
