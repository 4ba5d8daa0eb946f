#pragma once

#include <array>
#include <string>
#include <vector>

#include "nhdqpt/bloch.hpp"

namespace nhdqpt {

/// Gap-closing analysis.
///
/// `candidates` are the roots of the orthogonality condition
/// h_a g_a + h_b g_b = 0 in [-pi, pi). These are the momenta at which the
/// gap can close and, equivalently, the only momenta at which E(k) can be
/// real. `momenta` is the subset where the norm balance
/// h_a^2 + h_b^2 - g_a^2 - g_b^2 also vanishes, i.e. where E(k) = 0.
struct GaplessSet {
  struct Residual {
    double norm_balance = 0.0;   ///< h_a^2 + h_b^2 - g_a^2 - g_b^2
    double orthogonality = 0.0;  ///< h_a g_a + h_b g_b
  };
  std::vector<double> candidates;
  std::vector<Residual> residuals;  ///< one per candidate
  std::vector<double> momenta;
};

/// Closed forms for the built-in families, dense sign scan plus bisection
/// for generic models.
GaplessSet gapless_momenta(const ChiralTwoBandModel& model, double tol = 1e-10);

/// Residuals of the two gap-closing conditions at k.
GaplessSet::Residual gap_residual(const ChiralTwoBandModel& model, double k);

/// A point on the (h_a, h_b) plane.
struct PlanarPoint {
  double a = 0.0;
  double b = 0.0;
};

struct ExceptionalPoints {
  std::array<PlanarPoint, 2> points;
  bool hermitian_limit = false;  ///< zero loss: both points sit at the origin
};

/// EPs of a constant-loss model: the two points p with p . g = 0, |p| = |g|.
/// Throws UnsupportedModelError when the loss depends on k.
ExceptionalPoints exceptional_points(const ChiralTwoBandModel& model);

enum class WindingMethod { angle_integration, ep_enclosure };

struct WindingResult {
  double w = 0.0;
  WindingMethod method = WindingMethod::angle_integration;
  int grid_size = 0;
  /// Accumulated change of Im phi(k) around the zone (angle method only).
  double imaginary_closure = 0.0;
};

inline constexpr int kDefaultWindingGrid = 4097;
inline constexpr double kGapTolerance = 1e-8;

/// w = (1/2pi) * accumulated Re phi(k), phi = arctan(d_b / d_a) continued
/// analytically. Uses an endpoint-inclusive uniform grid of n_k points
/// (first and last identified); the grid is doubled while any branch
/// increment exceeds pi/2. Throws GaplessError if |E(k)| < gap_tol on the grid.
WindingResult winding_number(const ChiralTwoBandModel& model, int n_k = kDefaultWindingGrid,
                             double gap_tol = kGapTolerance);

/// Signed winding numbers of the closed polygon h(k) around each EP.
std::array<int, 2> ep_windings(const ChiralTwoBandModel& model, int n_k = kDefaultWindingGrid);

/// w = (W_1 + W_2) / 2 from ep_windings; independent of winding_number.
WindingResult winding_via_ep_enclosure(const ChiralTwoBandModel& model,
                                       int n_k = kDefaultWindingGrid);

struct SymmetryCheck {
  bool holds = false;
  double max_violation = 0.0;
  std::string relation;
};

struct SymmetryReport {
  SymmetryCheck chiral;
  SymmetryCheck particle_hole;
  SymmetryCheck time_reversal;
  SymmetryCheck inversion;
  SymmetryCheck parity_time;
};

inline constexpr double kSymmetryTolerance = 1e-10;

/// Checks the defining relations on n_k sampled momenta. Operator
/// realisations follow the model family:
///   LKC, NNN-LKC: S = sx, C = sx (transpose), T = s0 (transpose), P = sz
///   NRSSH:        S = sz, C = sz (conjugate), T = s0 (conjugate), P = sx
///   generic:      S = s_c, C = s_c (transpose), T = s0 (transpose), P = s_a
/// PT is checked as (P T) H^T(k) (P T)^-1 = H(k).
SymmetryReport verify_symmetries(const ChiralTwoBandModel& model, int n_k = 257);

/// Signed distance-like function of the parameters, zero on a phase
/// boundary. Built-in models only.
///   LKC:     u^2/J^2 + v^2/Delta^2 - 1 (negative inside the w = 1 region)
///   NNN-LKC: |h_y(k0)| - |v| at the candidate k0 closest to the boundary
///   NRSSH:   |J1 +- J2| - gamma for whichever combination is closest to zero
double phase_boundary_residual(const ChiralTwoBandModel& model);

struct ParameterAxis {
  std::string name;
  double min = 0.0;
  double max = 1.0;
  int steps = 2;

  double value(int i) const;
};

enum class CellStatus { gapped, boundary, invalid };

struct PhaseCell {
  CellStatus status = CellStatus::invalid;
  double w = 0.0;
};

struct PhaseDiagramGrid {
  ParameterAxis axis1;
  ParameterAxis axis2;
  std::vector<PhaseCell> cells;  ///< axis1-major

  const PhaseCell& at(int i1, int i2) const { return cells[static_cast<std::size_t>(i1) * axis2.steps + i2]; }
};

/// Winding number on a 2D parameter grid around a built-in base model.
/// Cells where the spectrum closes on the k grid are marked boundary, cells
/// whose parameters are outside the family's domain are marked invalid.
PhaseDiagramGrid phase_diagram(const ChiralTwoBandModel& base, const ParameterAxis& axis1,
                               const ParameterAxis& axis2, int n_k = 1025, int workers = 1,
                               double gap_tol = kGapTolerance);

/// Periodic distance between two momenta.
double momentum_distance(double k1, double k2);

/// Maps k into [-pi, pi).
double wrap_momentum(double k);

}  // namespace nhdqpt
