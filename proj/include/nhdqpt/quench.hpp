#pragma once

#include <string>
#include <vector>

#include "nhdqpt/bloch.hpp"
#include "nhdqpt/topology.hpp"

namespace nhdqpt {

/// G(k,t) = Tr[rho0 U(k,t)] = cos(E(k) t) for the infinite-temperature
/// initial state rho0 = 1/2.
Complex return_amplitude(const ChiralTwoBandModel& model, double k, double t);

struct CriticalMomentum {
  double k = 0.0;
  double energy = 0.0;  ///< E(k_c), real and positive
  double period = 0.0;  ///< T(k_c) = pi / E(k_c)
};

/// Critical momenta (E(k_c) real, non-zero) with their critical-time ladders
/// t_n(k_c) = (n - 1/2) T(k_c) for n in [n_min, n_max].
struct CriticalSet {
  std::vector<CriticalMomentum> momenta;
  /// Candidates where E(k) = 0 exactly: t_n diverges, no observable DQPT.
  std::vector<double> unobservable;
  int n_min = 1;
  int n_max = 8;

  double time(std::size_t i, int n) const { return (n - 0.5) * momenta[i].period; }
  bool empty() const { return momenta.empty(); }
  /// Periods that differ by more than rel_tol (relative), ascending.
  std::vector<double> distinct_periods(double rel_tol = 1e-9) const;
  /// All t_n(k_c) with n in [n_min, n_max] and t in [t0, t1], ascending,
  /// coincident values merged.
  std::vector<double> times_in_window(double t0, double t1) const;
};

/// Closed forms for LKC, NNN-LKC and NRSSH; generic models reuse the
/// candidate set from gapless_momenta and keep those with positive norm
/// balance (real E).
CriticalSet critical_set(const ChiralTwoBandModel& model, int n_min = 1, int n_max = 8,
                         double tol = 1e-10);

/// Same set, always computed from the candidate momenta and E = sqrt(h^2 - g^2);
/// used to cross-check the closed forms.
CriticalSet critical_set_from_candidates(const ChiralTwoBandModel& model, int n_min = 1,
                                         int n_max = 8, double tol = 1e-10);

inline constexpr int kDefaultRateGrid = 8192;

/// g(t) = -(1/2pi) * integral over the zone of ln|G(k,t)|^2, midpoint rule on
/// n_k points k_j = -pi + (j + 1/2) dk. Returns +inf if some |G| < 1e-14.
double rate_function(const ChiralTwoBandModel& model, double t, int n_k = kDefaultRateGrid);

struct QuenchTrace {
  std::vector<double> times;
  std::vector<double> rate;
  int n_k = 0;
};

/// g(t) on t = t0 + i dt for i = 0 .. floor((t1 - t0)/dt), parallel over t.
QuenchTrace quench_trace(const ChiralTwoBandModel& model, double t0, double t1, double dt,
                         int n_k = kDefaultRateGrid, int workers = 1);

struct CuspOptions {
  /// A sample is a cusp candidate when its |second difference| exceeds this
  /// multiple of the median |second difference| in the surrounding window.
  double jump_threshold = 50.0;
  int window = 50;
  /// Second differences below this are roundoff, never cusps.
  double noise_floor = 1e-10;
  /// Candidates closer than this many samples are one cusp.
  int merge_gap = 20;
};

/// Times of first-derivative discontinuities of a uniformly sampled trace.
/// Throws ParameterError for fewer than 3 samples.
std::vector<double> detect_cusps(const QuenchTrace& trace, const CuspOptions& options = {});

/// One row of the NHTP <-> DQPT correspondence tables.
struct CorrespondenceRow {
  std::string condition;
  std::string geometric_picture;
  double w = 0.0;
  std::string critical_structure;
  /// Number of distinct critical periods the row predicts.
  int periods = 0;
  /// Critical momenta mod the sign of k (|k_c| in [0, pi]) when the row
  /// fixes them; empty when the row only fixes their count.
  std::vector<double> momenta;
  bool momenta_fixed = false;
};

struct DqptReport {
  ModelFamily family = ModelFamily::generic;
  WindingResult winding;
  CriticalSet critical;
  CorrespondenceRow row;
  bool consistent = false;
  std::string diagnostic;
};

/// Winding number + critical set matched against the family's table row.
/// Built-in models only; throws GaplessError at a phase boundary.
DqptReport dqpt_report(const ChiralTwoBandModel& model, int n_k = kDefaultWindingGrid,
                       int n_min = 1, int n_max = 8);

}  // namespace nhdqpt
