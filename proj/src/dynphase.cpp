#include "nhdqpt/dynphase.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "nhdqpt/errors.hpp"
#include "nhdqpt/parallel.hpp"
#include "nhdqpt/quench.hpp"

namespace nhdqpt {

namespace {

constexpr double kPi = std::numbers::pi;

/// ln cosh(x) / x, finite for all x.
double log_cosh_over_x(double x) {
  const double ax = std::abs(x);
  if (ax < 1e-4) return x / 2.0 - x * x * x / 12.0;
  return (ax + std::log1p(std::exp(-2.0 * ax)) - std::numbers::ln2) / x;
}

double nearest_branch(double d) { return std::remainder(d, 2.0 * kPi); }

bool near_critical_time(const ChiralTwoBandModel& model, double t, double tol = 1e-6) {
  const auto set = critical_set(model);
  for (const auto& m : set.momenta) {
    const double n = std::max(1.0, std::round(t / m.period + 0.5));
    if (std::abs(t - (n - 0.5) * m.period) < tol) return true;
  }
  return false;
}

std::pair<double, double> range_bounds(BzRange range) {
  return range == BzRange::reduced ? std::pair{0.0, kPi} : std::pair{-kPi, kPi};
}

/// Sum of nearest-branch increments of Phi_G over n segments of [a, b].
/// Weighted by sign of the segment midpoint when `signed_by_k`.
/// Returns nullopt if some increment exceeds pi/2.
std::optional<double> accumulate(const ChiralTwoBandModel& model, double t, double a, double b,
                                 int n, bool signed_by_k) {
  const double dk = (b - a) / n;
  std::vector<double> incs(static_cast<std::size_t>(n));
  double prev = geometric_phase(model, a, t);
  for (int j = 1; j <= n; ++j) {
    const double k = j == n ? b : a + j * dk;
    const double cur = geometric_phase(model, k, t);
    const double d = nearest_branch(cur - prev);
    if (std::abs(d) > kPi / 2.0) return std::nullopt;
    const double mid = a + (j - 0.5) * dk;
    incs[j - 1] = signed_by_k && mid < 0.0 ? -d : d;
    prev = cur;
  }
  return pairwise_sum(incs);
}

/// Change of Phi_G(k, .) over [t0, t1], followed continuously in time.
double tracked_change(const ChiralTwoBandModel& model, double k, double t0, double t1,
                      int steps) {
  double total = 0.0;
  double prev = geometric_phase(model, k, t0);
  for (int i = 1; i <= steps; ++i) {
    const double cur = geometric_phase(model, k, t0 + (t1 - t0) * i / steps);
    total += nearest_branch(cur - prev);
    prev = cur;
  }
  return total;
}

}  // namespace

double total_phase(const ChiralTwoBandModel& model, double k, double t) {
  const Complex g = return_amplitude(model, k, t);
  if (!(std::abs(g) > kAmplitudeFloor)) {
    throw CriticalPointError("total phase undefined: G(k,t) vanishes");
  }
  const double phi = std::arg(g);
  return phi == -kPi ? kPi : phi;
}

double dynamical_phase_closed(const ChiralTwoBandModel& model, double k, double t) {
  const Complex e = dispersion(model, k);
  return -e.real() * t * log_cosh_over_x(2.0 * e.imag() * t);
}

double geometric_phase(const ChiralTwoBandModel& model, double k, double t) {
  return total_phase(model, k, t) - dynamical_phase_closed(model, k, t);
}

PhaseTriple phase_triple(const ChiralTwoBandModel& model, double k, double t) {
  PhaseTriple p;
  p.total = total_phase(model, k, t);
  p.dynamical = dynamical_phase_closed(model, k, t);
  p.geometric = p.total - p.dynamical;
  return p;
}

BiorthogonalPair biorthogonal_decompose(const ChiralTwoBandModel& model, double k, double eps) {
  const Complex e = dispersion(model, k);
  if (!(std::abs(e) > eps)) {
    throw ExceptionalPointError("eigenvectors coalesce: |E(k)| below threshold");
  }
  const Matrix2C h = hamiltonian(model, k);
  const Complex a = h(0, 0), b = h(0, 1), c = h(1, 0);
  BiorthogonalPair pair;
  pair.energy = {e, -e};
  Matrix2C r;
  for (int s = 0; s < 2; ++s) {
    const Complex lambda = pair.energy[s];
    const Vector2C v1(b, lambda - a);
    const Vector2C v2(lambda + a, c);
    Vector2C v = v1.norm() >= v2.norm() ? v1 : v2;
    v.normalize();
    pair.right[s] = v;
    r.col(s) = v;
  }
  const Matrix2C rinv = r.inverse();
  for (int s = 0; s < 2; ++s) pair.left[s] = rinv.row(s).adjoint();
  return pair;
}

Matrix2C biorthogonal_evolution(const BiorthogonalPair& pair, double t) {
  Matrix2C u = Matrix2C::Zero();
  for (int s = 0; s < 2; ++s) u += std::exp(-kI * pair.energy[s] * t) * pair.projector(s);
  return u;
}

Matrix2C dual_evolution(const BiorthogonalPair& pair, double t) {
  Matrix2C u = Matrix2C::Zero();
  for (int s = 0; s < 2; ++s) {
    u += std::exp(-kI * pair.energy[s] * t) * (pair.left[s] * pair.right[s].adjoint());
  }
  return u;
}

DynamicalTraces dynamical_traces(const ChiralTwoBandModel& model, const BiorthogonalPair& pair,
                                 double k, double t, bool with_rho0) {
  const Matrix2C u = biorthogonal_evolution(pair, t);
  const Matrix2C ut = dual_evolution(pair, t);
  Matrix2C prod = ut.adjoint() * u;
  if (with_rho0) prod = (0.5 * sigma0()) * prod;
  return {prod.trace(), (prod * hamiltonian(model, k)).trace()};
}

double dynamical_phase_quadrature(const ChiralTwoBandModel& model, double k, double t,
                                  int n_t) {
  if (n_t < 16) throw ParameterError("dynamical_phase_quadrature: n_t must be at least 16");
  if (n_t % 2) ++n_t;
  if (t == 0.0) return 0.0;
  const Complex e = dispersion(model, k);
  if (std::abs(e) <= kSmallEnergy) return 0.0;
  const auto pair = biorthogonal_decompose(model, k);
  const double h = t / n_t;
  std::vector<double> terms(static_cast<std::size_t>(n_t) + 1);
  for (int i = 0; i <= n_t; ++i) {
    const auto tr = dynamical_traces(model, pair, k, i * h);
    const double f = -(tr.numerator / tr.denominator).real();
    const double w = (i == 0 || i == n_t) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    terms[i] = w * f;
  }
  return pairwise_sum(terms) * h / 3.0;
}

BzRange default_bz_range(const ChiralTwoBandModel& model) {
  switch (model.family()) {
    case ModelFamily::lkc:
    case ModelFamily::nnn_lkc:
      return BzRange::reduced;
    default:
      return BzRange::full;
  }
}

DtopValue dtop(const ChiralTwoBandModel& model, double t, int n_k,
               std::optional<BzRange> range) {
  if (n_k < 256) throw ParameterError("dtop: n_k must be at least 256");
  if (near_critical_time(model, t)) {
    throw CriticalPointError("dtop: t is within 1e-6 of a critical time");
  }
  DtopValue out;
  out.bz_range = range.value_or(default_bz_range(model));
  const auto [a, b] = range_bounds(out.bz_range);
  for (int attempt = 0; attempt <= 2; ++attempt) {
    const int n = n_k << attempt;
    if (auto s = accumulate(model, t, a, b, n, false)) {
      out.nu = *s / (2.0 * kPi);
      out.n_k = n;
      return out;
    }
  }
  throw InsufficientGridError("dtop: Phi_G increments exceed pi/2 after two grid doublings");
}

double dtop_symmetrized(const ChiralTwoBandModel& model, double t, int n_k) {
  if (n_k < 256) throw ParameterError("dtop_symmetrized: n_k must be at least 256");
  if (near_critical_time(model, t)) {
    throw CriticalPointError("dtop: t is within 1e-6 of a critical time");
  }
  for (int attempt = 0; attempt <= 2; ++attempt) {
    const int n = 2 * (n_k << attempt);
    if (auto s = accumulate(model, t, -kPi, kPi, n, true)) return *s / (4.0 * kPi);
  }
  throw InsufficientGridError("dtop: Phi_G increments exceed pi/2 after two grid doublings");
}

DtopJump dtop_jump(const ChiralTwoBandModel& model, double t_c, double delta, int n_k,
                   std::optional<BzRange> range) {
  if (!(delta > 0.0) || !(t_c - delta >= 0.0)) {
    throw ParameterError("dtop_jump: need 0 < delta <= t_c");
  }
  const BzRange r = range.value_or(default_bz_range(model));
  DtopJump j;
  j.before = dtop(model, t_c - delta, n_k, r).nu;
  j.after = dtop(model, t_c + delta, n_k, r).nu;
  j.raw = j.after - j.before;
  if (r == BzRange::reduced) {
    const auto [a, b] = range_bounds(r);
    constexpr int steps = 400;
    j.boundary_drift = (tracked_change(model, b, t_c - delta, t_c + delta, steps) -
                        tracked_change(model, a, t_c - delta, t_c + delta, steps)) /
                       (2.0 * kPi);
  }
  j.quantized = j.raw - j.boundary_drift;
  return j;
}

std::vector<DtopValue> dtop_series(const ChiralTwoBandModel& model,
                                   const std::vector<double>& times, int n_k, int workers,
                                   std::optional<BzRange> range) {
  if (n_k < 256) throw ParameterError("dtop: n_k must be at least 256");
  std::vector<DtopValue> out(times.size());
  parallel_for(times.size(), workers, [&](std::size_t i) {
    try {
      out[i] = dtop(model, times[i], n_k, range);
    } catch (const DomainError&) {
      // at or next to a critical time
      out[i].nu = std::numeric_limits<double>::quiet_NaN();
      out[i].bz_range = range.value_or(default_bz_range(model));
      out[i].n_k = n_k;
    }
  });
  return out;
}

}  // namespace nhdqpt
