#include "nhdqpt/quench.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "nhdqpt/errors.hpp"
#include "nhdqpt/parallel.hpp"

namespace nhdqpt {

namespace {

constexpr double kPi = std::numbers::pi;

/// ln|cos z|^2 without overflow for large |Im z| and without cancellation
/// near the zeros of cos.
double log_abs_cos_sq(Complex z) {
  const double x = z.real();
  const double ay = std::abs(z.imag());
  const double em = std::expm1(-2.0 * ay);
  const double c = std::cos(x);
  const double inner = em * em + 4.0 * std::exp(-2.0 * ay) * c * c;
  return 2.0 * ay - 2.0 * std::numbers::ln2 + std::log(inner);
}

// |G|^2 < 1e-28
constexpr double kLogZeroAmplitude = -64.47238260383328;

std::vector<Complex> midpoint_energies(const ChiralTwoBandModel& model, int n_k) {
  std::vector<Complex> es(static_cast<std::size_t>(n_k));
  const double dk = 2.0 * kPi / n_k;
  for (int j = 0; j < n_k; ++j) es[j] = dispersion(model, -kPi + (j + 0.5) * dk);
  return es;
}

double rate_from_energies(const std::vector<Complex>& es, double t) {
  std::vector<double> terms(es.size());
  for (std::size_t j = 0; j < es.size(); ++j) {
    const double l = log_abs_cos_sq(es[j] * t);
    if (l < kLogZeroAmplitude) return std::numeric_limits<double>::infinity();
    terms[j] = l;
  }
  return -pairwise_sum(terms) / static_cast<double>(es.size());
}

void push_momentum(CriticalSet& set, double k, double energy) {
  set.momenta.push_back({wrap_momentum(k), energy, kPi / energy});
}

/// Sorts by k so closed-form and candidate routes list momenta identically.
void finish(CriticalSet& set) {
  std::sort(set.momenta.begin(), set.momenta.end(),
            [](const CriticalMomentum& a, const CriticalMomentum& b) { return a.k < b.k; });
  std::sort(set.unobservable.begin(), set.unobservable.end());
}

/// Classifies E^2 = q at a candidate momentum.
void classify(CriticalSet& set, double k, double q, double tol) {
  if (q > tol) {
    push_momentum(set, k, std::sqrt(q));
  } else if (q >= -tol) {
    set.unobservable.push_back(wrap_momentum(k));
  }
}

/// k_0 in [0, pi] with h_z(k_0) = 0: cos k_0 = (-J1 +- sqrt(J1^2 + 8 J2 (J2 - u))) / (4 J2),
/// or -u/J1 when J2 = 0.
std::vector<double> nnn_k0(const NnnLkcParams& p) {
  std::vector<double> cs;
  if (p.J2 != 0.0) {
    const double disc = p.J1 * p.J1 + 8.0 * p.J2 * (p.J2 - p.u);
    if (disc >= 0.0) {
      cs.push_back((-p.J1 + std::sqrt(disc)) / (4.0 * p.J2));
      if (disc > 0.0) cs.push_back((-p.J1 - std::sqrt(disc)) / (4.0 * p.J2));
    }
  } else if (p.J1 != 0.0) {
    cs.push_back(-p.u / p.J1);
  }
  std::vector<double> ks;
  for (double c : cs) {
    if (std::abs(c) <= 1.0) ks.push_back(std::acos(c));
  }
  return ks;
}

}  // namespace

Complex return_amplitude(const ChiralTwoBandModel& model, double k, double t) {
  return std::cos(dispersion(model, k) * t);
}

std::vector<double> CriticalSet::distinct_periods(double rel_tol) const {
  std::vector<double> ps;
  for (const auto& m : momenta) ps.push_back(m.period);
  std::sort(ps.begin(), ps.end());
  std::vector<double> out;
  for (double p : ps) {
    if (out.empty() || std::abs(p - out.back()) > rel_tol * std::max(1.0, p)) out.push_back(p);
  }
  return out;
}

std::vector<double> CriticalSet::times_in_window(double t0, double t1) const {
  std::vector<double> ts;
  for (std::size_t i = 0; i < momenta.size(); ++i) {
    for (int n = n_min; n <= n_max; ++n) {
      const double t = time(i, n);
      if (t >= t0 && t <= t1) ts.push_back(t);
    }
  }
  std::sort(ts.begin(), ts.end());
  std::vector<double> out;
  for (double t : ts) {
    if (out.empty() || t - out.back() > 1e-12 * std::max(1.0, t)) out.push_back(t);
  }
  return out;
}

CriticalSet critical_set_from_candidates(const ChiralTwoBandModel& model, int n_min, int n_max,
                                         double tol) {
  if (n_min > n_max) throw ParameterError("critical_set: empty n range");
  CriticalSet set;
  set.n_min = n_min;
  set.n_max = n_max;
  const auto gap = gapless_momenta(model, tol);
  for (std::size_t i = 0; i < gap.candidates.size(); ++i) {
    classify(set, gap.candidates[i], gap.residuals[i].norm_balance, tol);
  }
  finish(set);
  return set;
}

CriticalSet critical_set(const ChiralTwoBandModel& model, int n_min, int n_max, double tol) {
  if (n_min > n_max) throw ParameterError("critical_set: empty n range");
  CriticalSet set;
  set.n_min = n_min;
  set.n_max = n_max;
  const auto& tag = model.tag();
  if (const auto* p = std::get_if<LkcParams>(&tag); p && p->v != 0.0 && p->J != 0.0) {
    // k_c = +-arccos(-u/J), E(k_c) = |Delta| sqrt(1 - u^2/J^2 - v^2/Delta^2)
    const double c = -p->u / p->J;
    if (std::abs(c) <= 1.0) {
      const double kc = std::acos(c);
      const double q = p->Delta * p->Delta * (1.0 - (c * c + p->v * p->v / (p->Delta * p->Delta)));
      classify(set, kc, q, tol);
      if (kc != 0.0 && kc != kPi) classify(set, -kc, q, tol);
    }
  } else if (const auto* p = std::get_if<NnnLkcParams>(&tag); p && p->v != 0.0) {
    // k_c^+- = +-arccos[(-J1 +- sqrt(J1^2 + 8 J2 (J2 - u))) / (4 J2)],
    // E(k_c) = sqrt((Delta1 sin k_c + Delta2 sin 2k_c)^2 - v^2)
    for (double kc : nnn_k0(*p)) {
      const double hy = p->Delta1 * std::sin(kc) + p->Delta2 * std::sin(2.0 * kc);
      const double q = hy * hy - p->v * p->v;
      classify(set, kc, q, tol);
      if (kc != 0.0 && kc != kPi) classify(set, -kc, q, tol);
    }
  } else if (const auto* p = std::get_if<NrsshParams>(&tag)) {
    // k_c in {0, pi}: E(0)^2 = (J1+J2-g)(J1+J2+g), E(pi)^2 = (J1-J2-g)(J1-J2+g)
    const double s = p->J1 + p->J2, d = p->J1 - p->J2;
    classify(set, 0.0, (s - p->gamma) * (s + p->gamma), tol);
    classify(set, kPi, (d - p->gamma) * (d + p->gamma), tol);
  } else {
    return critical_set_from_candidates(model, n_min, n_max, tol);
  }
  finish(set);
  return set;
}

double rate_function(const ChiralTwoBandModel& model, double t, int n_k) {
  if (n_k < 64) throw ParameterError("rate_function: n_k must be at least 64");
  if (!(t >= 0.0)) throw ParameterError("rate_function: t must be non-negative");
  return rate_from_energies(midpoint_energies(model, n_k), t);
}

QuenchTrace quench_trace(const ChiralTwoBandModel& model, double t0, double t1, double dt,
                         int n_k, int workers) {
  if (n_k < 64) throw ParameterError("quench_trace: n_k must be at least 64");
  if (!(dt > 0.0) || !(t1 >= t0) || !(t0 >= 0.0)) {
    throw ParameterError("quench_trace: need 0 <= t0 <= t1 and dt > 0");
  }
  QuenchTrace trace;
  trace.n_k = n_k;
  const auto count = static_cast<std::size_t>(std::floor((t1 - t0) / dt * (1.0 + 1e-12))) + 1;
  trace.times.resize(count);
  trace.rate.resize(count);
  for (std::size_t i = 0; i < count; ++i) trace.times[i] = t0 + static_cast<double>(i) * dt;
  const auto es = midpoint_energies(model, n_k);
  parallel_for(count, workers, [&](std::size_t i) {
    trace.rate[i] = rate_from_energies(es, trace.times[i]);
  });
  return trace;
}

std::vector<double> detect_cusps(const QuenchTrace& trace, const CuspOptions& options) {
  const auto& g = trace.rate;
  if (g.size() < 3 || trace.times.size() != g.size()) {
    throw ParameterError("detect_cusps: need at least 3 samples");
  }
  const std::size_t n = g.size() - 2;
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = std::abs(g[i + 2] - 2.0 * g[i + 1] + g[i]);

  const auto w = static_cast<std::size_t>(std::max(options.window, 1));
  std::vector<std::size_t> flagged;
  std::vector<double> buf;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(d2[i] > options.noise_floor)) continue;
    const std::size_t lo = i > w ? i - w : 0;
    const std::size_t hi = std::min(n, i + w + 1);
    buf.assign(d2.begin() + static_cast<std::ptrdiff_t>(lo), d2.begin() + static_cast<std::ptrdiff_t>(hi));
    auto mid = buf.begin() + static_cast<std::ptrdiff_t>(buf.size() / 2);
    std::nth_element(buf.begin(), mid, buf.end());
    if (d2[i] > options.jump_threshold * *mid) flagged.push_back(i);
  }

  std::vector<double> cusps;
  std::size_t start = 0;
  while (start < flagged.size()) {
    std::size_t end = start;
    while (end + 1 < flagged.size() &&
           flagged[end + 1] - flagged[end] <= static_cast<std::size_t>(options.merge_gap)) {
      ++end;
    }
    std::size_t best = flagged[start];
    for (std::size_t j = start; j <= end; ++j) {
      if (d2[flagged[j]] > d2[best]) best = flagged[j];
    }
    cusps.push_back(trace.times[best + 1]);
    start = end + 1;
  }
  return cusps;
}

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

CorrespondenceRow lkc_row(const LkcParams& p) {
  const double r = p.u * p.u / (p.J * p.J) + p.v * p.v / (p.Delta * p.Delta);
  if (r == 1.0) throw GaplessError("LKC on the phase boundary u^2/J^2 + v^2/Delta^2 = 1");
  if (r < 1.0) {
    return {"u^2/J^2 + v^2/Delta^2 < 1", "Two EPs are encircled by h(k)", 1.0,
            "DQPTs at t_n(k_c) for all n, k_c = +-k_0", 1, {std::acos(-p.u / p.J)}, true};
  }
  return {"u^2/J^2 + v^2/Delta^2 > 1", "No EPs are encircled by h(k)", 0.0,
          "No k_c and t_n, no DQPTs", 0, {}, true};
}

CorrespondenceRow nnn_row(const NnnLkcParams& p) {
  std::vector<double> above;
  for (double k : nnn_k0(p)) {
    const double hy = p.Delta1 * std::sin(k) + p.Delta2 * std::sin(2.0 * k);
    if (hy * hy == p.v * p.v) throw GaplessError("NNN-LKC on the phase boundary h_y(k_0)^2 = v^2");
    if (hy * hy > p.v * p.v) above.push_back(k);
  }
  std::sort(above.begin(), above.end());
  switch (above.size()) {
    case 2:
      return {"h_y^2(k_c^+-) > v^2", "Two EPs are encircled twice by h(k)", 2.0,
              "DQPTs at t_n(k_c^+-) for all n, k_c^+- = k_0^+-", 2, above, true};
    case 1:
      return {"h_y^2(k_c^+/-) > v^2 & h_y^2(k_c^-/+) < v^2", "Two EPs are encircled once by h(k)",
              1.0, "DQPTs at t_n(k_c^+/-) for all n", 1, above, true};
    default:
      return {"h_y^2(k_c^+-) < v^2", "No EPs are encircled by h(k)", 0.0,
              "No k_c and t_n, no DQPTs", 0, {}, true};
  }
}

CorrespondenceRow nrssh_row(const NrsshParams& p) {
  const double s = p.J1 + p.J2, d = p.J1 - p.J2, g = p.gamma;
  if (std::abs(s) == g || std::abs(d) == g) {
    throw GaplessError("NRSSH on a phase boundary J1 +- J2 = +-gamma");
  }
  if (d < -g && s > g) {
    return {"J1 - J2 < -gamma & J1 + J2 > gamma", "Two EPs are encircled by h(k)", 1.0,
            "DQPTs at t_n^{0,pi} for all n, k_c = 0, pi", 2, {0.0, kPi}, true};
  }
  if (d < -g && std::abs(s) < g) {
    return {"J1 - J2 < -gamma & |J1 + J2| < gamma", "One EP is encircled by h(k)", 0.5,
            "DQPTs at t_n^pi for all n, k_c = pi", 1, {kPi}, true};
  }
  if (s > g && std::abs(d) < g) {
    return {"J1 + J2 > gamma & |J1 - J2| < gamma", "One EP is encircled by h(k)", 0.5,
            "DQPTs at t_n^0 for all n, k_c = 0", 1, {0.0}, true};
  }
  if (std::abs(s) < g && std::abs(d) < g) {
    return {"|J1 +- J2| < gamma", "No EPs are encircled by h(k)", 0.0,
            "No k_c and t_n, no DQPTs", 0, {}, true};
  }
  return {"|J1 +- J2| > gamma", "No EPs are encircled by h(k)", 0.0,
          "DQPTs at t_n^{0,pi} for all n, k_c = 0, pi", 2, {0.0, kPi}, true};
}

}  // namespace

DqptReport dqpt_report(const ChiralTwoBandModel& model, int n_k, int n_min, int n_max) {
  DqptReport rep;
  rep.family = model.family();
  const auto& tag = model.tag();
  if (const auto* p = std::get_if<LkcParams>(&tag)) {
    rep.row = lkc_row(*p);
  } else if (const auto* p = std::get_if<NnnLkcParams>(&tag)) {
    rep.row = nnn_row(*p);
  } else if (const auto* p = std::get_if<NrsshParams>(&tag)) {
    rep.row = nrssh_row(*p);
  } else {
    throw UnsupportedModelError("dqpt_report needs a built-in model");
  }
  rep.winding = winding_number(model, n_k);
  rep.critical = critical_set(model, n_min, n_max);

  std::vector<std::string> issues;
  if (std::abs(rep.winding.w - rep.row.w) > 1e-6) {
    issues.push_back("winding number " + fmt(rep.winding.w) + " differs from table value " +
                     fmt(rep.row.w));
  }
  const auto periods = rep.critical.distinct_periods();
  if (static_cast<int>(periods.size()) != rep.row.periods) {
    issues.push_back(std::to_string(periods.size()) + " critical periods, table predicts " +
                     std::to_string(rep.row.periods));
  }
  if (rep.row.momenta_fixed) {
    std::vector<double> abs_k;
    for (const auto& m : rep.critical.momenta) {
      const double a = std::abs(m.k);
      if (std::none_of(abs_k.begin(), abs_k.end(), [&](double x) { return std::abs(x - a) < 1e-9; })) {
        abs_k.push_back(a);
      }
    }
    std::sort(abs_k.begin(), abs_k.end());
    bool same = abs_k.size() == rep.row.momenta.size();
    for (std::size_t i = 0; same && i < abs_k.size(); ++i) {
      same = std::abs(abs_k[i] - rep.row.momenta[i]) < 1e-9;
    }
    if (!same) issues.push_back("critical momenta differ from the table row");
  }
  rep.consistent = issues.empty();
  if (rep.consistent) {
    rep.diagnostic = "consistent with table row";
  } else {
    for (std::size_t i = 0; i < issues.size(); ++i) {
      if (i) rep.diagnostic += "; ";
      rep.diagnostic += issues[i];
    }
  }
  return rep;
}

}  // namespace nhdqpt
