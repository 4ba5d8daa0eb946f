#include "nhdqpt/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "nhdqpt/errors.hpp"
#include "nhdqpt/parallel.hpp"

namespace nhdqpt {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kScanPoints = 4096;
constexpr double kRootMerge = 1e-9;

void add_root(std::vector<double>& roots, double k) {
  k = wrap_momentum(k);
  for (double r : roots) {
    if (momentum_distance(r, k) < kRootMerge) return;
  }
  roots.push_back(k);
}

/// Real roots c in [-1, 1] of a c^2 + b c + c0 = 0.
std::vector<double> cosine_roots(double a, double b, double c0) {
  std::vector<double> cs;
  if (a == 0.0) {
    if (b != 0.0) cs.push_back(-c0 / b);
  } else {
    const double disc = b * b - 4.0 * a * c0;
    if (disc >= 0.0) {
      const double s = std::sqrt(disc);
      cs.push_back((-b + s) / (2.0 * a));
      cs.push_back((-b - s) / (2.0 * a));
    }
  }
  std::vector<double> out;
  for (double c : cs) {
    if (std::abs(c) <= 1.0) out.push_back(c);
  }
  return out;
}

double bisect(const auto& f, double lo, double hi, double flo) {
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Minimiser of |f| on [lo, hi] by golden-section search.
double golden_min_abs(const auto& f, double lo, double hi) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
  double f1 = std::abs(f(x1)), f2 = std::abs(f(x2));
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = std::abs(f(x1));
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = std::abs(f(x2));
    }
  }
  return 0.5 * (lo + hi);
}

/// Roots of a smooth 2pi-periodic function on [-pi, pi): sign changes are
/// bisected, touching zeros are found by minimising |f| around local minima.
std::vector<double> periodic_roots(const auto& f, double tol) {
  std::vector<double> ks(kScanPoints), fs(kScanPoints);
  for (int j = 0; j < kScanPoints; ++j) {
    ks[j] = -kPi + kTwoPi * j / kScanPoints;
    fs[j] = f(ks[j]);
  }
  std::vector<double> roots;
  for (int j = 0; j < kScanPoints; ++j) {
    const int jn = (j + 1) % kScanPoints;
    const double k0 = ks[j];
    const double k1 = (jn == 0) ? kPi : ks[jn];
    if (fs[j] == 0.0) {
      add_root(roots, k0);
    } else if (fs[jn] != 0.0 && (fs[j] < 0.0) != (fs[jn] < 0.0)) {
      add_root(roots, bisect(f, k0, k1, fs[j]));
    }
  }
  for (int j = 0; j < kScanPoints; ++j) {
    const int jp = (j + kScanPoints - 1) % kScanPoints;
    const int jn = (j + 1) % kScanPoints;
    const double a = std::abs(fs[j]);
    if (a == 0.0 || a > std::abs(fs[jp]) || a > std::abs(fs[jn])) continue;
    if ((fs[jp] < 0.0) != (fs[j] < 0.0) || (fs[jn] < 0.0) != (fs[j] < 0.0)) continue;
    const double step = kTwoPi / kScanPoints;
    const double k = golden_min_abs(f, ks[j] - step, ks[j] + step);
    if (std::abs(f(k)) <= tol) add_root(roots, k);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::optional<std::vector<double>> closed_form_candidates(const ChiralTwoBandModel& model) {
  const auto& tag = model.tag();
  std::vector<double> roots;
  if (const auto* p = std::get_if<LkcParams>(&tag)) {
    // v (u + J cos k) = 0
    if (p->v == 0.0 || p->J == 0.0) return std::nullopt;
    for (double c : cosine_roots(0.0, p->J, p->u)) {
      const double k0 = std::acos(c);
      add_root(roots, k0);
      add_root(roots, -k0);
    }
  } else if (const auto* p = std::get_if<NnnLkcParams>(&tag)) {
    // v (u + J1 cos k + J2 cos 2k) = 0 with cos 2k = 2 cos^2 k - 1
    if (p->v == 0.0 || (p->J1 == 0.0 && p->J2 == 0.0)) return std::nullopt;
    for (double c : cosine_roots(2.0 * p->J2, p->J1, p->u - p->J2)) {
      const double k0 = std::acos(c);
      add_root(roots, k0);
      add_root(roots, -k0);
    }
  } else if (std::holds_alternative<NrsshParams>(tag)) {
    // gamma J2 sin k = 0
    add_root(roots, 0.0);
    add_root(roots, kPi);
  } else {
    return std::nullopt;
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

/// Signed winding number of a closed polygon about p (crossing rule).
int polygon_winding(const std::vector<PlanarPoint>& poly, PlanarPoint p) {
  int wn = 0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const PlanarPoint& s = poly[i];
    const PlanarPoint& e = poly[(i + 1) % n];
    const double ex = e.a - s.a, ey = e.b - s.b;
    const double len2 = ex * ex + ey * ey;
    double t = len2 > 0.0 ? ((p.a - s.a) * ex + (p.b - s.b) * ey) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double dx = s.a + t * ex - p.a, dy = s.b + t * ey - p.b;
    if (std::hypot(dx, dy) < 1e-10) {
      throw DegenerateGeometryError("exceptional point lies on the h(k) curve");
    }
    const double cross = ex * (p.b - s.b) - ey * (p.a - s.a);
    if (s.b <= p.b) {
      if (e.b > p.b && cross > 0.0) ++wn;
    } else {
      if (e.b <= p.b && cross < 0.0) --wn;
    }
  }
  return wn;
}

}  // namespace

double wrap_momentum(double k) {
  double r = std::fmod(k + kPi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  r -= kPi;
  if (r >= kPi) r -= kTwoPi;
  return r;
}

double momentum_distance(double k1, double k2) {
  return std::abs(wrap_momentum(k1 - k2));
}

GaplessSet::Residual gap_residual(const ChiralTwoBandModel& model, double k) {
  const auto c = model.components(k);
  return {c.h_a * c.h_a + c.h_b * c.h_b - c.g_a * c.g_a - c.g_b * c.g_b,
          c.h_a * c.g_a + c.h_b * c.g_b};
}

GaplessSet gapless_momenta(const ChiralTwoBandModel& model, double tol) {
  if (!(tol > 0.0)) throw ParameterError("gapless_momenta: tol must be positive");
  GaplessSet out;
  if (auto closed = closed_form_candidates(model)) {
    out.candidates = std::move(*closed);
  } else {
    auto orth = [&](double k) { return gap_residual(model, k).orthogonality; };
    double scale = 0.0;
    for (int j = 0; j < kScanPoints; ++j) {
      scale = std::max(scale, std::abs(orth(-kPi + kTwoPi * j / kScanPoints)));
    }
    if (scale <= tol) {
      // Orthogonality holds identically (e.g. Hermitian); scan the norm balance.
      auto bal = [&](double k) { return gap_residual(model, k).norm_balance; };
      out.candidates = periodic_roots(bal, tol);
    } else {
      out.candidates = periodic_roots(orth, tol);
    }
  }
  for (double k : out.candidates) {
    const auto r = gap_residual(model, k);
    out.residuals.push_back(r);
    if (std::abs(r.norm_balance) <= tol && std::abs(r.orthogonality) <= tol) {
      out.momenta.push_back(k);
    }
  }
  return out;
}

ExceptionalPoints exceptional_points(const ChiralTwoBandModel& model) {
  if (!model.has_constant_loss()) {
    throw UnsupportedModelError("exceptional points need a k-independent loss vector");
  }
  const double ga = model.g_a().constant_term();
  const double gb = model.g_b().constant_term();
  ExceptionalPoints eps;
  eps.points = {PlanarPoint{gb, -ga}, PlanarPoint{-gb, ga}};
  eps.hermitian_limit = (ga == 0.0 && gb == 0.0);
  return eps;
}

WindingResult winding_number(const ChiralTwoBandModel& model, int n_k, double gap_tol) {
  if (n_k < 64) throw ParameterError("winding_number: n_k must be at least 64");
  if (closed_form_candidates(model)) {
    const auto gs = gapless_momenta(model, gap_tol);
    if (!gs.momenta.empty()) {
      throw GaplessError("winding number undefined: spectrum closes at k = " +
                         std::to_string(gs.momenta.front()));
    }
  }
  int n = n_k;
  for (int attempt = 0; attempt <= 6; ++attempt) {
    const int segments = n - 1;
    std::vector<Complex> plus(segments), minus(segments);
    for (int j = 0; j < segments; ++j) {
      const double k = -kPi + kTwoPi * j / segments;
      const auto [da, db] = model.coefficients(k);
      plus[j] = da + kI * db;
      minus[j] = da - kI * db;
      // |E|^2 = |d_a^2 + d_b^2| = |plus| |minus|
      if (std::sqrt(std::abs(plus[j]) * std::abs(minus[j])) < gap_tol) {
        throw GaplessError("winding number undefined: spectrum closes near k = " +
                           std::to_string(k));
      }
    }
    std::vector<double> re_inc(segments), im_inc(segments);
    bool resolved = true;
    for (int j = 0; j < segments; ++j) {
      const int jn = (j + 1) % segments;
      const double d1 = std::arg(plus[jn] / plus[j]);
      const double d2 = std::arg(minus[jn] / minus[j]);
      if (std::abs(d1) > 0.5 * kPi || std::abs(d2) > 0.5 * kPi) {
        resolved = false;
        break;
      }
      re_inc[j] = 0.5 * (d1 - d2);
      im_inc[j] = -0.5 * (std::log(std::abs(plus[jn]) / std::abs(minus[jn])) -
                          std::log(std::abs(plus[j]) / std::abs(minus[j])));
    }
    if (!resolved) {
      n = 2 * n - 1;
      continue;
    }
    WindingResult r;
    r.w = pairwise_sum(re_inc) / kTwoPi;
    r.imaginary_closure = pairwise_sum(im_inc);
    r.grid_size = n;
    r.method = WindingMethod::angle_integration;
    return r;
  }
  throw InsufficientGridError("winding angle not resolved after grid doubling");
}

std::array<int, 2> ep_windings(const ChiralTwoBandModel& model, int n_k) {
  if (n_k < 64) throw ParameterError("ep_windings: n_k must be at least 64");
  const auto eps = exceptional_points(model);
  std::vector<PlanarPoint> poly(static_cast<std::size_t>(n_k - 1));
  for (int j = 0; j < n_k - 1; ++j) {
    const double k = -kPi + kTwoPi * j / (n_k - 1);
    const auto c = model.components(k);
    poly[j] = {c.h_a, c.h_b};
  }
  return {polygon_winding(poly, eps.points[0]), polygon_winding(poly, eps.points[1])};
}

WindingResult winding_via_ep_enclosure(const ChiralTwoBandModel& model, int n_k) {
  const auto w = ep_windings(model, n_k);
  WindingResult r;
  r.w = 0.5 * (w[0] + w[1]);
  r.method = WindingMethod::ep_enclosure;
  r.grid_size = n_k;
  return r;
}

namespace {

enum class Conj { transpose, conjugate };

Matrix2C apply(Conj c, const Matrix2C& h) {
  return c == Conj::transpose ? Matrix2C(h.transpose()) : Matrix2C(h.conjugate());
}

struct SymmetryConvention {
  Matrix2C s, c, t, p;
  Conj c_conj, t_conj;
  std::string s_name, c_name, t_name, p_name;
};

SymmetryConvention convention_for(const ChiralTwoBandModel& model) {
  switch (model.family()) {
    case ModelFamily::lkc:
    case ModelFamily::nnn_lkc:
      return {pauli(PauliAxis::x), pauli(PauliAxis::x), sigma0(), pauli(PauliAxis::z),
              Conj::transpose, Conj::transpose, "sx", "sx", "s0", "sz"};
    case ModelFamily::nrssh:
      return {pauli(PauliAxis::z), pauli(PauliAxis::z), sigma0(), pauli(PauliAxis::x),
              Conj::conjugate, Conj::conjugate, "sz", "sz", "s0", "sx"};
    case ModelFamily::generic:
      break;
  }
  const std::string c(1, axis_label(model.chiral()));
  const std::string a(1, axis_label(model.axis_a()));
  return {pauli(model.chiral()), pauli(model.chiral()), sigma0(), pauli(model.axis_a()),
          Conj::transpose, Conj::transpose, "s" + c, "s" + c, "s0", "s" + a};
}

std::string conj_mark(Conj c) { return c == Conj::transpose ? "H^T(k)" : "H^*(k)"; }

}  // namespace

SymmetryReport verify_symmetries(const ChiralTwoBandModel& model, int n_k) {
  if (n_k < 2) throw ParameterError("verify_symmetries: n_k must be at least 2");
  const auto conv = convention_for(model);
  const Matrix2C pt = conv.p * conv.t;
  SymmetryReport rep;
  rep.chiral.relation = conv.s_name + " H(k) " + conv.s_name + " = -H(k)";
  rep.particle_hole.relation = conv.c_name + " " + conj_mark(conv.c_conj) + " " + conv.c_name + "^-1 = -H(-k)";
  rep.time_reversal.relation = conv.t_name + " " + conj_mark(conv.t_conj) + " " + conv.t_name + "^-1 = H(-k)";
  rep.inversion.relation = conv.p_name + " H(k) " + conv.p_name + "^-1 = H(-k)";
  rep.parity_time.relation = "(" + conv.p_name + conv.t_name + ") H^T(k) (" + conv.p_name +
                             conv.t_name + ")^-1 = H(k)";
  for (int j = 0; j < n_k; ++j) {
    const double k = -kPi + kTwoPi * j / n_k;
    const Matrix2C h = hamiltonian(model, k);
    const Matrix2C hm = hamiltonian(model, -k);
    auto upd = [](SymmetryCheck& c, double v) { c.max_violation = std::max(c.max_violation, v); };
    upd(rep.chiral, (conv.s * h * conv.s + h).cwiseAbs().maxCoeff());
    upd(rep.particle_hole,
        (conv.c * apply(conv.c_conj, h) * conv.c.inverse() + hm).cwiseAbs().maxCoeff());
    upd(rep.time_reversal,
        (conv.t * apply(conv.t_conj, h) * conv.t.inverse() - hm).cwiseAbs().maxCoeff());
    upd(rep.inversion, (conv.p * h * conv.p.inverse() - hm).cwiseAbs().maxCoeff());
    upd(rep.parity_time,
        (pt * apply(Conj::transpose, h) * pt.inverse() - h).cwiseAbs().maxCoeff());
  }
  for (SymmetryCheck* c : {&rep.chiral, &rep.particle_hole, &rep.time_reversal, &rep.inversion,
                           &rep.parity_time}) {
    c->holds = c->max_violation <= kSymmetryTolerance;
  }
  return rep;
}

double phase_boundary_residual(const ChiralTwoBandModel& model) {
  const auto& tag = model.tag();
  if (const auto* p = std::get_if<LkcParams>(&tag)) {
    return p->u * p->u / (p->J * p->J) + p->v * p->v / (p->Delta * p->Delta) - 1.0;
  }
  if (const auto* p = std::get_if<NnnLkcParams>(&tag)) {
    double best = std::numeric_limits<double>::infinity();
    for (double c : cosine_roots(2.0 * p->J2, p->J1, p->u - p->J2)) {
      const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
      const double r = std::abs(s * (p->Delta1 + 2.0 * p->Delta2 * c)) - std::abs(p->v);
      if (std::abs(r) < std::abs(best)) best = r;
    }
    return best;
  }
  if (const auto* p = std::get_if<NrsshParams>(&tag)) {
    const double r0 = std::abs(p->J1 + p->J2) - p->gamma;
    const double rpi = std::abs(p->J1 - p->J2) - p->gamma;
    return std::abs(r0) <= std::abs(rpi) ? r0 : rpi;
  }
  throw UnsupportedModelError("phase_boundary_residual needs a built-in model");
}

double ParameterAxis::value(int i) const {
  if (steps <= 1) return min;
  if (i == steps - 1) return max;
  return min + (max - min) * static_cast<double>(i) / (steps - 1);
}

PhaseDiagramGrid phase_diagram(const ChiralTwoBandModel& base, const ParameterAxis& axis1,
                               const ParameterAxis& axis2, int n_k, int workers,
                               double gap_tol) {
  for (const ParameterAxis* ax : {&axis1, &axis2}) {
    if (ax->steps < 2) throw ParameterError("phase_diagram: axis '" + ax->name + "' needs at least 2 steps");
    if (!(ax->max > ax->min)) throw ParameterError("phase_diagram: axis '" + ax->name + "' has an empty range");
    (void)parameter_value(base, ax->name);  // validates the name
  }
  if (axis1.name == axis2.name) throw ParameterError("phase_diagram: axes must differ");
  PhaseDiagramGrid grid{axis1, axis2, {}};
  grid.cells.resize(static_cast<std::size_t>(axis1.steps) * axis2.steps);
  parallel_for(grid.cells.size(), workers, [&](std::size_t idx) {
    const int i1 = static_cast<int>(idx / axis2.steps);
    const int i2 = static_cast<int>(idx % axis2.steps);
    PhaseCell& cell = grid.cells[idx];
    try {
      const auto model =
          with_parameter(with_parameter(base, axis1.name, axis1.value(i1)), axis2.name,
                         axis2.value(i2));
      cell.w = winding_number(model, n_k, gap_tol).w;
      cell.status = CellStatus::gapped;
    } catch (const ParameterError&) {
      cell.status = CellStatus::invalid;
    } catch (const GaplessError&) {
      cell.status = CellStatus::boundary;
    } catch (const InsufficientGridError&) {
      cell.status = CellStatus::boundary;
    }
  });
  return grid;
}

}  // namespace nhdqpt
