#include "nhdqpt/bloch.hpp"

#include <cmath>
#include <string>

#include "nhdqpt/errors.hpp"

namespace nhdqpt {

double FourierProfile::operator()(double k) const {
  double sum = 0.0;
  for (std::size_t n = 0; n < cos_coeffs.size(); ++n) {
    if (cos_coeffs[n] != 0.0) sum += cos_coeffs[n] * std::cos(static_cast<double>(n) * k);
  }
  for (std::size_t n = 1; n < sin_coeffs.size(); ++n) {
    if (sin_coeffs[n] != 0.0) sum += sin_coeffs[n] * std::sin(static_cast<double>(n) * k);
  }
  return sum;
}

bool FourierProfile::is_constant() const {
  for (std::size_t n = 1; n < cos_coeffs.size(); ++n) {
    if (cos_coeffs[n] != 0.0) return false;
  }
  for (std::size_t n = 1; n < sin_coeffs.size(); ++n) {
    if (sin_coeffs[n] != 0.0) return false;
  }
  return true;
}

std::string_view family_name(ModelFamily family) {
  switch (family) {
    case ModelFamily::generic: return "generic";
    case ModelFamily::lkc: return "lkc";
    case ModelFamily::nnn_lkc: return "nnn-lkc";
    case ModelFamily::nrssh: return "nrssh";
  }
  return "generic";
}

ChiralTwoBandModel::ChiralTwoBandModel(PauliAxis axis_a, PauliAxis axis_b, FourierProfile h_a,
                                       FourierProfile h_b, FourierProfile g_a,
                                       FourierProfile g_b, ModelTag tag)
    : axis_a_(axis_a),
      axis_b_(axis_b),
      chiral_(chiral_axis(axis_a, axis_b)),
      h_a_(std::move(h_a)),
      h_b_(std::move(h_b)),
      g_a_(std::move(g_a)),
      g_b_(std::move(g_b)),
      tag_(tag) {
  for (const FourierProfile* f : {&h_a_, &h_b_, &g_a_, &g_b_}) {
    if (!f->sin_coeffs.empty() && f->sin_coeffs[0] != 0.0) {
      throw ParameterError("sin coefficient of order 0 must be zero");
    }
    for (double c : f->cos_coeffs) {
      if (!std::isfinite(c)) throw ParameterError("non-finite Fourier coefficient");
    }
    for (double c : f->sin_coeffs) {
      if (!std::isfinite(c)) throw ParameterError("non-finite Fourier coefficient");
    }
  }
}

BlochComponents ChiralTwoBandModel::components(double k) const {
  return {h_a_(k), h_b_(k), g_a_(k), g_b_(k)};
}

std::pair<Complex, Complex> ChiralTwoBandModel::coefficients(double k) const {
  const auto c = components(k);
  return {Complex(c.h_a, -c.g_a), Complex(c.h_b, -c.g_b)};
}

double ChiralTwoBandModel::h_on(PauliAxis axis, double k) const {
  if (axis == axis_a_) return h_a_(k);
  if (axis == axis_b_) return h_b_(k);
  return 0.0;
}

double ChiralTwoBandModel::g_on(PauliAxis axis, double k) const {
  if (axis == axis_a_) return g_a_(k);
  if (axis == axis_b_) return g_b_(k);
  return 0.0;
}

ModelFamily ChiralTwoBandModel::family() const {
  return static_cast<ModelFamily>(tag_.index());
}

ChiralTwoBandModel build_lkc(const LkcParams& p) {
  return ChiralTwoBandModel(PauliAxis::z, PauliAxis::y,
                            FourierProfile{{p.u, p.J}, {}},
                            FourierProfile{{}, {0.0, p.Delta}},
                            FourierProfile::constant(p.v), FourierProfile::constant(0.0), p);
}

ChiralTwoBandModel build_nnn_lkc(const NnnLkcParams& p) {
  return ChiralTwoBandModel(PauliAxis::z, PauliAxis::y,
                            FourierProfile{{p.u, p.J1, p.J2}, {}},
                            FourierProfile{{}, {0.0, p.Delta1, p.Delta2}},
                            FourierProfile::constant(p.v), FourierProfile::constant(0.0), p);
}

ChiralTwoBandModel build_nrssh(const NrsshParams& p) {
  if (!(p.J2 > 0.0)) throw ParameterError("NRSSH requires J2 > 0");
  if (!(p.gamma > 0.0)) throw ParameterError("NRSSH requires gamma > 0");
  return ChiralTwoBandModel(PauliAxis::x, PauliAxis::y,
                            FourierProfile{{p.J1, p.J2}, {}},
                            FourierProfile{{}, {0.0, p.J2}},
                            FourierProfile::constant(0.0), FourierProfile::constant(p.gamma), p);
}

namespace {

[[noreturn]] void unknown_parameter(std::string_view name, ModelFamily family) {
  throw ParameterError("unknown parameter '" + std::string(name) + "' for model family " +
                       std::string(family_name(family)));
}

}  // namespace

std::vector<std::string> parameter_names(ModelFamily family) {
  switch (family) {
    case ModelFamily::lkc: return {"J", "Delta", "u", "v"};
    case ModelFamily::nnn_lkc: return {"J1", "J2", "Delta1", "Delta2", "u", "v"};
    case ModelFamily::nrssh: return {"J1", "J2", "gamma"};
    case ModelFamily::generic: return {};
  }
  return {};
}

double parameter_value(const ChiralTwoBandModel& model, std::string_view name) {
  const auto& tag = model.tag();
  if (const auto* p = std::get_if<LkcParams>(&tag)) {
    if (name == "J") return p->J;
    if (name == "Delta") return p->Delta;
    if (name == "u") return p->u;
    if (name == "v") return p->v;
  } else if (const auto* p = std::get_if<NnnLkcParams>(&tag)) {
    if (name == "J1") return p->J1;
    if (name == "J2") return p->J2;
    if (name == "Delta1") return p->Delta1;
    if (name == "Delta2") return p->Delta2;
    if (name == "u") return p->u;
    if (name == "v") return p->v;
  } else if (const auto* p = std::get_if<NrsshParams>(&tag)) {
    if (name == "J1") return p->J1;
    if (name == "J2") return p->J2;
    if (name == "gamma") return p->gamma;
  }
  unknown_parameter(name, model.family());
}

ChiralTwoBandModel with_parameter(const ChiralTwoBandModel& model, std::string_view name,
                                  double value) {
  const auto& tag = model.tag();
  if (auto p = std::get_if<LkcParams>(&tag)) {
    LkcParams q = *p;
    if (name == "J") q.J = value;
    else if (name == "Delta") q.Delta = value;
    else if (name == "u") q.u = value;
    else if (name == "v") q.v = value;
    else unknown_parameter(name, model.family());
    return build_lkc(q);
  }
  if (auto p = std::get_if<NnnLkcParams>(&tag)) {
    NnnLkcParams q = *p;
    if (name == "J1") q.J1 = value;
    else if (name == "J2") q.J2 = value;
    else if (name == "Delta1") q.Delta1 = value;
    else if (name == "Delta2") q.Delta2 = value;
    else if (name == "u") q.u = value;
    else if (name == "v") q.v = value;
    else unknown_parameter(name, model.family());
    return build_nnn_lkc(q);
  }
  if (auto p = std::get_if<NrsshParams>(&tag)) {
    NrsshParams q = *p;
    if (name == "J1") q.J1 = value;
    else if (name == "J2") q.J2 = value;
    else if (name == "gamma") q.gamma = value;
    else unknown_parameter(name, model.family());
    return build_nrssh(q);
  }
  unknown_parameter(name, model.family());
}

Matrix2C hamiltonian(const ChiralTwoBandModel& model, double k) {
  const auto [da, db] = model.coefficients(k);
  return da * pauli(model.axis_a()) + db * pauli(model.axis_b());
}

Complex canonical_branch(Complex e) {
  if (e.real() < 0.0 || (e.real() == 0.0 && e.imag() < 0.0)) return -e;
  // Normalise signed zeros so that equal energies print identically.
  return {e.real() + 0.0, e.imag() + 0.0};
}

Complex dispersion(const ChiralTwoBandModel& model, double k) {
  const auto [da, db] = model.coefficients(k);
  return canonical_branch(std::sqrt(da * da + db * db));
}

Matrix2C evolution_operator(const ChiralTwoBandModel& model, double k, double t) {
  const Matrix2C h = hamiltonian(model, k);
  const Complex e = dispersion(model, k);
  if (std::abs(e) < kSmallEnergy) {
    return sigma0() - kI * t * h;
  }
  return std::cos(e * t) * sigma0() - kI * (std::sin(e * t) / e) * h;
}

}  // namespace nhdqpt
