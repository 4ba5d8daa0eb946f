#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "nhdqpt/pauli.hpp"

namespace nhdqpt {

/// Real 2pi-periodic profile given by a truncated Fourier series,
///   f(k) = sum_n cos_coeffs[n] cos(n k) + sum_{n>=1} sin_coeffs[n] sin(n k).
/// sin_coeffs[0] must be zero.
struct FourierProfile {
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;

  static FourierProfile constant(double c) { return {{c}, {}}; }

  double operator()(double k) const;
  bool is_constant() const;
  double constant_term() const { return cos_coeffs.empty() ? 0.0 : cos_coeffs[0]; }
};

struct LkcParams {
  double J = 1.0;
  double Delta = 1.0;
  double u = 0.0;
  double v = 0.0;
};

struct NnnLkcParams {
  double J1 = 1.0;
  double J2 = 0.0;
  double Delta1 = 1.0;
  double Delta2 = 0.0;
  double u = 0.0;
  double v = 0.0;
};

/// Requires J2 > 0 and gamma > 0.
struct NrsshParams {
  double J1 = 0.0;
  double J2 = 1.0;
  double gamma = 0.1;
};

struct GenericModel {};

using ModelTag = std::variant<GenericModel, LkcParams, NnnLkcParams, NrsshParams>;

enum class ModelFamily { generic, lkc, nnn_lkc, nrssh };

std::string_view family_name(ModelFamily family);

/// Real profiles evaluated at one k.
struct BlochComponents {
  double h_a = 0.0;
  double h_b = 0.0;
  double g_a = 0.0;
  double g_b = 0.0;
};

/// H(k) = [h_a(k) - i g_a(k)] sigma_a + [h_b(k) - i g_b(k)] sigma_b.
///
/// The remaining Pauli matrix sigma_c anticommutes with H(k) for every k
/// (chiral symmetry). Immutable after construction.
class ChiralTwoBandModel {
 public:
  ChiralTwoBandModel(PauliAxis axis_a, PauliAxis axis_b, FourierProfile h_a,
                     FourierProfile h_b, FourierProfile g_a, FourierProfile g_b,
                     ModelTag tag = GenericModel{});

  PauliAxis axis_a() const { return axis_a_; }
  PauliAxis axis_b() const { return axis_b_; }
  PauliAxis chiral() const { return chiral_; }

  BlochComponents components(double k) const;
  /// Complex coefficients d_a = h_a - i g_a and d_b = h_b - i g_b.
  std::pair<Complex, Complex> coefficients(double k) const;

  /// Real part of the coefficient multiplying the given Pauli matrix
  /// (zero for the chiral axis).
  double h_on(PauliAxis axis, double k) const;
  /// Loss part of the coefficient multiplying the given Pauli matrix.
  double g_on(PauliAxis axis, double k) const;

  const FourierProfile& h_a() const { return h_a_; }
  const FourierProfile& h_b() const { return h_b_; }
  const FourierProfile& g_a() const { return g_a_; }
  const FourierProfile& g_b() const { return g_b_; }

  const ModelTag& tag() const { return tag_; }
  ModelFamily family() const;
  bool has_constant_loss() const { return g_a_.is_constant() && g_b_.is_constant(); }

 private:
  PauliAxis axis_a_;
  PauliAxis axis_b_;
  PauliAxis chiral_;
  FourierProfile h_a_, h_b_, g_a_, g_b_;
  ModelTag tag_;
};

/// Lossy Kitaev chain: h_y = Delta sin k, h_z = u + J cos k, loss v on sigma_z.
/// Axis order is (a, b) = (z, y), which orients the winding so that the
/// topological phase has w = +1.
ChiralTwoBandModel build_lkc(const LkcParams& p);

/// Kitaev chain with second-neighbour hopping and pairing.
ChiralTwoBandModel build_nnn_lkc(const NnnLkcParams& p);

/// Nonreciprocal SSH: h_x = J1 + J2 cos k, h_y = J2 sin k, loss gamma on sigma_y.
/// Throws ParameterError unless J2 > 0 and gamma > 0.
ChiralTwoBandModel build_nrssh(const NrsshParams& p);

/// Rebuild a built-in model with one named parameter replaced
/// ("J", "Delta", "u", "v", "J1", "J2", "Delta1", "Delta2", "gamma").
ChiralTwoBandModel with_parameter(const ChiralTwoBandModel& model, std::string_view name,
                                  double value);

/// Parameter names accepted by with_parameter for the model's family.
std::vector<std::string> parameter_names(ModelFamily family);

/// Value of a named built-in parameter.
double parameter_value(const ChiralTwoBandModel& model, std::string_view name);

/// Matrix2C H(k).
Matrix2C hamiltonian(const ChiralTwoBandModel& model, double k);

/// Branch convention for +-E: Re E >= 0, and Im E >= 0 when Re E == 0.
Complex canonical_branch(Complex e);

/// E(k) = sqrt(d_a^2 + d_b^2) on the canonical branch.
Complex dispersion(const ChiralTwoBandModel& model, double k);

/// Below this |E| the evolution operator uses the nilpotent limit 1 - i t H.
inline constexpr double kSmallEnergy = 1e-12;

/// U(k,t) = exp(-i H(k) t) = cos(E t) - i sin(E t)/E H(k).
Matrix2C evolution_operator(const ChiralTwoBandModel& model, double k, double t);

}  // namespace nhdqpt
