#include "nhdqpt/pauli.hpp"

#include <string>

#include "nhdqpt/errors.hpp"

namespace nhdqpt {

PauliAxis chiral_axis(PauliAxis a, PauliAxis b) {
  if (a == b) {
    throw ParameterError("chiral model needs two distinct Pauli axes, got " +
                         std::string(1, axis_label(a)) + " twice");
  }
  for (auto c : {PauliAxis::x, PauliAxis::y, PauliAxis::z}) {
    if (c != a && c != b) return c;
  }
  return PauliAxis::z;  // unreachable
}

char axis_label(PauliAxis axis) {
  switch (axis) {
    case PauliAxis::x: return 'x';
    case PauliAxis::y: return 'y';
    case PauliAxis::z: return 'z';
  }
  return '?';
}

PauliAxis parse_axis(char label) {
  switch (label) {
    case 'x': return PauliAxis::x;
    case 'y': return PauliAxis::y;
    case 'z': return PauliAxis::z;
    default:
      throw ParameterError(std::string("unknown Pauli axis '") + label + "'");
  }
}

Matrix2C pauli(PauliAxis axis) {
  Matrix2C m;
  switch (axis) {
    case PauliAxis::x: m << 0.0, 1.0, 1.0, 0.0; break;
    case PauliAxis::y: m << 0.0, -kI, kI, 0.0; break;
    case PauliAxis::z: m << 1.0, 0.0, 0.0, -1.0; break;
  }
  return m;
}

Matrix2C sigma0() { return Matrix2C::Identity(); }

double max_abs_diff(const Matrix2C& a, const Matrix2C& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

double max_abs_diff(const Matrix4C& a, const Matrix4C& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace nhdqpt
