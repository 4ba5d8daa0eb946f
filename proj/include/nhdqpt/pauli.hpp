#pragma once

#include <complex>

#include <Eigen/Dense>

namespace nhdqpt {

using Complex = std::complex<double>;
using Matrix2C = Eigen::Matrix2cd;
using Vector2C = Eigen::Vector2cd;
using Matrix4C = Eigen::Matrix4cd;
using Vector4C = Eigen::Vector4cd;

inline constexpr Complex kI{0.0, 1.0};

enum class PauliAxis { x, y, z };

/// The axis c != a, b. Throws ParameterError when a == b.
PauliAxis chiral_axis(PauliAxis a, PauliAxis b);

char axis_label(PauliAxis axis);
PauliAxis parse_axis(char label);

Matrix2C pauli(PauliAxis axis);
Matrix2C sigma0();

/// Largest absolute entry of a - b.
double max_abs_diff(const Matrix2C& a, const Matrix2C& b);
double max_abs_diff(const Matrix4C& a, const Matrix4C& b);

}  // namespace nhdqpt
