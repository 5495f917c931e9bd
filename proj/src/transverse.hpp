#pragma once

// Helpers shared by the verifier sources: reductions of a d-dimensional field
// to the x1 line (axis 0).

#include "zlab/field.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace zlab::detail {

// ∫ f dy for a real-valued physical field; length N along axis 0.
Eigen::ArrayXd transverse_integral(const Eigen::ArrayXd& values, const Grid& grid);

// (∫ |f|^p dy)^{1/p} for p = 1 or 2.
Eigen::ArrayXd transverse_norm(const Field& field, double p);

// Spectral derivative of a periodic line sampled with spacing dx.
Eigen::ArrayXd line_derivative(const Eigen::ArrayXd& values, double dx);

// Trapezoid weights on M + 1 uniform nodes over [0, T].
std::vector<double> trapezoid_weights(int nodes, double horizon);

// Physical values of a Fourier-multiplied field.
Eigen::ArrayXcd filtered(const Field& fourier, const Eigen::ArrayXd& symbol);

} // namespace zlab::detail
