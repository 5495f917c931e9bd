#pragma once

#include "zlab/field.hpp"

#include <array>

namespace zlab {

// Multiplies Fourier coefficients by precomputed symbol values (FFT order).
// The result is in Fourier space. Throws std::domain_error on a non-finite
// symbol value.
Field apply_symbol(const Field& field, const Eigen::ArrayXd& symbol);
Field apply_symbol(const Field& field, const Eigen::ArrayXcd& symbol);

// symbol(xi) -> complex, xi[a] the frequency along axis a.
template <typename F>
Eigen::ArrayXcd evaluate_symbol(const Grid& grid, F&& symbol)
{
    Eigen::ArrayXcd out(grid.size());
    std::array<double, 3> xi{};
    for (Eigen::Index j = 0; j < grid.size(); ++j) {
        for (int a = 0; a < grid.dim(); ++a)
            xi[a] = grid.axis_frequency(grid.coordinate(j, a));
        out[j] = symbol(xi);
    }
    return out;
}

// profile(|xi|) -> real
template <typename F>
Eigen::ArrayXd radial_symbol(const Grid& grid, F&& profile)
{
    const auto& r = grid.frequency_norm();
    Eigen::ArrayXd out(r.size());
    for (Eigen::Index j = 0; j < r.size(); ++j)
        out[j] = profile(r[j]);
    return out;
}

template <typename F>
Field apply_multiplier(const Field& field, F&& symbol)
{
    return apply_symbol(field, evaluate_symbol(field.grid(), std::forward<F>(symbol)));
}

// |xi|^power. The xi = 0 coefficient maps to 0 for power != 0; a negative
// power requires that coefficient to vanish.
Field lambda_power(const Field& field, double power);

// Spectral derivative along one axis.
Field derivative(const Field& field, int axis);

// 2/3 rule: zero every coefficient with |k_a| > N/3 on some axis.
Field dealias(const Field& field);

} // namespace zlab
