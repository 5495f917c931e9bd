#pragma once

#include "zlab/grid.hpp"

#include <Eigen/Core>

#include <array>
#include <complex>

namespace zlab {

using complex = std::complex<double>;

enum class Space { physical, fourier };

// Complex scalar on a grid, tagged with the space its values live in.
// Fourier values use the unitary DFT normalization.
class Field {
public:
    Field(Grid grid, Eigen::ArrayXcd values, Space space);

    static Field zeros(const Grid& grid, Space space = Space::physical);

    // Samples f(x) at the lattice points; x[a] is the coordinate on axis a.
    template <typename F>
    static Field sample(const Grid& grid, F&& f)
    {
        Eigen::ArrayXcd v(grid.size());
        std::array<double, 3> x{};
        for (Eigen::Index j = 0; j < grid.size(); ++j) {
            for (int a = 0; a < grid.dim(); ++a)
                x[a] = grid.spacing() * grid.coordinate(j, a);
            v[j] = f(x);
        }
        return Field(grid, std::move(v), Space::physical);
    }

    const Grid& grid() const { return grid_; }
    Space space() const { return space_; }
    const Eigen::ArrayXcd& values() const { return values_; }

    // Continuum L^2 norm, valid in either space.
    double l2_norm() const;

private:
    Grid grid_;
    Eigen::ArrayXcd values_;
    Space space_;
};

Field transform(const Field& field, Space target);
inline Field to_physical(const Field& f) { return transform(f, Space::physical); }
inline Field to_fourier(const Field& f) { return transform(f, Space::fourier); }

// Linear combinations; the result lives in the space of the first operand.
Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(complex c, const Field& a);
Field operator*(double c, const Field& a);

// Pointwise product in physical space.
Field multiply(const Field& a, const Field& b);
Field real_part(const Field& a);
Field imag_part(const Field& a);
Field abs_squared(const Field& a);

// Largest |Im u| relative to ||u||_inf in physical space (0 for the zero field).
double imaginary_residue(const Field& a);

// Fourier coefficient at xi = 0, in the unitary normalization.
complex mean_coefficient(const Field& a);

void require_same_grid(const Field& a, const Field& b);

} // namespace zlab
