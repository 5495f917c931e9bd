#include "zlab/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace zlab {

bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

int next_power_of_two(double n)
{
    int p = 1;
    while (p < n)
        p *= 2;
    return p;
}

Grid::Grid(int dim, double extent, int points_per_axis)
    : dim_(dim), extent_(extent), n_(points_per_axis)
{
    if (dim < 1 || dim > 3)
        throw std::invalid_argument("grid dimension must be 1, 2 or 3, got " + std::to_string(dim));
    if (!(extent > 0.0) || !std::isfinite(extent))
        throw std::invalid_argument("grid extent must be positive and finite");
    if (!is_power_of_two(points_per_axis))
        throw std::invalid_argument("points per axis must be a power of two, got " +
                                    std::to_string(points_per_axis));
    if (points_per_axis < 16)
        throw std::invalid_argument("points per axis must be at least 16");

    size_ = 1;
    for (int a = 0; a < dim_; ++a)
        size_ *= n_;
    Eigen::Index s = 1;
    for (int a = dim_ - 1; a >= 0; --a) {
        strides_[a] = s;
        s *= n_;
    }

    Eigen::ArrayXd k2 = Eigen::ArrayXd::Zero(size_);
    for (int a = 0; a < dim_; ++a) {
        Eigen::ArrayXd k = frequency_component(a);
        k2 += k.square();
        // The Nyquist mode has no consistent sign under differentiation.
        for (Eigen::Index j = 0; j < size_; ++j)
            if (coordinate(j, a) == n_ / 2)
                k[j] = 0.0;
        derivative_[a] = std::make_shared<const Eigen::ArrayXd>(std::move(k));
    }
    norm2_ = std::make_shared<const Eigen::ArrayXd>(k2);
    norm_ = std::make_shared<const Eigen::ArrayXd>(k2.sqrt());
}

double Grid::cell_volume() const { return std::pow(spacing(), dim_); }

double Grid::frequency_step() const { return 2.0 * std::numbers::pi / extent_; }

double Grid::nyquist() const { return std::numbers::pi * n_ / extent_; }

int Grid::coordinate(Eigen::Index linear, int axis) const
{
    return static_cast<int>((linear / strides_[axis]) % n_);
}

Eigen::ArrayXd Grid::frequency_component(int axis) const
{
    Eigen::ArrayXd out(size_);
    for (Eigen::Index j = 0; j < size_; ++j)
        out[j] = axis_frequency(coordinate(j, axis));
    return out;
}

Eigen::ArrayXd Grid::position_component(int axis) const
{
    Eigen::ArrayXd out(size_);
    const double h = spacing();
    for (Eigen::Index j = 0; j < size_; ++j)
        out[j] = h * coordinate(j, axis);
    return out;
}

bool Grid::same_shape(const Grid& other) const
{
    return dim_ == other.dim_ && n_ == other.n_ && extent_ == other.extent_;
}

Grid make_grid(int dim, double extent, int points_per_axis)
{
    return Grid(dim, extent, points_per_axis);
}

} // namespace zlab
