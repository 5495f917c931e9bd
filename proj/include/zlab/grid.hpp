#pragma once

#include <Eigen/Core>

#include <array>
#include <memory>

namespace zlab {

// Periodic box [0, L)^dim sampled with N points per axis. Linear index is
// row-major with axis 0 (x_1) slowest.
class Grid {
public:
    Grid(int dim, double extent, int points_per_axis);

    int dim() const { return dim_; }
    double extent() const { return extent_; }
    int points() const { return n_; }
    double spacing() const { return extent_ / n_; }
    Eigen::Index size() const { return size_; }

    // Volume element h^dim used by all Riemann sums.
    double cell_volume() const;
    double frequency_step() const;
    double nyquist() const;

    // Signed lattice index k in [-N/2, N/2) for FFT-ordered position i.
    int lattice_index(int i) const { return i < n_ / 2 ? i : i - n_; }
    double axis_frequency(int i) const { return frequency_step() * lattice_index(i); }

    // Coordinate index of a linear index along one axis.
    int coordinate(Eigen::Index linear, int axis) const;
    Eigen::Index stride(int axis) const { return strides_[axis]; }

    const Eigen::ArrayXd& frequency_norm() const { return *norm_; }
    const Eigen::ArrayXd& frequency_norm_squared() const { return *norm2_; }
    Eigen::ArrayXd frequency_component(int axis) const;
    // frequency_component with the Nyquist plane zeroed (cached).
    const Eigen::ArrayXd& derivative_symbol(int axis) const { return *derivative_[axis]; }
    Eigen::ArrayXd position_component(int axis) const;

    bool same_shape(const Grid& other) const;

private:
    int dim_;
    double extent_;
    int n_;
    Eigen::Index size_;
    std::array<Eigen::Index, 3> strides_{};
    std::shared_ptr<const Eigen::ArrayXd> norm_;
    std::shared_ptr<const Eigen::ArrayXd> norm2_;
    std::array<std::shared_ptr<const Eigen::ArrayXd>, 3> derivative_;
};

Grid make_grid(int dim, double extent, int points_per_axis);

bool is_power_of_two(long n);

// Smallest power of two >= n (n >= 1).
int next_power_of_two(double n);

} // namespace zlab
