#include "zlab/field.hpp"

#include "zlab/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace zlab {

Field::Field(Grid grid, Eigen::ArrayXcd values, Space space)
    : grid_(std::move(grid)), values_(std::move(values)), space_(space)
{
    if (values_.size() != grid_.size())
        throw std::invalid_argument("field length does not match the grid");
}

Field Field::zeros(const Grid& grid, Space space)
{
    return Field(grid, Eigen::ArrayXcd::Zero(grid.size()), space);
}

double Field::l2_norm() const
{
    // Unitary DFT: sum |u_j|^2 = sum |u_k|^2, so one formula serves both tags.
    return std::sqrt(grid_.cell_volume() * values_.abs2().sum());
}

Field transform(const Field& field, Space target)
{
    if (field.space() == target)
        return field;
    const Grid& g = field.grid();
    std::vector<int> shape(g.dim(), g.points());
    Eigen::ArrayXcd out(g.size());
    int sign = target == Space::fourier ? FFTW_FORWARD : FFTW_BACKWARD;
    fft::execute(shape, sign, field.values().data(), out.data());
    out /= std::sqrt(static_cast<double>(g.size()));
    return Field(g, std::move(out), target);
}

void require_same_grid(const Field& a, const Field& b)
{
    if (!a.grid().same_shape(b.grid()))
        throw std::invalid_argument("fields live on different grids");
}

Field operator+(const Field& a, const Field& b)
{
    require_same_grid(a, b);
    Field bb = transform(b, a.space());
    return Field(a.grid(), a.values() + bb.values(), a.space());
}

Field operator-(const Field& a, const Field& b)
{
    require_same_grid(a, b);
    Field bb = transform(b, a.space());
    return Field(a.grid(), a.values() - bb.values(), a.space());
}

Field operator*(complex c, const Field& a) { return Field(a.grid(), c * a.values(), a.space()); }

Field operator*(double c, const Field& a) { return Field(a.grid(), c * a.values(), a.space()); }

Field multiply(const Field& a, const Field& b)
{
    require_same_grid(a, b);
    Field pa = to_physical(a);
    Field pb = to_physical(b);
    return Field(a.grid(), pa.values() * pb.values(), Space::physical);
}

Field real_part(const Field& a)
{
    Field p = to_physical(a);
    return Field(a.grid(), p.values().real().cast<complex>(), Space::physical);
}

Field imag_part(const Field& a)
{
    Field p = to_physical(a);
    return Field(a.grid(), p.values().imag().cast<complex>(), Space::physical);
}

Field abs_squared(const Field& a)
{
    Field p = to_physical(a);
    return Field(a.grid(), p.values().abs2().cast<complex>(), Space::physical);
}

double imaginary_residue(const Field& a)
{
    Field p = to_physical(a);
    double scale = p.values().abs().maxCoeff();
    if (scale == 0.0)
        return 0.0;
    return p.values().imag().abs().maxCoeff() / scale;
}

complex mean_coefficient(const Field& a) { return to_fourier(a).values()[0]; }

} // namespace zlab
