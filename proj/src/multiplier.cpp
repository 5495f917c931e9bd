#include "zlab/multiplier.hpp"

#include <cmath>
#include <stdexcept>

namespace zlab {

Field apply_symbol(const Field& field, const Eigen::ArrayXd& symbol)
{
    if (symbol.size() != field.grid().size())
        throw std::invalid_argument("symbol length does not match the grid");
    if (!symbol.allFinite())
        throw std::domain_error("multiplier symbol is not finite on the lattice");
    Field f = to_fourier(field);
    return Field(f.grid(), f.values() * symbol.cast<complex>(), Space::fourier);
}

Field apply_symbol(const Field& field, const Eigen::ArrayXcd& symbol)
{
    if (symbol.size() != field.grid().size())
        throw std::invalid_argument("symbol length does not match the grid");
    if (!symbol.real().allFinite() || !symbol.imag().allFinite())
        throw std::domain_error("multiplier symbol is not finite on the lattice");
    Field f = to_fourier(field);
    return Field(f.grid(), f.values() * symbol, Space::fourier);
}

Field lambda_power(const Field& field, double power)
{
    Field f = to_fourier(field);
    if (power == 0.0)
        return f;
    if (power < 0.0 && std::abs(f.values()[0]) > 1e-12 * std::sqrt(f.values().abs2().sum()))
        throw std::domain_error("mean-zero required for Λ^{negative}");
    const Grid& g = f.grid();
    if (power == 1.0)
        return Field(g, f.values() * g.frequency_norm().cast<complex>(), Space::fourier);
    if (power == 2.0)
        return Field(g, f.values() * g.frequency_norm_squared().cast<complex>(), Space::fourier);
    Eigen::ArrayXd symbol = g.frequency_norm().pow(power);
    symbol[0] = 0.0;
    return apply_symbol(f, symbol);
}

Field derivative(const Field& field, int axis)
{
    const Grid& g = field.grid();
    if (axis < 0 || axis >= g.dim())
        throw std::invalid_argument("derivative axis out of range");
    // Nyquist mode dropped so real fields stay real.
    Field f = to_fourier(field);
    const Eigen::ArrayXd& k = g.derivative_symbol(axis);
    Eigen::ArrayXcd out(g.size());
    for (Eigen::Index j = 0; j < g.size(); ++j)
        out[j] = complex(-k[j] * f.values()[j].imag(), k[j] * f.values()[j].real());
    return Field(g, std::move(out), Space::fourier);
}

Field dealias(const Field& field)
{
    const Grid& g = field.grid();
    Field f = to_fourier(field);
    Eigen::ArrayXcd v = f.values();
    const int cutoff = g.points() / 3;
    for (Eigen::Index j = 0; j < g.size(); ++j) {
        for (int a = 0; a < g.dim(); ++a) {
            if (std::abs(g.lattice_index(g.coordinate(j, a))) > cutoff) {
                v[j] = 0.0;
                break;
            }
        }
    }
    return Field(g, std::move(v), Space::fourier);
}

} // namespace zlab
