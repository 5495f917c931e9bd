#include "zlab/littlewood_paley.hpp"

#include "zlab/multiplier.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace zlab {

namespace {

double smooth_step_part(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

// Largest |xi_a| carrying a coefficient above round-off, relative to Nyquist.
void require_alias_free(const Field& u, const char* name)
{
    Field f = to_fourier(u);
    const Grid& g = f.grid();
    const auto& v = f.values();
    double peak = v.abs().maxCoeff();
    if (peak == 0.0)
        return;
    const double limit = g.nyquist() / 2.0;
    for (Eigen::Index j = 0; j < g.size(); ++j) {
        if (std::abs(v[j]) <= 1e-13 * peak)
            continue;
        for (int a = 0; a < g.dim(); ++a) {
            if (std::abs(g.axis_frequency(g.coordinate(j, a))) >= limit)
                throw std::domain_error(std::string("aliasing guard: ") + name +
                                        " has content at or above half the Nyquist frequency");
        }
    }
}

} // namespace

double psi(double r)
{
    if (r <= 1.0)
        return 1.0;
    if (r >= 9.0 / 8.0)
        return 0.0;
    double a = smooth_step_part((9.0 / 8.0 - r) * 8.0);
    double b = smooth_step_part((r - 1.0) * 8.0);
    return a / (a + b);
}

double phi(double r) { return psi(r / 2.0) - psi(r); }

double chi(double r) { return psi(r / 4.0) - psi(2.0 * r); }

bool is_dyadic(double lambda)
{
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        return false;
    int e;
    double m = std::frexp(lambda, &e);
    return m == 0.5;
}

DyadicLadder DyadicLadder::for_grid(const Grid& grid)
{
    DyadicLadder l;
    l.max_band = 1.0;
    while (9.0 * (2.0 * l.max_band) / 4.0 < grid.nyquist())
        l.max_band *= 2.0;
    return l;
}

std::vector<double> DyadicLadder::bands() const
{
    std::vector<double> out;
    for (double b = 2.0; b <= max_band; b *= 2.0)
        out.push_back(b);
    return out;
}

std::vector<double> DyadicLadder::bands_with_low() const
{
    std::vector<double> out{1.0};
    for (double b : bands())
        out.push_back(b);
    return out;
}

void DyadicLadder::require_band(double lambda, double lowest) const
{
    if (!is_dyadic(lambda))
        throw std::invalid_argument("band must be a power of two, got " + std::to_string(lambda));
    if (lambda < lowest)
        throw std::invalid_argument("band " + std::to_string(lambda) + " below " + std::to_string(lowest));
    if (lambda > max_band)
        throw std::invalid_argument("band " + std::to_string(lambda) + " exceeds the grid's max band " +
                                    std::to_string(max_band));
}

Eigen::ArrayXd band_symbol(const Grid& grid, double lambda)
{
    return radial_symbol(grid, [lambda](double r) { return phi(r / lambda); });
}

Eigen::ArrayXd low_symbol(const Grid& grid, double lambda)
{
    return radial_symbol(grid, [lambda](double r) { return psi(r / (2.0 * lambda)); });
}

Field project_dyadic(const Field& field, double lambda, const DyadicLadder& ladder)
{
    ladder.require_band(lambda, 2.0);
    return apply_symbol(field, band_symbol(field.grid(), lambda));
}

Field project_low(const Field& field, double lambda, const DyadicLadder& ladder)
{
    ladder.require_band(lambda, 1.0);
    return apply_symbol(field, low_symbol(field.grid(), lambda));
}

BonyPieces bony_split(const Field& u, const Field& v, double sigma, const DyadicLadder& ladder)
{
    require_same_grid(u, v);
    ladder.require_band(sigma, 2.0);
    require_alias_free(u, "u");
    require_alias_free(v, "v");

    const Grid& g = u.grid();
    Field zero = Field::zeros(g, Space::fourier);
    Field u_low = sigma / 8.0 >= 1.0 ? project_low(u, sigma / 8.0, ladder) : zero;
    Field v_low = sigma / 8.0 >= 1.0 ? project_low(v, sigma / 8.0, ladder) : zero;
    Field u_high = to_fourier(u) - u_low;
    Field v_high = to_fourier(v) - v_low;

    auto p_sigma = [&](const Field& a, const Field& b) {
        return project_dyadic(multiply(a, b), sigma, ladder);
    };
    return BonyPieces{p_sigma(u_high, v_low), p_sigma(u_low, v_high), p_sigma(u_high, v_high)};
}

} // namespace zlab
