#pragma once

#include "zlab/field.hpp"

#include <cstdint>
#include <random>

namespace zlab::test {

// Complex Gaussian Fourier coefficients on |xi| <= radius, unit L^2 norm.
inline Field random_band_limited(const Grid& g, double radius, std::uint64_t seed, bool real = false)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::ArrayXcd c(g.size());
    for (Eigen::Index j = 0; j < g.size(); ++j) {
        double a = normal(rng), b = normal(rng);
        c[j] = g.frequency_norm()[j] <= radius ? complex(a, b) : complex(0.0);
    }
    Field f = to_physical(Field(g, c, Space::fourier));
    if (real)
        f = real_part(f);
    return (1.0 / f.l2_norm()) * f;
}

inline Field plane_wave(const Grid& g, std::array<double, 3> k, complex amplitude = 1.0)
{
    return Field::sample(g, [&](const std::array<double, 3>& x) {
        double phase = 0.0;
        for (int a = 0; a < g.dim(); ++a)
            phase += k[a] * x[a];
        return amplitude * std::exp(complex(0.0, phase));
    });
}

inline double relative_error(const Field& a, const Field& b)
{
    double denom = b.l2_norm();
    double num = (a - b).l2_norm();
    return denom == 0.0 ? num : num / denom;
}

inline double max_abs_diff(const Field& a, const Field& b)
{
    return (to_physical(a).values() - to_physical(b).values()).abs().maxCoeff();
}

} // namespace zlab::test
