#include "zlab/ensemble.hpp"

#include "zlab/angular.hpp"
#include "zlab/littlewood_paley.hpp"
#include "zlab/multiplier.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace zlab {

EnsembleSpec band_ensemble(double lambda, int count, std::uint64_t seed)
{
    EnsembleSpec s;
    s.sample_count = count;
    s.seed = seed;
    s.radius_low = lambda;
    s.radius_high = 2.25 * lambda;
    s.profile = Profile::band;
    s.scale = lambda;
    return s;
}

EnsembleSpec low_ensemble(double lambda, int count, std::uint64_t seed)
{
    EnsembleSpec s = band_ensemble(lambda, count, seed);
    s.radius_low = 0.0;
    s.profile = Profile::low;
    return s;
}

Eigen::ArrayXd ensemble_weights(const EnsembleSpec& spec, const Grid& grid)
{
    if (spec.sample_count < 0)
        throw std::invalid_argument("sample count must be nonnegative");
    if (spec.radius_high > grid.nyquist())
        throw std::invalid_argument("ensemble support reaches past Nyquist");
    if (spec.cone_axis >= grid.dim())
        throw std::invalid_argument("cone axis out of range");
    if (spec.window_axis < -1 || spec.window_axis >= grid.dim())
        throw std::invalid_argument("window axis out of range");

    const auto& r = grid.frequency_norm();
    Eigen::ArrayXd w = ((r >= spec.radius_low) && (r <= spec.radius_high)).cast<double>();
    if (spec.profile == Profile::band)
        w *= band_symbol(grid, spec.scale);
    else if (spec.profile == Profile::low)
        w *= low_symbol(grid, spec.scale);

    if (spec.cone_axis >= 0) {
        const int a = spec.cone_axis;
        auto along = grid.frequency_component(a);
        Eigen::ArrayXd transverse = (r.square() - along.square()).max(0.0).sqrt();
        w *= (along.abs() >= spec.kappa * transverse && r > 0.0).cast<double>();
        if (spec.profile != Profile::flat)
            w *= patch_symbols(grid, make_angular_partition(grid.dim(), spec.kappa))[a];
    }
    if (!(w > 0.0).any())
        throw std::invalid_argument("ensemble support is empty");
    return w;
}

namespace {

Field draw(const EnsembleSpec& spec, const Grid& grid, const Eigen::ArrayXd& weights, int index)
{
    std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                      static_cast<std::uint32_t>(index)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal;
    Eigen::ArrayXcd noise(grid.size());
    for (Eigen::Index j = 0; j < noise.size(); ++j) {
        double re = normal(rng);
        noise[j] = complex(re, normal(rng));
    }
    if (spec.window > 0.0) {
        const double L = grid.extent();
        Eigen::ArrayXd r2 = Eigen::ArrayXd::Zero(grid.size());
        for (int a = 0; a < grid.dim(); ++a) {
            if (spec.window_axis >= 0 && a != spec.window_axis)
                continue;
            Eigen::ArrayXd x = grid.position_component(a);
            x = (x >= 0.5 * L).select(x - L, x);
            r2 += x.square();
        }
        noise *= (-r2 / (2.0 * spec.window * spec.window)).exp();
    }
    Field f = to_physical(apply_symbol(to_fourier(Field(grid, std::move(noise), Space::physical)), weights));
    if (spec.real)
        f = real_part(f);
    const double norm = f.l2_norm();
    if (!(norm > 0.0))
        throw std::runtime_error("ensemble sample vanished");
    return (1.0 / norm) * f;
}

} // namespace

Field ensemble_sample(const EnsembleSpec& spec, const Grid& grid, int index)
{
    return draw(spec, grid, ensemble_weights(spec, grid), index);
}

Field ensemble_sample(const EnsembleSpec& spec, const Grid& grid, const Eigen::ArrayXd& weights, int index)
{
    if (weights.size() != grid.size())
        throw std::invalid_argument("ensemble weights do not match the grid");
    return draw(spec, grid, weights, index);
}

std::vector<Field> generate_ensemble(const EnsembleSpec& spec, const Grid& grid)
{
    Eigen::ArrayXd w = ensemble_weights(spec, grid);
    std::vector<Field> out;
    out.reserve(spec.sample_count);
    for (int i = 0; i < spec.sample_count; ++i)
        out.push_back(draw(spec, grid, w, i));
    return out;
}

} // namespace zlab
