#pragma once

#include "zlab/field.hpp"

#include <cstdint>
#include <vector>

namespace zlab {

enum class Profile {
    flat, // Gaussian coefficients on the support
    band, // weighted by the P_scale symbol
    low,  // weighted by the P_{<=scale} symbol
};

// Random frequency-localized data. Coefficients are complex Gaussian (drawn
// from a physical-space white noise, optionally windowed in space),
// then masked to the declared support and weighted by the profile. Every
// sample is normalized to unit L^2.
struct EnsembleSpec {
    int sample_count = 32;
    std::uint64_t seed = 0;
    double radius_low = 0.0; // support: radius_low <= |xi| <= radius_high
    double radius_high = 0.0;
    Profile profile = Profile::flat;
    double scale = 1.0;  // lambda of the profile
    int cone_axis = -1;  // >= 0: restrict to |xi_a| >= kappa |xi'| and weight by Q_a
    double kappa = 2.0;
    bool real = false;
    double window = 0.0; // > 0: Gaussian window exp(-x^2 / (2 window^2)), x centred
    int window_axis = 0; // -1: radial window over all axes
};

// Support of P_lambda: [lambda, 9 lambda / 4] weighted by phi(|xi| / lambda).
EnsembleSpec band_ensemble(double lambda, int count, std::uint64_t seed);
// Support of P_{<=lambda}: [0, 9 lambda / 4] weighted by its symbol.
EnsembleSpec low_ensemble(double lambda, int count, std::uint64_t seed);

// Support indicator and weights on the lattice; throws on an empty support or
// one reaching past Nyquist.
Eigen::ArrayXd ensemble_weights(const EnsembleSpec& spec, const Grid& grid);

// Sample i is seeded from (seed, i) alone.
Field ensemble_sample(const EnsembleSpec& spec, const Grid& grid, int index);
// Same draw with weights from ensemble_weights(spec, grid) supplied.
Field ensemble_sample(const EnsembleSpec& spec, const Grid& grid, const Eigen::ArrayXd& weights, int index);
std::vector<Field> generate_ensemble(const EnsembleSpec& spec, const Grid& grid);

} // namespace zlab
