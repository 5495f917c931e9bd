#pragma once

#include "zlab/field.hpp"

#include <tuple>
#include <vector>

namespace zlab {

// Radial cutoff: 1 on r <= 1, 0 on r >= 9/8, smooth monotone bridge between.
double psi(double r);
// Band profile psi(r/2) - psi(r), supported in [1, 9/4].
double phi(double r);
// Kernel cutoff psi(r/4) - psi(2r); equals 1 on the support of phi.
double chi(double r);

bool is_dyadic(double lambda);

// Inhomogeneous Littlewood-Paley family on one grid. Bands are 1, 2, 4, ...
// with P_1 read as P_{<=1}; the top band keeps 9*max_band/4 below Nyquist.
struct DyadicLadder {
    double max_band = 1.0;

    static DyadicLadder for_grid(const Grid& grid);

    // {2, 4, ..., max_band}
    std::vector<double> bands() const;
    // {1, 2, 4, ..., max_band}
    std::vector<double> bands_with_low() const;

    void require_band(double lambda, double lowest) const;
};

// Symbol arrays, reusable across many fields on the same grid.
Eigen::ArrayXd band_symbol(const Grid& grid, double lambda);
// Symbol of P_{<=lambda} = sum_{mu <= lambda} P_mu, i.e. psi(|xi| / (2 lambda)).
Eigen::ArrayXd low_symbol(const Grid& grid, double lambda);

Field project_dyadic(const Field& field, double lambda, const DyadicLadder& ladder);
Field project_low(const Field& field, double lambda, const DyadicLadder& ladder);

struct BonyPieces {
    Field high_low;  // P_sigma((u - P_{<<sigma} u) P_{<<sigma} v)
    Field low_high;  // P_sigma(P_{<<sigma} u (v - P_{<<sigma} v))
    Field high_high; // P_sigma((u - P_{<<sigma} u)(v - P_{<<sigma} v))
};

// Paraproduct split of P_sigma(uv) with "<< sigma" meaning <= sigma/8.
// The three pieces sum to P_sigma(uv) exactly when the product is alias free.
BonyPieces bony_split(const Field& u, const Field& v, double sigma, const DyadicLadder& ladder);

} // namespace zlab
