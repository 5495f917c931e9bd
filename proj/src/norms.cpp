#include "zlab/norms.hpp"

#include "zlab/fft.hpp"
#include "zlab/littlewood_paley.hpp"
#include "zlab/multiplier.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <utility>

namespace zlab {

namespace {

// Transverse reduction for each index along `axis`, then the along norm.
double reduce_mixed(const Eigen::ArrayXcd& values, const std::vector<int>& shape,
                    const std::vector<double>& spacing, int axis, double p, double r)
{
    const int dim = static_cast<int>(shape.size());
    const int n_along = shape[axis];
    Eigen::Index stride = 1;
    for (int a = dim - 1; a > axis; --a)
        stride *= shape[a];

    double transverse_volume = 1.0;
    for (int a = 0; a < dim; ++a)
        if (a != axis)
            transverse_volume *= spacing[a];

    // Row-major layout: j = (outer * n_along + i) * stride + inner.
    const Eigen::Index outer = values.size() / (n_along * stride);
    Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(n_along);
    const bool sup = std::isinf(r);
    for (Eigen::Index o = 0; o < outer; ++o) {
        for (int i = 0; i < n_along; ++i) {
            auto row = values.segment((o * n_along + i) * stride, stride);
            if (sup)
                acc[i] = std::max(acc[i], row.abs2().maxCoeff());
            else if (r == 2.0)
                acc[i] += row.abs2().sum();
            else if (r == 1.0)
                acc[i] += row.abs().sum();
            else
                acc[i] += row.abs().pow(r).sum();
        }
    }
    if (sup) {
        acc = acc.sqrt();
    } else if (r == 2.0) {
        acc = (transverse_volume * acc).sqrt();
    } else if (r == 1.0) {
        acc *= transverse_volume;
    } else {
        acc = (transverse_volume * acc).pow(1.0 / r);
    }
    return weighted_lp(acc, p, spacing[axis]);
}

// One frequency cutoff normed in one or more axis frames; each frame's
// squared norm is multiplied by its factor.
struct Piece {
    Eigen::ArrayXd symbol;
    std::vector<std::pair<int, double>> frames; // (axis, factor)
};

// sqrt(sum over pieces and frames of factor * ||piece(u)||^2_{L^q_t L^p L^r}).
double banded_norm(const Trajectory& traj, const std::vector<Piece>& pieces, double q, double p,
                   double r, bool sup_accurate)
{
    const int nodes = traj.nodes();
    std::vector<std::vector<std::vector<double>>> samples(pieces.size());
    for (std::size_t k = 0; k < pieces.size(); ++k)
        samples[k].assign(pieces[k].frames.size(), std::vector<double>(nodes + 1));
    for (int m = 0; m <= nodes; ++m) {
        Field f = to_fourier(traj.snapshots[m]);
        for (std::size_t k = 0; k < pieces.size(); ++k) {
            Field piece = to_physical(apply_symbol(f, pieces[k].symbol));
            for (std::size_t a = 0; a < pieces[k].frames.size(); ++a)
                samples[k][a][m] =
                    spatial_mixed_norm(piece, pieces[k].frames[a].first, p, r, sup_accurate);
        }
    }
    double total = 0.0;
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        for (std::size_t a = 0; a < pieces[k].frames.size(); ++a) {
            double v = time_norm(samples[k][a], traj.step(), q);
            total += pieces[k].frames[a].second * v * v;
        }
    }
    return std::sqrt(total);
}

Eigen::ArrayXd ladder_symbol(const Grid& g, double lambda)
{
    return lambda == 1.0 ? low_symbol(g, 1.0) : band_symbol(g, lambda);
}

void require_family(const Trajectory& traj, const IterationNormFamily& fam)
{
    if (traj.grid.dim() != fam.dim)
        throw std::invalid_argument("norm family dimension does not match the trajectory");
    if (DyadicLadder::for_grid(traj.grid).max_band < fam.ladder.max_band)
        throw std::invalid_argument("norm family bands exceed the trajectory grid's band limit");
}

// P_lambda pieces normed in each axis frame, weighted by the patch count.
std::vector<Piece> axis_pieces(const Grid& g, const IterationNormFamily& fam, double band_power)
{
    std::vector<Piece> pieces;
    auto counts = fam.partition.patches_per_axis();
    for (double lambda : fam.ladder.bands_with_low()) {
        Piece piece{ladder_symbol(g, lambda), {}};
        for (int a = 0; a < fam.dim; ++a)
            if (counts[a] > 0)
                piece.frames.emplace_back(a, counts[a] * std::pow(lambda, band_power));
        pieces.push_back(std::move(piece));
    }
    return pieces;
}

std::vector<Piece> angular_pieces(const Grid& g, const IterationNormFamily& fam)
{
    std::vector<Piece> pieces;
    auto q = patch_symbols(g, fam.partition);
    for (double lambda : fam.ladder.bands_with_low()) {
        Eigen::ArrayXd sym = ladder_symbol(g, lambda);
        for (int i = 0; i < fam.partition.patch_count(); ++i)
            pieces.push_back({q[i] * sym, {{fam.partition.nearest_axis(i), 1.0}}});
    }
    return pieces;
}

} // namespace

NormSpec axis_norm(double q, double p, double r, int axis, int dim, bool sup_accurate)
{
    NormSpec s;
    s.time_exponent = q;
    s.along_exponent = p;
    s.transverse_exponent = r;
    s.direction = Eigen::VectorXd::Unit(dim, axis);
    s.sup_accurate = sup_accurate;
    return s;
}

int norm_axis(const NormSpec& spec, int dim)
{
    for (double e : {spec.time_exponent, spec.along_exponent, spec.transverse_exponent})
        if (!(e >= 1.0))
            throw std::invalid_argument("norm exponents must lie in [1, inf]");
    if (spec.direction.size() != dim)
        throw std::invalid_argument("norm direction has the wrong dimension");
    for (int a = 0; a < dim; ++a) {
        if (std::abs(std::abs(spec.direction[a]) - 1.0) < 1e-12 &&
            std::abs(spec.direction.norm() - 1.0) < 1e-12)
            return a;
    }
    throw std::invalid_argument("axis-aligned directions only");
}

double time_norm(std::span<const double> samples, double dt, double q)
{
    if (samples.empty())
        return 0.0;
    if (std::isinf(q))
        return *std::max_element(samples.begin(), samples.end());
    if (samples.size() == 1)
        return 0.0;
    double sum = 0.0;
    for (std::size_t m = 0; m < samples.size(); ++m) {
        double w = (m == 0 || m + 1 == samples.size()) ? 0.5 * dt : dt;
        sum += w * std::pow(samples[m], q);
    }
    return std::pow(sum, 1.0 / q);
}

double spatial_mixed_norm(const Field& field, int axis, double p, double r, bool sup_accurate)
{
    const Grid& g = field.grid();
    if (axis < 0 || axis >= g.dim())
        throw std::invalid_argument("norm axis out of range");
    if (sup_accurate && std::isinf(r) && g.dim() > 1) {
        std::vector<int> factor(g.dim(), 2);
        factor[axis] = 1;
        auto fine = fft::refine(field, factor);
        std::vector<double> spacing(g.dim(), g.spacing() / 2.0);
        spacing[axis] = g.spacing();
        return reduce_mixed(fine.values, fine.shape, spacing, axis, p, r);
    }
    Field f = to_physical(field);
    std::vector<int> shape(g.dim(), g.points());
    std::vector<double> spacing(g.dim(), g.spacing());
    return reduce_mixed(f.values(), shape, spacing, axis, p, r);
}

double mixed_norm(const Trajectory& traj, const NormSpec& spec)
{
    const int axis = norm_axis(spec, traj.grid.dim());
    std::vector<double> g(traj.snapshots.size());
    for (std::size_t m = 0; m < g.size(); ++m)
        g[m] = spatial_mixed_norm(traj.snapshots[m], axis, spec.along_exponent,
                                  spec.transverse_exponent, spec.sup_accurate);
    return time_norm(g, traj.step(), spec.time_exponent);
}

double sobolev_norm(const Field& field, double s)
{
    Field f = to_fourier(field);
    const Grid& g = f.grid();
    Eigen::ArrayXd w = (1.0 + g.frequency_norm_squared()).pow(s);
    return std::sqrt(g.cell_volume() * (w * f.values().abs2()).sum());
}

double sobolev_norm_dyadic(const Field& field, double s)
{
    Field f = to_fourier(field);
    const Grid& g = f.grid();
    const double top = g.frequency_norm().maxCoeff();
    double total = 0.0;
    for (double lambda = 1.0;; lambda *= 2.0) {
        Eigen::ArrayXd sym = ladder_symbol(g, lambda);
        double piece = apply_symbol(f, sym).l2_norm();
        total += std::pow(lambda, 2.0 * s) * piece * piece;
        if (2.0 * lambda >= top)
            break;
    }
    return std::sqrt(total);
}

bool IterationNormFamily::off_regime() const
{
    if (dim == 2)
        return s != 0.0 || l != -0.5;
    if (dim == 3)
        return !(s > 0.0) || std::abs(l - (s - 0.5)) > 1e-12;
    return true;
}

std::string IterationNormFamily::regime_tag() const { return off_regime() ? "off-regime" : "paper-regime"; }

IterationNormFamily make_norm_family(const Grid& grid, double s, double l, double horizon, double kappa,
                                     S1Reading reading)
{
    IterationNormFamily fam;
    fam.dim = grid.dim();
    fam.s = s;
    fam.l = l;
    fam.horizon = horizon;
    fam.ladder = DyadicLadder::for_grid(grid);
    fam.partition = make_angular_partition(grid.dim(), kappa);
    fam.s1_reading = reading;
    return fam;
}

double s1_norm(const Trajectory& traj, const IterationNormFamily& fam)
{
    require_family(traj, fam);
    const Grid& g = traj.grid;
    const double q = fam.dim == 2 ? 4.0 : 2.0;
    bool angular = fam.dim != 3 || fam.s1_reading == S1Reading::angular;
    auto pieces = angular ? angular_pieces(g, fam) : axis_pieces(g, fam, 0.0);
    return banded_norm(traj, pieces, q, 2.0, infinity, fam.sup_accurate);
}

double n1_norm(const Trajectory& traj, const IterationNormFamily& fam)
{
    require_family(traj, fam);
    const double q = fam.dim == 3 ? 2.0 : 4.0 / 3.0;
    const double band_power = fam.dim == 3 ? 4.0 * fam.s : 0.0;
    return banded_norm(traj, axis_pieces(traj.grid, fam, band_power), q, 2.0, 1.0, false);
}

double s2_norm(const Trajectory& traj, const IterationNormFamily& fam)
{
    std::vector<double> g;
    for (const auto& f : traj.snapshots)
        g.push_back(sobolev_norm(f, fam.l));
    return time_norm(g, traj.step(), infinity);
}

double n2_norm(const Trajectory& traj, const IterationNormFamily& fam)
{
    std::vector<double> g;
    for (const auto& f : traj.snapshots)
        g.push_back(sobolev_norm(f, fam.l));
    return time_norm(g, traj.step(), 1.0);
}

double x_norm(const Trajectory& traj, const IterationNormFamily& fam)
{
    std::vector<double> g;
    for (const auto& f : traj.snapshots)
        g.push_back(sobolev_norm(f, fam.s));
    return std::max(time_norm(g, traj.step(), infinity), s1_norm(traj, fam));
}

} // namespace zlab
