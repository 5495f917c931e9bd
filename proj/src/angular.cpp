#include "zlab/angular.hpp"

#include "zlab/multiplier.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace zlab {

namespace {

void add_unique(std::vector<Eigen::Vector3d>& dirs, Eigen::Vector3d w)
{
    w.normalize();
    for (const auto& d : dirs)
        if (std::abs(d.dot(w)) > 1.0 - 1e-12)
            return;
    // Canonical sign: first nonzero component positive.
    for (int a = 0; a < 3; ++a) {
        if (std::abs(w[a]) > 1e-15) {
            if (w[a] < 0)
                w = -w;
            break;
        }
    }
    dirs.push_back(w);
}

} // namespace

int AngularPartition::nearest_axis(int i) const
{
    const auto& w = directions.at(i);
    int best = 0;
    for (int a = 1; a < dim; ++a)
        if (std::abs(w[a]) > std::abs(w[best]) + 1e-12)
            best = a;
    return best;
}

std::vector<int> AngularPartition::patches_per_axis() const
{
    std::vector<int> count(dim, 0);
    for (int i = 0; i < patch_count(); ++i)
        ++count[nearest_axis(i)];
    return count;
}

double AngularPartition::bump(int i, const std::array<double, 3>& xi) const
{
    const auto& w = directions[i];
    double along = 0.0;
    for (int a = 0; a < dim; ++a)
        along += xi[a] * w[a];
    double perp2 = 0.0;
    for (int a = 0; a < dim; ++a) {
        double c = xi[a] - along * w[a];
        perp2 += c * c;
    }
    double angle = std::atan2(std::sqrt(perp2), std::abs(along));
    double x = angle / support_angle;
    if (x >= 1.0)
        return 0.0;
    return std::exp(-1.0 / (1.0 - x * x));
}

double AngularPartition::covering_radius_estimate(int samples) const
{
    double worst = 0.0;
    auto visit = [&](const Eigen::Vector3d& p) {
        double best = 0.0;
        for (const auto& w : directions)
            best = std::max(best, std::abs(p.dot(w)));
        worst = std::max(worst, std::acos(std::min(1.0, best)));
    };
    if (dim == 1)
        return 0.0;
    if (dim == 2) {
        for (int j = 0; j < samples; ++j) {
            double t = std::numbers::pi * (j + 0.5) / samples;
            visit(Eigen::Vector3d(std::cos(t), std::sin(t), 0.0));
        }
        return worst;
    }
    // Fibonacci points on the sphere.
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int j = 0; j < samples; ++j) {
        double z = 1.0 - 2.0 * (j + 0.5) / samples;
        double r = std::sqrt(1.0 - z * z);
        double t = golden * j;
        visit(Eigen::Vector3d(r * std::cos(t), r * std::sin(t), z));
    }
    return worst;
}

AngularPartition make_angular_partition(int dim, double kappa)
{
    if (dim < 1 || dim > 3)
        throw std::invalid_argument("partition dimension must be 1, 2 or 3");
    if (!(kappa >= 1.0) || !std::isfinite(kappa))
        throw std::invalid_argument("cone constant must be >= 1");

    AngularPartition p;
    p.dim = dim;
    p.cone_constant = kappa;
    p.support_angle = 0.95 * std::atan(1.0 / kappa);
    const double target = 0.9 * p.support_angle;

    if (dim == 1) {
        p.directions.push_back(Eigen::Vector3d::UnitX());
        return p;
    }
    if (dim == 2) {
        // m equally spaced lines; m even puts both axes on the list.
        int m = 2;
        while (std::numbers::pi / (2.0 * m) >= target)
            m += 2;
        for (int j = 0; j < m; ++j) {
            double t = std::numbers::pi * j / m;
            p.directions.emplace_back(std::cos(t), std::sin(t), 0.0);
        }
        // Exact axes.
        p.directions[0] = Eigen::Vector3d::UnitX();
        p.directions[m / 2] = Eigen::Vector3d::UnitY();
        // Reorder so the axes come first.
        std::swap(p.directions[1], p.directions[m / 2]);
        return p;
    }

    // Cube-sphere lattice on the three faces x_a = 1 with spacing 2/m.
    // In the plane x_a = 1 the angle between two points is at most their
    // distance, so the covering radius is at most sqrt(2)/m.
    int m = 2;
    while (std::sqrt(2.0) / m >= target)
        m += 2;
    for (int a = 0; a < 3; ++a)
        add_unique(p.directions, Eigen::Vector3d::Unit(a));
    for (int a = 0; a < 3; ++a) {
        for (int i = 0; i <= m; ++i) {
            for (int j = 0; j <= m; ++j) {
                Eigen::Vector3d w;
                w[a] = 1.0;
                w[(a + 1) % 3] = -1.0 + 2.0 * i / m;
                w[(a + 2) % 3] = -1.0 + 2.0 * j / m;
                add_unique(p.directions, w);
            }
        }
    }
    return p;
}

std::vector<Eigen::ArrayXd> patch_symbols(const Grid& grid, const AngularPartition& partition)
{
    if (grid.dim() != partition.dim)
        throw std::invalid_argument("partition dimension does not match the grid");
    const int count = partition.patch_count();
    std::vector<Eigen::ArrayXd> q(count, Eigen::ArrayXd::Zero(grid.size()));
    std::vector<double> w(count);
    std::array<double, 3> xi{};
    for (Eigen::Index j = 0; j < grid.size(); ++j) {
        for (int a = 0; a < grid.dim(); ++a)
            xi[a] = grid.axis_frequency(grid.coordinate(j, a));
        if (grid.frequency_norm()[j] == 0.0) {
            q[0][j] = 1.0;
            continue;
        }
        double total = 0.0;
        for (int i = 0; i < count; ++i) {
            w[i] = partition.bump(i, xi);
            total += w[i];
        }
        if (!(total > 0.0))
            throw std::logic_error("angular partition leaves a lattice direction uncovered");
        for (int i = 0; i < count; ++i)
            q[i][j] = w[i] / total;
    }
    return q;
}

Field project_angular(const Field& field, double lambda, int direction_index,
                      const AngularPartition& partition, const DyadicLadder& ladder)
{
    if (direction_index < 0 || direction_index >= partition.patch_count())
        throw std::out_of_range("direction index " + std::to_string(direction_index) +
                                " out of range for " + std::to_string(partition.patch_count()) +
                                " patches");
    ladder.require_band(lambda, 2.0);
    auto q = patch_symbols(field.grid(), partition);
    Eigen::ArrayXd symbol = q[direction_index] * band_symbol(field.grid(), lambda);
    return apply_symbol(field, symbol);
}

} // namespace zlab
