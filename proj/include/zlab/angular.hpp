#pragma once

#include "zlab/littlewood_paley.hpp"

#include <Eigen/Core>

#include <vector>

namespace zlab {

// Smooth partition of the projective sphere into cones around directions
// omega_i. Each Q_i is supported where the angle to the line through omega_i
// is below 0.95 * atan(1/kappa), which enforces |xi . omega_i| >= kappa |xi'|.
// Patches are antipodally even so real fields stay real under projection.
struct AngularPartition {
    int dim = 2;
    double cone_constant = 2.0;
    double support_angle = 0.0;
    std::vector<Eigen::Vector3d> directions; // axes first

    int patch_count() const { return static_cast<int>(directions.size()); }
    // Axis whose frame is used to norm patch i (largest |omega_i . e_a|).
    int nearest_axis(int i) const;
    // Number of patches normed in each axis frame.
    std::vector<int> patches_per_axis() const;
    // Unnormalized bump of patch i at a nonzero frequency.
    double bump(int i, const std::array<double, 3>& xi) const;
    // Largest angle from a direction to the nearest omega_i, estimated on a
    // dense test set of the sphere.
    double covering_radius_estimate(int samples) const;
};

AngularPartition make_angular_partition(int dim, double kappa = 2.0);

// All Q_i evaluated on the lattice. Throws if some nonzero lattice frequency
// is outside every patch. At xi = 0 the first patch takes the full weight.
std::vector<Eigen::ArrayXd> patch_symbols(const Grid& grid, const AngularPartition& partition);

Field project_angular(const Field& field, double lambda, int direction_index,
                      const AngularPartition& partition, const DyadicLadder& ladder);

} // namespace zlab
