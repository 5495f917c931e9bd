#pragma once

#include "zlab/angular.hpp"
#include "zlab/propagators.hpp"

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace zlab {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

// L_t^q L_{x_j}^p L_{transverse}^r. Only axis directions are evaluated
// exactly; sup_accurate refines the transverse axes 2x before a transverse
// supremum.
struct NormSpec {
    double time_exponent = 2.0;
    double along_exponent = 2.0;
    double transverse_exponent = 2.0;
    Eigen::VectorXd direction;
    bool sup_accurate = false;
};

NormSpec axis_norm(double q, double p, double r, int axis, int dim, bool sup_accurate = false);

// Axis index of spec.direction; throws "axis-aligned directions only".
int norm_axis(const NormSpec& spec, int dim);

// (sum_j w_j |x_j|^p)^{1/p} with max for p = inf; w is a scalar weight.
template <typename Derived>
double weighted_lp(const Eigen::ArrayBase<Derived>& x, double p, double w)
{
    if (x.size() == 0)
        return 0.0;
    if (std::isinf(p))
        return x.abs().maxCoeff();
    if (p == 1.0)
        return w * x.abs().sum();
    if (p == 2.0)
        return std::sqrt(w * x.abs2().sum());
    return std::pow(w * x.abs().pow(p).sum(), 1.0 / p);
}

// Composite trapezoid L^q over uniformly spaced samples (max for q = inf).
double time_norm(std::span<const double> samples, double dt, double q);

// L^p_{x_j} L^r_{transverse} of one snapshot.
double spatial_mixed_norm(const Field& field, int axis, double p, double r, bool sup_accurate = false);

double mixed_norm(const Trajectory& traj, const NormSpec& spec);

// (sum (1 + |xi|^2)^s |u(xi)|^2)^{1/2} in the continuum normalization.
double sobolev_norm(const Field& field, double s);
// (sum_lambda (lambda^s ||P_lambda u||)^2)^{1/2} with P_1 = P_{<=1}; bands
// continue until they cover the whole lattice.
double sobolev_norm_dyadic(const Field& field, double s);

enum class S1Reading {
    as_written, // d = 3: ||P_lambda u|| counted once per patch
    angular,    // d = 3: ||P_{lambda, omega_i} u||
};

struct IterationNormFamily {
    int dim = 2;
    double s = 0.0;
    double l = -0.5;
    double horizon = 0.0;
    DyadicLadder ladder;
    AngularPartition partition;
    S1Reading s1_reading = S1Reading::as_written;
    bool sup_accurate = false;

    bool off_regime() const;
    std::string regime_tag() const;
};

IterationNormFamily make_norm_family(const Grid& grid, double s, double l, double horizon,
                                     double kappa = 2.0, S1Reading reading = S1Reading::as_written);

double s1_norm(const Trajectory& traj, const IterationNormFamily& fam);
double n1_norm(const Trajectory& traj, const IterationNormFamily& fam);
double s2_norm(const Trajectory& traj, const IterationNormFamily& fam);
double n2_norm(const Trajectory& traj, const IterationNormFamily& fam);
// max(L_t^inf H^s, S_1)
double x_norm(const Trajectory& traj, const IterationNormFamily& fam);

} // namespace zlab
