#pragma once

#include "zlab/field.hpp"

#include <string>
#include <utility>
#include <vector>

namespace zlab {

enum class Equation { schrodinger, half_wave, wave_pair };

const char* equation_name(Equation e);

// Uniformly sampled solution on [0, T]: snapshot m sits at t_m = m T / M.
// A wave_pair trajectory stores the reduced variable v = n + i Λ^{-1} ∂_t n.
struct Trajectory {
    Grid grid;
    double horizon = 0.0;
    std::vector<Field> snapshots;
    Equation equation = Equation::schrodinger;

    int nodes() const { return static_cast<int>(snapshots.size()) - 1; }
    double step() const { return nodes() > 0 ? horizon / nodes() : 0.0; }
    double time(int m) const { return nodes() > 0 ? horizon * m / nodes() : 0.0; }
};

// Builds a trajectory, checking grids and sample count.
Trajectory make_trajectory(std::vector<Field> snapshots, double horizon, Equation equation);

// Pointwise maps over trajectories.
Trajectory map_trajectory(const Trajectory& a, const auto& f)
{
    std::vector<Field> out;
    out.reserve(a.snapshots.size());
    for (const auto& s : a.snapshots)
        out.push_back(f(s));
    return make_trajectory(std::move(out), a.horizon, a.equation);
}
Trajectory operator-(const Trajectory& a, const Trajectory& b);
Trajectory operator*(double c, const Trajectory& a);
// Pointwise product (physical space) at each node.
Trajectory multiply(const Trajectory& a, const Trajectory& b);

struct SourceTerm {
    std::vector<Field> samples;
    std::string label;
};

// Forcing sampled from a trajectory, node by node.
SourceTerm source_from(const Trajectory& t, std::string label);

// e^{itΔ}: Fourier symbol e^{-it|xi|^2}.
Field schrodinger_flow(const Field& e0, double t);
// e^{-itΛ}: Fourier symbol e^{-it|xi|}.
Field half_wave_flow(const Field& v0, double t);
// Free wave equation; returns (n(t), ∂_t n(t)). Inputs must be real and n1
// mean-zero.
std::pair<Field, Field> wave_flow(const Field& n0, const Field& n1, double t);

// Free flow sampled on M+1 uniform nodes.
Trajectory free_trajectory(Equation kind, const Field& initial, double horizon, int nodes);

// u(t_m) = U(t_m) u0 - i ∫_0^{t_m} U(t_m - s) F(s) ds, the integral by the
// composite trapezoid rule in the interaction picture. For wave_pair the
// initial field is v0 and the source is the real forcing G of
// ∂_t² n - Δn = G, which enters the half-wave equation as -Λ^{-1} G.
Trajectory duhamel(Equation kind, const Field& initial, const SourceTerm& source, double horizon,
                   int nodes);

// ∫ (|∂_t n|^2 + |∇n|^2) / 2 dx by the grid quadrature.
double wave_energy(const Field& n, const Field& dtn);

// Largest t for which the band-lambda kernel stays clear of its periodic
// images: L / (4 v_max) with group speed v_max = 9 lambda on supp chi.
double kernel_wrap_time(const Grid& grid, double lambda);

// φ_λ(t, ·): inverse transform of e^{-it|xi|^2} chi(|xi|/lambda), scaled to
// approximate the continuum kernel (2π)^{-d} ∫ e^{ix.xi} (...) dxi.
Field dispersive_kernel(double lambda, double t, const Grid& grid);

} // namespace zlab
