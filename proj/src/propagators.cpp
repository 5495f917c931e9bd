#include "zlab/propagators.hpp"

#include "zlab/littlewood_paley.hpp"
#include "zlab/multiplier.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace zlab {

namespace {

// e^{-i t omega}
Eigen::ArrayXcd phase(const Eigen::ArrayXd& omega, double t)
{
    Eigen::ArrayXd a = -t * omega;
    Eigen::ArrayXcd out(a.size());
    out.real() = a.cos();
    out.imag() = a.sin();
    return out;
}

const Eigen::ArrayXd& dispersion(const Grid& g, Equation kind)
{
    return kind == Equation::schrodinger ? g.frequency_norm_squared() : g.frequency_norm();
}

void require_real(const Field& f, const char* name)
{
    if (imaginary_residue(f) > 1e-12)
        throw std::invalid_argument(std::string(name) + " must be real-valued");
}

void require_mean_zero(const Field& f, const char* name)
{
    Field c = to_fourier(f);
    if (std::abs(c.values()[0]) > 1e-12 * std::sqrt(c.values().abs2().sum()))
        throw std::invalid_argument(std::string(name) + " must be mean-zero");
}

} // namespace

const char* equation_name(Equation e)
{
    switch (e) {
    case Equation::schrodinger:
        return "schrodinger";
    case Equation::half_wave:
        return "half_wave";
    case Equation::wave_pair:
        return "wave_pair";
    }
    return "unknown";
}

Trajectory make_trajectory(std::vector<Field> snapshots, double horizon, Equation equation)
{
    if (snapshots.empty())
        throw std::invalid_argument("trajectory needs at least one snapshot");
    if (!(horizon >= 0.0) || (snapshots.size() > 1 && !(horizon > 0.0)))
        throw std::invalid_argument("trajectory horizon must be positive");
    for (const auto& s : snapshots)
        require_same_grid(snapshots.front(), s);
    Grid g = snapshots.front().grid();
    return Trajectory{std::move(g), horizon, std::move(snapshots), equation};
}

Trajectory operator-(const Trajectory& a, const Trajectory& b)
{
    if (a.nodes() != b.nodes())
        throw std::invalid_argument("trajectory node mismatch");
    std::vector<Field> out;
    for (int m = 0; m <= a.nodes(); ++m)
        out.push_back(a.snapshots[m] - b.snapshots[m]);
    return make_trajectory(std::move(out), a.horizon, a.equation);
}

Trajectory operator*(double c, const Trajectory& a)
{
    return map_trajectory(a, [c](const Field& f) { return c * f; });
}

Trajectory multiply(const Trajectory& a, const Trajectory& b)
{
    if (a.nodes() != b.nodes())
        throw std::invalid_argument("trajectory node mismatch");
    std::vector<Field> out;
    for (int m = 0; m <= a.nodes(); ++m)
        out.push_back(multiply(a.snapshots[m], b.snapshots[m]));
    return make_trajectory(std::move(out), a.horizon, a.equation);
}

SourceTerm source_from(const Trajectory& t, std::string label)
{
    return SourceTerm{t.snapshots, std::move(label)};
}

Field schrodinger_flow(const Field& e0, double t)
{
    return apply_symbol(e0, phase(e0.grid().frequency_norm_squared(), t));
}

Field half_wave_flow(const Field& v0, double t)
{
    return apply_symbol(v0, phase(v0.grid().frequency_norm(), t));
}

std::pair<Field, Field> wave_flow(const Field& n0, const Field& n1, double t)
{
    require_same_grid(n0, n1);
    require_real(n0, "n0");
    require_real(n1, "n1");
    require_mean_zero(n1, "n1");

    const Eigen::ArrayXd& r = n0.grid().frequency_norm();
    Eigen::ArrayXd c = (t * r).cos();
    Eigen::ArrayXd s = (t * r).sin();
    Eigen::ArrayXd sinc(r.size());
    for (Eigen::Index j = 0; j < r.size(); ++j)
        sinc[j] = r[j] > 0.0 ? s[j] / r[j] : t;

    Field a = to_fourier(n0);
    Field b = to_fourier(n1);
    Eigen::ArrayXcd n = c.cast<complex>() * a.values() + sinc.cast<complex>() * b.values();
    Eigen::ArrayXcd dn = (-r * s).cast<complex>() * a.values() + c.cast<complex>() * b.values();
    return {Field(n0.grid(), std::move(n), Space::fourier), Field(n0.grid(), std::move(dn), Space::fourier)};
}

Trajectory free_trajectory(Equation kind, const Field& initial, double horizon, int nodes)
{
    if (nodes < 0)
        throw std::invalid_argument("node count must be nonnegative");
    const Grid& g = initial.grid();
    Field u0 = to_fourier(initial);
    const Eigen::ArrayXd& omega = dispersion(g, kind);
    std::vector<Field> out;
    out.reserve(nodes + 1);
    for (int m = 0; m <= nodes; ++m) {
        double t = nodes > 0 ? horizon * m / nodes : 0.0;
        out.emplace_back(g, phase(omega, t) * u0.values(), Space::fourier);
    }
    return make_trajectory(std::move(out), horizon, kind);
}

Trajectory duhamel(Equation kind, const Field& initial, const SourceTerm& source, double horizon,
                   int nodes)
{
    if (nodes < 1)
        throw std::invalid_argument("duhamel needs at least one time step");
    if (static_cast<int>(source.samples.size()) != nodes + 1)
        throw std::invalid_argument("source '" + source.label + "' has " +
                                    std::to_string(source.samples.size()) + " samples, expected " +
                                    std::to_string(nodes + 1));
    const Grid& g = initial.grid();
    Field u0 = to_fourier(initial);
    const Eigen::ArrayXd& omega = dispersion(g, kind);
    const double dt = horizon / nodes;
    const complex minus_i(0.0, -1.0);

    Eigen::ArrayXcd acc = Eigen::ArrayXcd::Zero(g.size());
    Eigen::ArrayXcd prev;
    std::vector<Field> out;
    out.reserve(nodes + 1);
    for (int m = 0; m <= nodes; ++m) {
        require_same_grid(initial, source.samples[m]);
        const double t = horizon * m / nodes;
        Field f = kind == Equation::wave_pair ? -1.0 * lambda_power(source.samples[m], -1.0)
                                              : to_fourier(source.samples[m]);
        Eigen::ArrayXcd ph = phase(omega, t);
        Eigen::ArrayXcd gm = ph.conjugate() * f.values();
        if (m > 0)
            acc += 0.5 * dt * (prev + gm);
        prev = std::move(gm);
        out.emplace_back(g, ph * (u0.values() + minus_i * acc), Space::fourier);
    }
    return make_trajectory(std::move(out), horizon, kind);
}

double wave_energy(const Field& n, const Field& dtn)
{
    require_same_grid(n, dtn);
    const Grid& g = n.grid();
    double sum = to_physical(dtn).values().abs2().sum();
    for (int a = 0; a < g.dim(); ++a)
        sum += to_physical(derivative(n, a)).values().abs2().sum();
    return 0.5 * g.cell_volume() * sum;
}

double kernel_wrap_time(const Grid& grid, double lambda)
{
    return grid.extent() / (4.0 * 9.0 * lambda);
}

Field dispersive_kernel(double lambda, double t, const Grid& grid)
{
    if (!(lambda > 0.0))
        throw std::invalid_argument("kernel band must be positive");
    if (4.5 * lambda >= grid.nyquist())
        throw std::invalid_argument("kernel band exceeds the grid's band limit");
    if (t < 0.0 || t >= kernel_wrap_time(grid, lambda))
        throw std::invalid_argument("kernel time " + std::to_string(t) +
                                    " violates the wrap-around guard (must be below " +
                                    std::to_string(kernel_wrap_time(grid, lambda)) + ")");
    Eigen::ArrayXd cut = radial_symbol(grid, [lambda](double r) { return chi(r / lambda); });
    const double scale = std::sqrt(static_cast<double>(grid.size())) / std::pow(grid.extent(), grid.dim());
    Eigen::ArrayXcd coeff = scale * phase(grid.frequency_norm_squared(), t) * cut.cast<complex>();
    return to_physical(Field(grid, std::move(coeff), Space::fourier));
}

} // namespace zlab
