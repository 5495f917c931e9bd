#include "transverse.hpp"

#include "zlab/multiplier.hpp"

#include <cmath>

namespace zlab::detail {

Eigen::ArrayXd transverse_integral(const Eigen::ArrayXd& values, const Grid& grid)
{
    const int n = grid.points();
    const Eigen::Index inner = grid.size() / n;
    Eigen::ArrayXd out(n);
    for (int i = 0; i < n; ++i)
        out[i] = values.segment(i * inner, inner).sum();
    return out * std::pow(grid.spacing(), grid.dim() - 1);
}

Eigen::ArrayXd transverse_norm(const Field& field, double p)
{
    Field f = to_physical(field);
    const Grid& g = f.grid();
    Eigen::ArrayXd m = p == 1.0 ? Eigen::ArrayXd(f.values().abs()) : Eigen::ArrayXd(f.values().abs2());
    Eigen::ArrayXd s = transverse_integral(m, g);
    return p == 1.0 ? s : Eigen::ArrayXd(s.sqrt());
}

Eigen::ArrayXd line_derivative(const Eigen::ArrayXd& values, double dx)
{
    const int n = static_cast<int>(values.size());
    Grid line = make_grid(1, n * dx, n);
    Field f(line, values.cast<complex>(), Space::physical);
    return to_physical(derivative(f, 0)).values().real();
}

std::vector<double> trapezoid_weights(int nodes, double horizon)
{
    std::vector<double> w(nodes + 1, nodes > 0 ? horizon / nodes : 0.0);
    if (nodes > 0) {
        w.front() *= 0.5;
        w.back() *= 0.5;
    }
    return w;
}

Eigen::ArrayXcd filtered(const Field& fourier, const Eigen::ArrayXd& symbol)
{
    return to_physical(apply_symbol(fourier, symbol)).values();
}

} // namespace zlab::detail
