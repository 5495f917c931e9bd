#include "zlab/verifier.hpp"

#include "transverse.hpp"
#include "zlab/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace zlab {

namespace {

// Transverse-integrated density and flux of one conservation law at time t.
using Law = std::function<std::pair<Eigen::ArrayXd, Eigen::ArrayXd>(double)>;

struct Snapshot {
    Eigen::ArrayXcd E, E1;           // E, ∂_1 E
    Eigen::ArrayXd n, nt, n1, grad_y; // n, ∂_t n, ∂_1 n, |∇_y n|^2
};

Snapshot snapshot(const Field& E0, const Field& n0, const Field& n1, double t)
{
    const Grid& g = E0.grid();
    Field E = to_physical(schrodinger_flow(E0, t));
    auto [n, dtn] = wave_flow(n0, n1, t);
    Snapshot s;
    s.E = E.values();
    s.E1 = to_physical(derivative(E, 0)).values();
    s.n = to_physical(n).values().real();
    s.nt = to_physical(dtn).values().real();
    s.n1 = to_physical(derivative(n, 0)).values().real();
    s.grad_y = Eigen::ArrayXd::Zero(g.size());
    for (int a = 1; a < g.dim(); ++a)
        s.grad_y += to_physical(derivative(n, a)).values().real().square();
    return s;
}

// max over interior nodes of ||D_t density - ∂_1 flux||_{L^2_{x1}}, relative
// to max ||∂_1 flux||.
double law_residual(const Grid& g, double horizon, int nodes,
                    const std::function<std::pair<Eigen::ArrayXd, Eigen::ArrayXd>(const Snapshot&)>& law,
                    const Field& E0, const Field& n0, const Field& n1)
{
    const double dt = horizon / nodes;
    const double dx = g.spacing();
    std::vector<Eigen::ArrayXd> density(nodes + 1), flux_x(nodes + 1);
    for (int m = 0; m <= nodes; ++m) {
        auto [dens, flux] = law(snapshot(E0, n0, n1, horizon * m / nodes));
        density[m] = detail::transverse_integral(dens, g);
        flux_x[m] = detail::line_derivative(detail::transverse_integral(flux, g), dx);
    }
    double err = 0.0, scale = 0.0;
    for (int m = 1; m < nodes; ++m) {
        Eigen::ArrayXd r = (density[m + 1] - density[m - 1]) / (2.0 * dt) - flux_x[m];
        err = std::max(err, std::sqrt(dx * r.square().sum()));
        scale = std::max(scale, std::sqrt(dx * flux_x[m].square().sum()));
    }
    return scale > 0.0 ? err / scale : err;
}

} // namespace

ResidualReport check_flux_identities(const Field& E0, const Field& n0, const Field& n1, double horizon,
                                     int nodes)
{
    const Grid& g = E0.grid();
    using Pair = std::pair<Eigen::ArrayXd, Eigen::ArrayXd>;
    struct Named {
        const char* name;
        std::function<Pair(const Snapshot&)> law;
    };
    // ∂_t density - ∂_1 flux = 0 after integrating out y.
    const Named laws[] = {
        {"schrodinger_mass",
         [](const Snapshot& s) {
             return Pair{0.5 * s.E.abs2(), (s.E * s.E1.conjugate()).imag()};
         }},
        {"schrodinger_momentum",
         [&](const Snapshot& s) {
             // 2|∂_1 E|^2 - ∂_1^2 |E|^2 / 2 with the second derivative taken spectrally.
             Field m(g, (0.5 * s.E.abs2()).cast<complex>(), Space::physical);
             Eigen::ArrayXd m11 = to_physical(derivative(derivative(m, 0), 0)).values().real();
             return Pair{(s.E * s.E1.conjugate()).imag(), 2.0 * s.E1.abs2() - m11};
         }},
        {"wave_energy",
         [](const Snapshot& s) {
             return Pair{0.5 * (s.nt.square() + s.n1.square() + s.grad_y), s.nt * s.n1};
         }},
        {"wave_momentum",
         [](const Snapshot& s) {
             return Pair{s.nt * s.n1, 0.5 * (s.nt.square() + s.n1.square() - s.grad_y)};
         }},
    };

    ResidualReport report;
    for (const auto& l : laws) {
        report.identity.push_back(l.name);
        report.coarse.push_back(law_residual(g, horizon, nodes, l.law, E0, n0, n1));
        report.fine.push_back(law_residual(g, horizon, 2 * nodes, l.law, E0, n0, n1));
        double c = report.coarse.back(), f = report.fine.back();
        report.order.push_back(c > 0.0 && f > 0.0 ? std::log2(c / f) : 0.0);
    }
    auto literal = [](const Snapshot& s) {
        return Pair{s.nt * s.n1, 0.5 * (s.nt.square() + s.n1.square() - 2.0 * s.grad_y)};
    };
    report.literal_coarse = law_residual(g, horizon, nodes, literal, E0, n0, n1);
    report.literal_fine = law_residual(g, horizon, 2 * nodes, literal, E0, n0, n1);
    return report;
}

} // namespace zlab
