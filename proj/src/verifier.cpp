#include "zlab/verifier.hpp"

#include "transverse.hpp"
#include "zlab/angular.hpp"
#include "zlab/fft.hpp"
#include "zlab/littlewood_paley.hpp"
#include "zlab/multiplier.hpp"
#include "zlab/parallel.hpp"

#include <algorithm>
#include <numbers>
#include <cmath>
#include <set>
#include <stdexcept>

namespace zlab {

LineFit fit_scaling_exponent(std::span<const std::pair<double, double>> points)
{
    Eigen::ArrayXd x(points.size()), y(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        x[i] = points[i].first;
        y[i] = points[i].second;
    }
    return fit_scaling_exponent(x, y);
}

void RatioReport::add(double scale, double l, double r, double normalized)
{
    const double q = (l == 0.0 && r == 0.0) ? 0.0 : l / r;
    sample_scale.push_back(scale);
    lhs.push_back(l);
    rhs.push_back(r);
    ratio.push_back(q);
    auto it = std::find(scales.begin(), scales.end(), scale);
    if (it == scales.end()) {
        scales.push_back(scale);
        max_ratio.push_back(q);
        max_normalized.push_back(normalized);
    } else {
        auto k = it - scales.begin();
        max_ratio[k] = std::max(max_ratio[k], q);
        max_normalized[k] = std::max(max_normalized[k], normalized);
    }
}

void RatioReport::finish(bool fit_normalized)
{
    if (!ratio.empty()) {
        overall_max = *std::max_element(ratio.begin(), ratio.end());
        overall_min = *std::min_element(ratio.begin(), ratio.end());
        double sum = 0.0;
        for (double q : ratio)
            sum += q;
        overall_mean = sum / ratio.size();
    }
    const auto& ys = fit_normalized ? max_normalized : max_ratio;
    std::vector<std::pair<double, double>> pts;
    for (std::size_t k = 0; k < scales.size(); ++k)
        if (scales[k] > 0.0 && ys[k] > 0.0)
            pts.emplace_back(std::log(scales[k]), std::log(ys[k]));
    if (pts.size() >= 3)
        fit = fit_scaling_exponent(pts);
}

// ---- dispersive decay ----

std::vector<double> decay_offsets(const Grid& grid)
{
    const double h = grid.spacing();
    std::set<long> idx{0};
    for (int j = 0;; ++j) {
        double x = std::exp2(0.5 * j);
        if (x > grid.extent() / 4)
            break;
        idx.insert(std::lround(x / h));
    }
    std::vector<double> out;
    for (long i : idx)
        out.push_back(i * h);
    return out;
}

DecayFit check_dispersive_decay(double lambda, std::span<const double> t_samples,
                                std::span<const double> x1_samples, const Grid& grid)
{
    const int d = grid.dim();
    const int n = grid.points();
    const double h = grid.spacing();
    DecayFit fit;
    std::vector<std::pair<double, double>> pts;
    for (double t : t_samples) {
        Field kernel = dispersive_kernel(lambda, t, grid);
        // Sup over y on a 2x refined transverse lattice.
        std::vector<int> factor(d, 2);
        factor[0] = 1;
        auto fine = fft::refine(kernel, factor);
        const Eigen::Index inner = fine.values.size() / n;
        for (double x1 : x1_samples) {
            long i = std::lround(x1 / h);
            int row = static_cast<int>(((i % n) + n) % n);
            double v = fine.values.segment(row * inner, inner).abs().maxCoeff();
            double base = 1.0 / lambda + std::sqrt(t) + std::abs(x1);
            fit.t.push_back(t);
            fit.x1.push_back(x1);
            fit.value.push_back(v);
            fit.envelope = std::max(fit.envelope, v * std::pow(base, d));
            pts.emplace_back(std::log(base), std::log(v));
        }
    }
    if (pts.size() >= 3) {
        LineFit f = fit_scaling_exponent(pts);
        fit.exponent = f.slope;
        fit.residual = f.residual;
    }
    return fit;
}

// ---- refined Strichartz ----

namespace {

std::uint64_t band_seed(std::uint64_t seed, double lambda, int stream)
{
    return seed * 1000003ULL + static_cast<std::uint64_t>(std::lround(std::log2(lambda) * 16)) * 97ULL +
           static_cast<std::uint64_t>(stream);
}

} // namespace

RatioReport check_refined_strichartz(const Grid& grid, const StrichartzCase& c, const EnsembleSpec& ensemble)
{
    const int d = grid.dim();
    if (d < 2)
        throw std::invalid_argument("refined Strichartz needs d >= 2");
    const DyadicLadder ladder = DyadicLadder::for_grid(grid);
    RatioReport report;
    report.name = c.inhomogeneous ? "strichartz_inhomogeneous" : "strichartz";
    const double q_lhs = d == 2 ? 4.0 : 2.0;
    const double q_rhs = d == 2 ? 4.0 / 3.0 : 2.0;
    const NormSpec lhs_norm = axis_norm(q_lhs, 2.0, infinity, 0, d, c.sup_accurate);
    const NormSpec rhs_norm = axis_norm(q_rhs, 2.0, 1.0, 0, d);

    for (double lambda : c.bands) {
        ladder.require_band(lambda, 2.0);
        EnsembleSpec e = band_ensemble(lambda, ensemble.sample_count, band_seed(ensemble.seed, lambda, 0));
        e.window = ensemble.window;
        e.window_axis = ensemble.window_axis;
        EnsembleSpec src = e;
        src.seed = band_seed(ensemble.seed, lambda, 1);
        const Eigen::ArrayXd P = band_symbol(grid, lambda);
        const double growth = d == 3 ? std::pow(c.horizon * lambda * lambda, c.eps) : 1.0;

        std::vector<double> lhs(e.sample_count), rhs(e.sample_count);
        parallel_for(e.sample_count, [&](int i) {
            Field E0 = apply_symbol(ensemble_sample(e, grid, i), P);
            double data = E0.l2_norm();
            double source = 0.0;
            Trajectory traj = free_trajectory(Equation::schrodinger, E0, c.horizon, c.nodes);
            if (c.inhomogeneous) {
                Field G0 = apply_symbol(ensemble_sample(src, grid, i), P);
                Trajectory F = free_trajectory(Equation::schrodinger, G0, c.horizon, c.nodes);
                traj = duhamel(Equation::schrodinger, E0, source_from(F, "e^{itΔ}G0"), c.horizon, c.nodes);
                source = mixed_norm(F, rhs_norm);
            }
            lhs[i] = mixed_norm(traj, lhs_norm);
            rhs[i] = growth * (data + growth * source);
        });
        for (int i = 0; i < e.sample_count; ++i) {
            double q = rhs[i] > 0.0 ? lhs[i] / rhs[i] : 0.0;
            report.add(lambda, lhs[i], rhs[i], q);
        }
    }
    report.finish(false);
    return report;
}

// ---- Bernstein ----

double bernstein_ratio(const Field& u, double lambda)
{
    const Grid& g = u.grid();
    Field p = to_physical(apply_symbol(u, band_symbol(g, lambda)));
    const double mass = p.l2_norm();
    // A projection at transform roundoff counts as zero.
    if (mass <= 1e-12 * u.l2_norm())
        return 0.0;
    auto fine = fft::refine(p, std::vector<int>(g.dim(), 2));
    return fine.values.abs().maxCoeff() / (std::pow(lambda, 0.5 * g.dim()) * mass);
}

RatioReport check_bernstein(const Grid& grid, std::span<const double> bands, const EnsembleSpec& ensemble)
{
    const int d = grid.dim();
    const DyadicLadder ladder = DyadicLadder::for_grid(grid);
    RatioReport report;
    report.name = "bernstein";
    for (double lambda : bands) {
        ladder.require_band(lambda, 2.0);
        EnsembleSpec e = band_ensemble(lambda, ensemble.sample_count, band_seed(ensemble.seed, lambda, 0));
        if (ensemble.window > 0.0) {
            e.window = ensemble.window / lambda;
            e.window_axis = -1;
        }
        std::vector<double> ratio(e.sample_count);
        parallel_for(e.sample_count, [&](int i) { ratio[i] = bernstein_ratio(ensemble_sample(e, grid, i), lambda); });
        const double scale = std::pow(lambda, 0.5 * d);
        for (double q : ratio)
            if (q > 0.0)
                report.add(lambda, q * scale, scale, q);
    }
    report.finish(false);
    return report;
}

// ---- div-curl ----

DivCurlValue divcurl_ratio(const DivCurlRows& rows, double tolerance)
{
    const int M = rows.nodes();
    for (const auto* v : {&rows.f12, &rows.G1, &rows.f21, &rows.f22, &rows.G2})
        if (static_cast<int>(v->size()) != M + 1)
            throw std::invalid_argument("div-curl rows need matching node counts");
    if (M < 2)
        throw std::invalid_argument("div-curl rows need at least 3 nodes");
    const double dt = rows.horizon / M;
    const auto w = detail::trapezoid_weights(M, rows.horizon);

    auto l1 = [&](const Eigen::ArrayXd& a) { return rows.dx * a.abs().sum(); };

    // Relative L^1_{t,x} residual of ∂_t f + sign ∂_x g - G.
    auto residual = [&](const std::vector<Eigen::ArrayXd>& f, const std::vector<Eigen::ArrayXd>& g,
                        const std::vector<Eigen::ArrayXd>& G, const std::vector<Eigen::ArrayXd>& dtf,
                        const std::vector<Eigen::ArrayXd>& dxg, double sign) {
        double err = 0.0, scale = 0.0;
        const bool exact = !dtf.empty();
        for (int m = exact ? 0 : 1; m <= (exact ? M : M - 1); ++m) {
            Eigen::ArrayXd ft = exact ? dtf[m] : Eigen::ArrayXd((f[m + 1] - f[m - 1]) / (2.0 * dt));
            Eigen::ArrayXd gx = dxg.empty() ? detail::line_derivative(g[m], rows.dx) : dxg[m];
            err += l1(ft + sign * gx - G[m]);
            scale += l1(ft) + l1(gx) + l1(G[m]);
        }
        return scale > 0.0 ? err / scale : 0.0;
    };

    DivCurlValue out;
    out.structure_residual = std::max(residual(rows.f11, rows.f12, rows.G1, rows.dt_f11, rows.dx_f12, 1.0),
                                      residual(rows.f21, rows.f22, rows.G2, rows.dt_f21, rows.dx_f22, -1.0));
    if (out.structure_residual > tolerance)
        throw std::invalid_argument("inputs do not satisfy div-curl structure");

    double integral = 0.0;
    for (int m = 0; m <= M; ++m)
        integral += w[m] * rows.dx * (rows.f11[m] * rows.f22[m] + rows.f12[m] * rows.f21[m]).sum();
    out.lhs = std::abs(integral);

    auto row_norm = [&](const std::vector<Eigen::ArrayXd>& f, const std::vector<Eigen::ArrayXd>& G) {
        double sup = 0.0, source = 0.0;
        for (int m = 0; m <= M; ++m) {
            sup = std::max(sup, l1(f[m]));
            source += w[m] * l1(G[m]);
        }
        return l1(f[0]) + sup + source;
    };
    out.rhs = row_norm(rows.f11, rows.G1) * row_norm(rows.f21, rows.G2);
    return out;
}

DivCurlRows divcurl_rows(const Field& n0, const Field& n1, const Field& E0, double horizon, int nodes)
{
    const Grid& g = E0.grid();
    require_same_grid(n0, E0);
    require_same_grid(n1, E0);
    const int d = g.dim();
    DivCurlRows rows;
    rows.horizon = horizon;
    rows.dx = g.spacing();
    for (auto* v : {&rows.f11, &rows.f12, &rows.G1, &rows.f21, &rows.f22, &rows.G2, &rows.dt_f11, &rows.dt_f21,
                    &rows.dx_f12, &rows.dx_f22})
        v->assign(nodes + 1, Eigen::ArrayXd::Zero(g.points()));

    const Field E0f = to_fourier(E0);
    const Eigen::ArrayXcd k2 = g.frequency_norm_squared().cast<complex>();
    parallel_for(nodes + 1, [&](int m) {
        const double t = horizon * m / nodes;
        auto [n, dtn] = wave_flow(n0, n1, t);
        Field Ef = schrodinger_flow(E0f, t);
        auto real = [](const Field& f) { return Eigen::ArrayXd(to_physical(f).values().real()); };
        Field n_1 = derivative(n, 0), E_1 = derivative(Ef, 0);
        Eigen::ArrayXd nt = real(dtn);
        Eigen::ArrayXd ntt = real(Field(g, -k2 * n.values(), Space::fourier)); // Δn
        Eigen::ArrayXd grad2 = Eigen::ArrayXd::Zero(g.size());
        Eigen::ArrayXd grad_dot = Eigen::ArrayXd::Zero(g.size());
        Eigen::ArrayXd n1x, nt1;
        for (int a = 0; a < d; ++a) {
            Eigen::ArrayXd na = a == 0 ? real(n_1) : real(derivative(n, a));
            Eigen::ArrayXd nta = real(derivative(dtn, a));
            grad2 += na.square();
            grad_dot += na * nta;
            if (a == 0) {
                n1x = na;
                nt1 = nta;
            }
        }
        // The densities carry twice the band of the fields, so their x1
        // derivatives are taken pointwise rather than from the sampled line.
        Eigen::ArrayXd n11 = real(derivative(n_1, 0));
        const Eigen::ArrayXcd e = to_physical(Ef).values();
        const Eigen::ArrayXcd e1 = to_physical(E_1).values();
        const Eigen::ArrayXcd e11 = to_physical(derivative(E_1, 0)).values();
        const Eigen::ArrayXcd dte = to_physical(Field(g, complex(0.0, -1.0) * k2 * Ef.values(), Space::fourier)).values(); // i ΔE
        rows.f11[m] = detail::transverse_integral(0.5 * (nt.square() + grad2), g);
        rows.dt_f11[m] = detail::transverse_integral(nt * ntt + grad_dot, g);
        rows.f12[m] = -detail::transverse_integral(nt * n1x, g);
        rows.dx_f12[m] = -detail::transverse_integral(nt1 * n1x + nt * n11, g);
        rows.f21[m] = detail::transverse_integral(0.5 * e.abs2(), g);
        rows.dt_f21[m] = detail::transverse_integral((e.conjugate() * dte).real(), g);
        rows.f22[m] = detail::transverse_integral((e * e1.conjugate()).imag(), g);
        rows.dx_f22[m] = detail::transverse_integral((e * e11.conjugate()).imag(), g);
    });
    return rows;
}

RatioReport check_divcurl(const DivCurlCase& c, const EnsembleSpec& ensemble)
{
    RatioReport report;
    report.name = "divcurl";
    const double lambda = c.wave_band;
    for (double mu : c.schrodinger_bands) {
        int N = next_power_of_two(static_cast<int>(std::ceil(2.25 * mu * c.length / std::numbers::pi * 1.05)));
        Grid g = make_grid(2, c.length, std::max(N, 16));
        const double T = c.length / (18.0 * mu);

        EnsembleSpec en = band_ensemble(lambda, ensemble.sample_count, band_seed(ensemble.seed, mu, 0));
        en.real = true;
        en.window = c.window;
        EnsembleSpec en1 = en;
        en1.seed = band_seed(ensemble.seed, mu, 1);
        EnsembleSpec eE = band_ensemble(mu, ensemble.sample_count, band_seed(ensemble.seed, mu, 2));
        eE.cone_axis = 0;
        eE.kappa = ensemble.kappa;
        eE.window = c.window;
        const Eigen::ArrayXd Pn = band_symbol(g, lambda);
        const Eigen::ArrayXd PE =
            band_symbol(g, mu) * patch_symbols(g, make_angular_partition(2, ensemble.kappa))[0];

        std::vector<DivCurlValue> values(ensemble.sample_count);
        parallel_for(ensemble.sample_count, [&](int i) {
            Field n0 = to_physical(apply_symbol(ensemble_sample(en, g, i), Pn));
            Field n1 = to_physical(apply_symbol(lambda * ensemble_sample(en1, g, i), Pn));
            Field E0 = apply_symbol(ensemble_sample(eE, g, i), PE);
            values[i] = divcurl_ratio(divcurl_rows(real_part(n0), real_part(n1), E0, T, c.nodes));
        });
        for (const auto& v : values)
            report.add(mu, v.lhs, v.rhs, v.rhs > 0.0 ? v.lhs / v.rhs : 0.0);
    }
    report.finish(false);
    return report;
}

} // namespace zlab
