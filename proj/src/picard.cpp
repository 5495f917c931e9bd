#include "zlab/picard.hpp"

#include "zlab/multiplier.hpp"
#include "zlab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace zlab {

namespace {

double mass_deviation(const Trajectory& E, double mass0)
{
    if (mass0 == 0.0)
        return 0.0;
    double worst = 0.0;
    for (const auto& s : E.snapshots)
        worst = std::max(worst, std::abs(s.l2_norm() / mass0 - 1.0));
    return worst;
}

Trajectory real_trajectory(const Trajectory& v)
{
    return map_trajectory(v, [](const Field& f) { return real_part(to_physical(f)); });
}

Trajectory source_trajectory(const SourceTerm& src, double horizon, Equation kind)
{
    return make_trajectory(src.samples, horizon, kind);
}

double trajectory_l2(const Trajectory& t)
{
    double sum = 0.0;
    for (const auto& s : t.snapshots) {
        double n = s.l2_norm();
        sum += n * n;
    }
    return std::sqrt(sum);
}

SourceTerm difference(const SourceTerm& a, const SourceTerm& b)
{
    SourceTerm out{{}, a.label + " - " + b.label};
    for (std::size_t m = 0; m < a.samples.size(); ++m)
        out.samples.push_back(a.samples[m] - b.samples[m]);
    return out;
}

double sup_sobolev(const Trajectory& t, double s)
{
    double worst = 0.0;
    for (const auto& f : t.snapshots)
        worst = std::max(worst, sobolev_norm(f, s));
    return worst;
}

struct Norms {
    double x = 0.0, s2 = 0.0, n1 = 0.0;
};

bool finite(const Norms& n)
{
    return std::isfinite(n.x) && std::isfinite(n.s2) && std::isfinite(n.n1);
}

} // namespace

Field reduce(const Field& n0, const Field& n1)
{
    if (imaginary_residue(n0) > 1e-12 || imaginary_residue(n1) > 1e-12)
        throw std::invalid_argument("n0 and n1 must be real-valued");
    return n0 + complex(0.0, 1.0) * lambda_power(n1, -1.0);
}

std::pair<Field, Field> reconstruct(const Field& v)
{
    Field p = to_physical(v);
    return {real_part(p), to_physical(lambda_power(imag_part(p), 1.0))};
}

ZakharovData make_zakharov_data(const Field& E0, const Field& n0, const Field& n1)
{
    require_same_grid(E0, n0);
    require_same_grid(E0, n1);
    Field v0 = to_physical(reduce(n0, n1));
    return ZakharovData{to_physical(E0), to_physical(n0), to_physical(n1), std::move(v0)};
}

void IterationConfig::validate(const Grid& grid) const
{
    if (iterate_count < 4)
        throw std::invalid_argument("iterate count K must be at least 4");
    if (time_nodes < 16)
        throw std::invalid_argument("time nodes M must be at least 16");
    if (!(family.horizon > 0.0))
        throw std::invalid_argument("iteration horizon T must be positive");
    if (family.dim != grid.dim())
        throw std::invalid_argument("norm family dimension does not match the grid");
    if (!(divergence_factor > 1.0))
        throw std::invalid_argument("divergence factor must exceed 1");
}

std::pair<SourceTerm, SourceTerm> nonlinear_sources(const Trajectory& E, const Trajectory& v)
{
    if (E.nodes() != v.nodes())
        throw std::invalid_argument("trajectory node mismatch");
    require_same_grid(E.snapshots.front(), v.snapshots.front());
    const int count = E.nodes() + 1;
    SourceTerm F{std::vector<Field>(count, Field::zeros(E.grid)), "(Re v) E"};
    SourceTerm G{std::vector<Field>(count, Field::zeros(E.grid)), "Λ|E|^2"};
    parallel_for(count, [&](int m) {
        Field e = to_physical(dealias(E.snapshots[m]));
        Field n = real_part(to_physical(dealias(v.snapshots[m])));
        F.samples[m] = dealias(multiply(n, e));
        G.samples[m] = lambda_power(dealias(abs_squared(e)), 1.0);
    });
    return {std::move(F), std::move(G)};
}

IteratePair picard_step(const Trajectory& E_prev, const Trajectory& v_prev, const ZakharovData& data)
{
    if (E_prev.horizon != v_prev.horizon)
        throw std::invalid_argument("trajectory horizon mismatch");
    auto [F, G] = nonlinear_sources(E_prev, v_prev);
    const int m = E_prev.nodes();
    return {duhamel(Equation::schrodinger, data.E0, F, E_prev.horizon, m),
            duhamel(Equation::half_wave, data.v0, G, E_prev.horizon, m)};
}

IterationReport run_iteration(const ZakharovData& data, const IterationConfig& config)
{
    const Grid& grid = data.E0.grid();
    config.validate(grid);
    const auto& fam = config.family;
    const double T = fam.horizon;
    const int M = config.time_nodes;
    const double mass0 = data.E0.l2_norm();
    auto X = [&](const Trajectory& t) {
        return config.full_norms ? x_norm(t, fam) : sup_sobolev(t, fam.s);
    };

    IterationReport report;
    report.horizon = T;
    report.regime_tag = fam.regime_tag();

    IteratePair cur{free_trajectory(Equation::schrodinger, data.E0, T, M),
                    free_trajectory(Equation::half_wave, data.v0, T, M)};
    auto sources = nonlinear_sources(cur.E, cur.v);
    Trajectory product = source_trajectory(sources.first, T, Equation::schrodinger);

    Norms base{X(cur.E), s2_norm(real_trajectory(cur.v), fam), n1_norm(product, fam)};
    report.iterates.push_back({0, base.x, base.s2, base.n1, 0.0, 0.0, 0.0, mass_deviation(cur.E, mass0)});
    if (config.store_iterates)
        report.stored.push_back(cur);

    for (int k = 1; k <= config.iterate_count; ++k) {
        IteratePair next{duhamel(Equation::schrodinger, data.E0, sources.first, T, M),
                         duhamel(Equation::half_wave, data.v0, sources.second, T, M)};
        auto next_sources = nonlinear_sources(next.E, next.v);
        Trajectory next_product = source_trajectory(next_sources.first, T, Equation::schrodinger);

        IterateRecord rec;
        rec.k = k;
        rec.x_norm_E = X(next.E);
        rec.s2_norm_v = s2_norm(real_trajectory(next.v), fam);
        rec.n1_norm_product = n1_norm(next_product, fam);
        rec.x_norm_dE = X(next.E - cur.E);
        rec.s2_norm_dv = s2_norm(real_trajectory(next.v - cur.v), fam);
        rec.R = n1_norm(next_product - product, fam);
        rec.mass_deviation = mass_deviation(next.E, mass0);

        // A zero base stays zero in exact arithmetic, so only growth from a
        // nonzero base counts.
        auto grew = [&](double now, double base0) {
            return base0 > 0.0 && now > config.divergence_factor * base0;
        };
        Norms now{rec.x_norm_E, rec.s2_norm_v, rec.n1_norm_product};
        bool blown = !finite(now) || !std::isfinite(rec.R) || grew(now.x, base.x) ||
                     grew(now.s2, base.s2) || grew(now.n1, base.n1);
        if (blown) {
            report.status = "diverged at " + std::to_string(k);
            report.diverged_at = k;
            break;
        }
        report.iterates.push_back(rec);
        cur = std::move(next);
        sources = std::move(next_sources);
        product = std::move(next_product);
        if (config.store_iterates)
            report.stored.push_back(cur);
    }

    const auto& it = report.iterates;
    for (std::size_t k = 1; k + 1 < it.size(); ++k)
        report.contraction_ratios.push_back(it[k].R > 0.0 ? it[k + 1].R / it[k].R : 0.0);
    for (std::size_t k = 3; k < it.size(); ++k) {
        double denom = std::pow(T, 0.25) * it[k - 1].R + std::sqrt(T) * it[k - 2].R;
        if (denom > 0.0)
            report.recursion_constant = std::max(report.recursion_constant, it[k].R / denom);
    }
    report.final_iterate = std::move(cur);
    return report;
}

HorizonSearch tune_horizon(const ZakharovData& data, IterationConfig config, double T0,
                           int max_halvings, double target)
{
    if (!(T0 > 0.0))
        throw std::invalid_argument("initial horizon must be positive");
    HorizonSearch search;
    IterationConfig trial = config;
    trial.iterate_count = 4;
    trial.full_norms = false;
    trial.store_iterates = false;
    for (int j = 0; j <= max_halvings; ++j) {
        trial.family.horizon = std::ldexp(T0, -j);
        IterationReport report = run_iteration(data, trial);
        double ratio = report.diverged() ? infinity : report.ratio(3);
        search.trials.emplace_back(trial.family.horizon, ratio);
        search.horizon = trial.family.horizon;
        if (ratio <= target) {
            search.satisfied = true;
            break;
        }
    }
    config.family.horizon = search.horizon;
    search.report = run_iteration(data, config);
    return search;
}

double lipschitz_probe(const ZakharovData& data, const ZakharovData& perturbation,
                       const IterationConfig& config)
{
    const double s = config.family.s, l = config.family.l;
    const double size = sobolev_norm(data.E0, s) + sobolev_norm(data.v0, l);
    const double delta = sobolev_norm(perturbation.E0, s) + sobolev_norm(perturbation.v0, l);
    if (delta > 0.1 * size * (1.0 + 1e-12))
        throw std::invalid_argument("perturbation exceeds 0.1 times the data norm");
    if (delta == 0.0)
        return 0.0;

    ZakharovData moved = make_zakharov_data(data.E0 + perturbation.E0, data.n0 + perturbation.n0,
                                            data.n1 + perturbation.n1);
    IterationConfig quiet = config;
    quiet.store_iterates = false;
    quiet.full_norms = false;
    IterationReport a = run_iteration(data, quiet);
    if (a.diverged())
        throw DivergenceError(a.diverged_at, "reference run " + a.status);
    IterationReport b = run_iteration(moved, quiet);
    if (b.diverged())
        throw DivergenceError(b.diverged_at, "perturbed run " + b.status);

    const auto& fam = config.family;
    double dE = x_norm(a.final_iterate->E - b.final_iterate->E, fam);
    double dv = s2_norm(real_trajectory(a.final_iterate->v - b.final_iterate->v), fam);
    return (dE + dv) / delta;
}

double DifferenceResiduals::worst() const
{
    double w = 0.0;
    for (double r : E)
        w = std::max(w, r);
    for (double r : v)
        w = std::max(w, r);
    return w;
}

DifferenceResiduals difference_system_check(const IterationReport& report)
{
    if (report.stored.size() < 2)
        throw std::invalid_argument("difference check needs stored iterates");
    const auto& st = report.stored;
    const Grid& grid = st.front().E.grid;
    const double T = report.horizon;
    const int M = st.front().E.nodes();
    const Field zero = Field::zeros(grid);

    // Late differences sit at roundoff, so the residual is measured against
    // the size of the iterate rather than of the difference.
    auto relative = [](const Trajectory& got, const Trajectory& want, const Trajectory& iterate) {
        double scale = trajectory_l2(iterate);
        double err = trajectory_l2(got - want);
        return scale > 0.0 ? err / scale : err;
    };

    DifferenceResiduals out;
    SourceTerm zeroF{std::vector<Field>(M + 1, zero), "0"};
    std::pair<SourceTerm, SourceTerm> older{zeroF, zeroF};
    for (std::size_t k = 1; k < st.size(); ++k) {
        auto prev = nonlinear_sources(st[k - 1].E, st[k - 1].v);
        Trajectory dE = duhamel(Equation::schrodinger, zero, difference(prev.first, older.first), T, M);
        Trajectory dv = duhamel(Equation::half_wave, zero, difference(prev.second, older.second), T, M);
        out.E.push_back(relative(dE, st[k].E - st[k - 1].E, st[k].E));
        out.v.push_back(relative(dv, st[k].v - st[k - 1].v, st[k].v));
        older = std::move(prev);
    }
    return out;
}

} // namespace zlab
