#include "zlab/verifier.hpp"

#include "transverse.hpp"
#include "zlab/angular.hpp"
#include "zlab/littlewood_paley.hpp"
#include "zlab/multiplier.hpp"
#include "zlab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace zlab {

namespace {

// Projections of one bilinear case on a grid.
struct Symbols {
    Eigen::ArrayXd n;     // on n and ∂_t n
    Eigen::ArrayXd E;     // on E in the n rows
    Eigen::ArrayXd v_low; // on v in the product row
    Eigen::ArrayXd E_low; // on E in the product row
};

Eigen::ArrayXd cone_band(const Grid& g, double band)
{
    return band_symbol(g, band) * patch_symbols(g, make_angular_partition(g.dim(), 2.0))[0];
}

Symbols symbols(BilinearCase kind, const Grid& g, double lambda, double mu)
{
    Symbols s;
    if (kind == BilinearCase::high_low) {
        s.n = band_symbol(g, lambda);
        s.E = cone_band(g, mu);
        s.v_low = low_symbol(g, lambda);
        s.E_low = s.E;
    } else {
        s.n = cone_band(g, lambda);
        s.E = band_symbol(g, mu);
        s.v_low = s.n;
        s.E_low = low_symbol(g, mu);
    }
    return s;
}

void require_separation(BilinearCase kind, double lambda, double mu)
{
    if (kind == BilinearCase::high_low && mu < 8.0 * lambda)
        throw std::invalid_argument("high_low needs mu >= 8 lambda");
    if (kind == BilinearCase::low_high && lambda < 8.0 * mu)
        throw std::invalid_argument("low_high needs lambda >= 8 mu");
}

// Lattice indices where any of the given symbols is nonzero.
std::vector<Eigen::Index> support(std::initializer_list<const Eigen::ArrayXd*> symbols)
{
    std::vector<Eigen::Index> idx;
    const Eigen::Index size = (*symbols.begin())->size();
    for (Eigen::Index j = 0; j < size; ++j)
        for (const auto* s : symbols)
            if ((*s)[j] != 0.0) {
                idx.push_back(j);
                break;
            }
    return idx;
}

// Free evolution of one band pair restricted to the symbols' supports, so the
// per-node cost is one inverse FFT per projected quantity.
class PairEvolution {
public:
    PairEvolution(BilinearCase kind, const Grid& g, double lambda, double mu)
        : kind_(kind), g_(g), S_(symbols(kind, g, lambda, mu)), wave_(support({&S_.n, &S_.v_low})),
          schr_(support({&S_.E, &S_.E_low}))
    {
    }

    const Symbols& projections() const { return S_; }

    BilinearSample sample(double lambda, const Field& E0, const Field& v0, double horizon, int nodes) const
    {
        require_same_grid(E0, v0);
        const Field E0f = to_fourier(E0), v0f = to_fourier(v0);
        auto [n0, n1] = reconstruct(v0);
        const Field n0f = to_fourier(n0), n1f = to_fourier(n1);

        BilinearSample out;
        out.E_data = apply_symbol(E0f, S_.E).l2_norm();
        out.E_product_data = apply_symbol(E0f, S_.E_low).l2_norm();
        out.v_data = apply_symbol(v0f, S_.v_low).l2_norm();
        out.n_data = apply_symbol(n0f, S_.n).l2_norm() + apply_symbol(n1f, S_.n).l2_norm() / lambda;

        const auto& r = g_.frequency_norm();
        const auto& r2 = g_.frequency_norm_squared();
        const double dx = g_.spacing();
        const auto w = detail::trapezoid_weights(nodes, horizon);
        const bool hl = kind_ == BilinearCase::high_low;
        double n_sum = 0.0, dtn_sum = 0.0, prod_sum = 0.0;

        // n and ∂_t n are real, so they share one transform as n + i ∂_t n.
        Eigen::ArrayXcd Pn, PE, Plow;
        for (int m = 0; m <= nodes; ++m) {
            const double t = horizon * m / nodes;
            clear(Pn), clear(PE), clear(Plow);
            for (Eigen::Index j : wave_) {
                const double c = std::cos(t * r[j]), s = std::sin(t * r[j]);
                const complex a = n0f.values()[j], b = n1f.values()[j];
                const complex n = c * a + (r[j] > 0.0 ? s / r[j] : t) * b;
                const complex nt = -r[j] * s * a + c * b;
                Pn[j] = S_.n[j] * (n + complex(0.0, 1.0) * nt);
                if (hl)
                    Plow[j] = S_.v_low[j] * v0f.values()[j] * complex(c, -s);
            }
            for (Eigen::Index j : schr_) {
                const complex e = E0f.values()[j] * std::polar(1.0, -t * r2[j]);
                PE[j] = S_.E[j] * e;
                if (!hl)
                    Plow[j] = S_.E_low[j] * e;
            }
            const Eigen::ArrayXcd n = physical(Pn), E = physical(PE), low = physical(Plow);
            const Eigen::ArrayXd e_row = detail::transverse_integral(E.abs2(), g_);
            const Eigen::ArrayXd n_row = detail::transverse_integral(n.real().square(), g_);
            const Eigen::ArrayXd dtn_row = detail::transverse_integral(n.imag().square(), g_);
            Eigen::ArrayXd prod;
            if (hl) {
                prod = (low * E).abs();
            } else {
                // P_{lambda,e1} v = P n + i Λ^{-1} P ∂_t n needs its own transform.
                Eigen::ArrayXcd Pv = Eigen::ArrayXcd::Zero(g_.size());
                for (Eigen::Index j : wave_)
                    Pv[j] = S_.n[j] * v0f.values()[j] * std::polar(1.0, -t * r[j]);
                prod = (physical(Pv) * low).abs();
            }
            const Eigen::ArrayXd prod_row = detail::transverse_integral(prod, g_);
            n_sum += w[m] * dx * (n_row * e_row).sum();
            dtn_sum += w[m] * dx * (dtn_row * e_row).sum();
            prod_sum += w[m] * dx * prod_row.square().sum();
        }
        out.n_lhs = std::sqrt(n_sum);
        out.dtn_lhs = std::sqrt(dtn_sum);
        out.product_lhs = std::sqrt(prod_sum);
        return out;
    }

private:
    void clear(Eigen::ArrayXcd& a) const { a = Eigen::ArrayXcd::Zero(g_.size()); }
    Eigen::ArrayXcd physical(Eigen::ArrayXcd& fourier) const
    {
        return to_physical(Field(g_, std::move(fourier), Space::fourier)).values();
    }

    BilinearCase kind_;
    Grid g_;
    Symbols S_;
    std::vector<Eigen::Index> wave_, schr_;
};

// L^2_t L^2_{x1} of a per-node x1 profile, trapezoid in t.
double spacetime_l2(const std::vector<Eigen::ArrayXd>& rows, double dx, const std::vector<double>& w)
{
    double sum = 0.0;
    for (std::size_t m = 0; m < rows.size(); ++m)
        sum += w[m] * dx * rows[m].square().sum();
    return std::sqrt(sum);
}

// L^1_{t,x} of a per-node scalar field |f|, trapezoid in t.
double spacetime_l1(const std::vector<double>& per_node, const std::vector<double>& w)
{
    double sum = 0.0;
    for (std::size_t m = 0; m < per_node.size(); ++m)
        sum += w[m] * per_node[m];
    return sum;
}

int grid_points(double band, double length)
{
    int n = next_power_of_two(static_cast<int>(std::ceil(2.25 * band * length / std::numbers::pi * 1.05)));
    return std::max(n, 16);
}

} // namespace

double bilinear_horizon(double length, double schrodinger_band)
{
    return length / (4.0 * std::max(4.5 * schrodinger_band, 1.0));
}

BilinearSample bilinear_sample(BilinearCase kind, double lambda, double mu, const Field& E0, const Field& v0,
                               double horizon, int nodes)
{
    require_separation(kind, lambda, mu);
    return PairEvolution(kind, E0.grid(), lambda, mu).sample(lambda, E0, v0, horizon, nodes);
}

BilinearRows check_bilinear(const BilinearCaseSpec& spec)
{
    BilinearRows rows;
    const bool hl = spec.kind == BilinearCase::high_low;
    const char* tag = hl ? "high_low" : "low_high";
    rows.n_row.name = std::string(tag) + "_n";
    rows.dtn_row.name = std::string(tag) + "_dtn";
    rows.product_row.name = hl ? "high_E_product" : "high_W_product";

    for (std::size_t b = 0; b < spec.varied_bands.size(); ++b) {
        const double lambda = hl ? spec.fixed_band : spec.varied_bands[b];
        const double mu = hl ? spec.varied_bands[b] : spec.fixed_band;
        require_separation(spec.kind, lambda, mu);
        Grid g = make_grid(2, spec.length, grid_points(std::max(lambda, mu), spec.length));
        const double T = bilinear_horizon(spec.length, mu);
        const std::uint64_t base = spec.seed * 1000003ULL + 101ULL * static_cast<std::uint64_t>(b);

        EnsembleSpec en = band_ensemble(lambda, spec.samples, base + 1);
        en.real = true;
        en.window = spec.window;
        if (!hl)
            en.cone_axis = 0;
        EnsembleSpec en1 = en;
        en1.seed = base + 2;
        EnsembleSpec eE = band_ensemble(mu, spec.samples, base + 3);
        eE.window = spec.window;
        if (hl)
            eE.cone_axis = 0;

        const PairEvolution evolution(spec.kind, g, lambda, mu);
        const Eigen::ArrayXd wn = ensemble_weights(en, g), wE = ensemble_weights(eE, g);
        std::vector<BilinearSample> out(spec.samples);
        parallel_for(spec.samples, [&](int i) {
            Field n0 = ensemble_sample(en, g, wn, i);
            Field n1 = lambda * ensemble_sample(en1, g, wn, i);
            ZakharovData d = make_zakharov_data(ensemble_sample(eE, g, wE, i), n0, n1);
            out[i] = evolution.sample(lambda, d.E0, d.v0, T, spec.nodes);
        });

        const double varied = spec.varied_bands[b];
        const double gain = hl ? std::pow(mu, -0.5) : std::pow(lambda, -0.5);
        const double dt_gain = hl ? lambda * std::pow(mu, -0.5) : std::pow(lambda, 0.5);
        for (const auto& s : out) {
            double nd = s.E_data * s.n_data;
            double pd = s.E_product_data * s.v_data;
            rows.n_row.add(varied, s.n_lhs, gain * nd, nd > 0.0 ? s.n_lhs / nd : 0.0);
            rows.dtn_row.add(varied, s.dtn_lhs, dt_gain * nd, nd > 0.0 ? s.dtn_lhs / nd : 0.0);
            rows.product_row.add(varied, s.product_lhs, gain * pd, pd > 0.0 ? s.product_lhs / pd : 0.0);
        }
    }
    rows.n_row.finish();
    rows.dtn_row.finish();
    rows.product_row.finish();
    return rows;
}

InhomogeneousBilinear check_bilinear_inhomogeneous(const IterationReport& run, int k, BilinearCase kind,
                                                   double lambda, double mu)
{
    require_separation(kind, lambda, mu);
    if (k < 0 || k >= static_cast<int>(run.stored.size()))
        throw std::invalid_argument("inhomogeneous bilinear check needs stored iterates and their sources");
    const IteratePair& cur = run.stored[k];
    const Grid& g = cur.E.grid;
    const int nodes = cur.E.nodes();
    const double dx = g.spacing();
    const double cell = g.cell_volume();
    const auto w = detail::trapezoid_weights(nodes, run.horizon);
    const Symbols S = symbols(kind, g, lambda, mu);
    const bool hl = kind == BilinearCase::high_low;

    std::vector<Eigen::ArrayXd> prod_rows(nodes + 1);
    for (int m = 0; m <= nodes; ++m) {
        Field E = to_fourier(cur.E.snapshots[m]), v = to_fourier(cur.v.snapshots[m]);
        Field prod(g, detail::filtered(v, S.v_low) * detail::filtered(E, S.E_low), Space::physical);
        prod_rows[m] = detail::transverse_norm(prod, 1.0);
    }

    InhomogeneousBilinear out;
    out.lhs = spacetime_l2(prod_rows, dx, w);

    const IteratePair& first = run.stored.front();
    const double E_data = apply_symbol(first.E.snapshots[0], S.E_low).l2_norm();
    const double v_data = apply_symbol(first.v.snapshots[0], S.v_low).l2_norm();

    if (k > 0) {
        const IteratePair& prev = run.stored[k - 1];
        auto [F, G] = nonlinear_sources(prev.E, prev.v);
        std::vector<double> e_src(nodes + 1), v_src(nodes + 1);
        for (int m = 0; m <= nodes; ++m) {
            Field Em = to_fourier(prev.E.snapshots[m]);
            e_src[m] = cell * (detail::filtered(to_fourier(F.samples[m]), S.E_low) *
                               detail::filtered(Em, S.E_low)).abs().sum();
            // Δ|E|^2 = -Λ (Λ|E|^2).
            Field lap = -1.0 * lambda_power(G.samples[m], 1.0);
            Field vm = to_fourier(prev.v.snapshots[m]);
            // Im(Λ v) for high-low, ∂_{x1} Re v for low-high.
            Field first_factor = hl ? to_fourier(imag_part(to_physical(lambda_power(vm, 1.0))))
                                    : derivative(real_part(to_physical(vm)), 0);
            v_src[m] = cell * (detail::filtered(to_fourier(first_factor), S.v_low) *
                               detail::filtered(lap, S.v_low)).abs().sum();
        }
        out.E_source = spacetime_l1(e_src, w);
        out.v_source = spacetime_l1(v_src, w);
    }
    const double gain = hl ? std::pow(mu, -0.5) : std::pow(lambda, -0.5);
    out.rhs = gain * (E_data + std::sqrt(out.E_source)) * (v_data + std::sqrt(out.v_source) / lambda);
    out.ratio = out.rhs > 0.0 ? out.lhs / out.rhs : 0.0;
    return out;
}

} // namespace zlab
