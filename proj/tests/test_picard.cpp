#include "doctest.h"
#include "support.hpp"

#include "zlab/multiplier.hpp"
#include "zlab/picard.hpp"

#include <cmath>
#include <numbers>

using namespace zlab;
using zlab::test::max_abs_diff;
using zlab::test::plane_wave;
using zlab::test::random_band_limited;
using zlab::test::relative_error;

constexpr double pi = std::numbers::pi;

namespace {

Field mean_free(const Field& f)
{
    return real_part(to_physical(apply_multiplier(f, [](const auto& xi) {
        return (xi[0] == 0.0 && xi[1] == 0.0 && xi[2] == 0.0) ? complex(0.0) : complex(1.0);
    })));
}

ZakharovData small_data(const Grid& g, double size, std::uint64_t seed)
{
    Field E0 = size * random_band_limited(g, 2.0, seed);
    Field n0 = random_band_limited(g, 2.0, seed + 1, true);
    Field n1 = mean_free(random_band_limited(g, 2.0, seed + 2, true));
    ZakharovData d = make_zakharov_data(E0, n0, n1);
    double scale = size / sobolev_norm(d.v0, -0.5);
    return make_zakharov_data(E0, scale * n0, scale * n1);
}

IterationConfig small_config(const Grid& g, double horizon)
{
    IterationConfig c;
    c.family = make_norm_family(g, 0.0, -0.5, horizon);
    c.iterate_count = 4;
    c.time_nodes = 16;
    return c;
}

Trajectory constant_trajectory(const Field& f, double horizon, int nodes, Equation kind)
{
    return make_trajectory(std::vector<Field>(nodes + 1, f), horizon, kind);
}

} // namespace

TEST_CASE("reduce and reconstruct examples")
{
    Grid g = make_grid(1, 2 * pi, 32);
    Field n0 = Field::sample(g, [](auto& x) { return complex(std::cos(x[0]) + 0.3 * std::sin(3 * x[0])); });
    Field zero = Field::zeros(g);
    CHECK(max_abs_diff(reduce(n0, zero), n0) < 1e-15);

    Field s2 = Field::sample(g, [](auto& x) { return complex(std::sin(2 * x[0])); });
    CHECK(max_abs_diff(reduce(zero, s2), complex(0.0, 0.5) * s2) < 1e-14);

    Grid g2 = make_grid(2, 2 * pi, 32);
    Field a = random_band_limited(g2, 8.0, 1, true);
    Field b = mean_free(random_band_limited(g2, 8.0, 2, true));
    auto [n, dn] = reconstruct(reduce(a, b));
    CHECK(max_abs_diff(n, a) < 1e-12);
    CHECK(max_abs_diff(dn, b) < 1e-12);

    auto [nz, dnz] = reconstruct(zero);
    CHECK(max_abs_diff(nz, zero) == 0.0);
    CHECK(max_abs_diff(dnz, zero) == 0.0);
    auto [ns, dns] = reconstruct(complex(0.0, 0.5) * s2);
    CHECK(max_abs_diff(ns, zero) < 1e-15);
    CHECK(max_abs_diff(dns, s2) < 1e-14);

    Field with_mean = Field::sample(g, [](auto&) { return complex(1.0); });
    CHECK_THROWS_AS(reduce(zero, with_mean), std::domain_error);
    CHECK_THROWS_AS(reduce(plane_wave(g, {1, 0, 0}), zero), std::invalid_argument);
}

TEST_CASE("config invariants")
{
    Grid g = make_grid(2, 2 * pi, 32);
    IterationConfig c = small_config(g, 0.5);
    CHECK_NOTHROW(c.validate(g));
    c.iterate_count = 3;
    CHECK_THROWS_AS(c.validate(g), std::invalid_argument);
    c.iterate_count = 4;
    c.time_nodes = 8;
    CHECK_THROWS_AS(c.validate(g), std::invalid_argument);
    c.time_nodes = 16;
    c.family.horizon = 0.0;
    CHECK_THROWS_AS(c.validate(g), std::invalid_argument);
    c.family.horizon = 1.0;
    CHECK_THROWS_AS(c.validate(make_grid(3, 2 * pi, 16)), std::invalid_argument);
}

TEST_CASE("picard_step with vanishing sources gives the free flows")
{
    Grid g = make_grid(2, 2 * pi, 32);
    ZakharovData d = small_data(g, 0.1, 10);
    const int m = 16;
    Trajectory zeroE = constant_trajectory(Field::zeros(g), 1.0, m, Equation::schrodinger);
    Trajectory zeroV = constant_trajectory(Field::zeros(g), 1.0, m, Equation::half_wave);
    Trajectory anyV = free_trajectory(Equation::half_wave, d.v0, 1.0, m);
    Trajectory freeE = free_trajectory(Equation::schrodinger, d.E0, 1.0, m);
    Trajectory freeV = free_trajectory(Equation::half_wave, d.v0, 1.0, m);
    for (const auto& vprev : {zeroV, anyV}) {
        IteratePair p = picard_step(zeroE, vprev, d);
        for (int k = 0; k <= m; ++k) {
            CHECK(max_abs_diff(p.E.snapshots[k], freeE.snapshots[k]) < 1e-15);
            CHECK(max_abs_diff(p.v.snapshots[k], freeV.snapshots[k]) < 1e-15);
        }
    }
}

TEST_CASE("picard_step on two nodes matches the hand trapezoid")
{
    // E_prev = a e^{ix}, Re v_prev = c: F = c a e^{ix} at both nodes and
    // |E_prev|^2 is constant, so the wave source vanishes. With E0 = 0,
    // E(T) = -i (T/2) (e^{-iT} F + F).
    Grid g = make_grid(1, 2 * pi, 16);
    const complex a(0.3, -0.1);
    const double c = 0.7, T = 0.4;
    Field mode = plane_wave(g, {1, 0, 0});
    Trajectory Eprev = constant_trajectory(a * mode, T, 1, Equation::schrodinger);
    Trajectory vprev = constant_trajectory(Field::sample(g, [&](auto&) { return complex(c); }), T, 1,
                                           Equation::half_wave);
    Field zero = Field::zeros(g);
    ZakharovData d = make_zakharov_data(zero, zero, zero);
    IteratePair p = picard_step(Eprev, vprev, d);
    complex expected = complex(0, -1) * (T / 2) * (std::exp(complex(0, -T)) + 1.0) * c * a;
    CHECK(max_abs_diff(p.E.snapshots[1], expected * mode) < 1e-15);
    CHECK(max_abs_diff(p.E.snapshots[0], zero) == 0.0);
    CHECK(max_abs_diff(p.v.snapshots[1], zero) < 1e-15);
}

TEST_CASE("run_iteration on zero data")
{
    Grid g = make_grid(2, 2 * pi, 32);
    Field zero = Field::zeros(g);
    IterationConfig c = small_config(g, 0.5);
    c.store_iterates = true;
    IterationReport r = run_iteration(make_zakharov_data(zero, zero, zero), c);
    CHECK_FALSE(r.diverged());
    REQUIRE(r.iterates.size() == 5);
    for (const auto& it : r.iterates) {
        CHECK(it.x_norm_E == 0.0);
        CHECK(it.s2_norm_v == 0.0);
        CHECK(it.n1_norm_product == 0.0);
        CHECK(it.R == 0.0);
        CHECK(it.mass_deviation == 0.0);
    }
    for (double q : r.contraction_ratios)
        CHECK(q == 0.0);
    // Equal sources give zero differences and a zero residual.
    CHECK(difference_system_check(r).worst() == 0.0);
}

TEST_CASE("small-data iteration contracts and stays anchored")
{
    Grid g = make_grid(2, 16.0, 32);
    ZakharovData d = small_data(g, 0.1, 20);
    IterationConfig c = small_config(g, 2.0);
    c.iterate_count = 6;
    c.store_iterates = true;
    IterationReport r = run_iteration(d, c);
    REQUIRE_FALSE(r.diverged());
    REQUIRE(r.iterates.size() == 7);
    CHECK(r.regime_tag == "paper-regime");

    for (int k = 3; k < 6; ++k)
        CHECK(r.ratio(k) <= 0.5);
    for (const auto& it : r.iterates) {
        CHECK(std::isfinite(it.x_norm_E));
        CHECK(it.x_norm_E >= 0.0);
        CHECK(it.R >= 0.0);
        CHECK(it.x_norm_E <= 2.0 * r.iterates[0].x_norm_E);
    }
    CHECK(r.iterates.back().mass_deviation <= 1e-6);

    Field E0 = to_fourier(d.E0), v0 = to_fourier(d.v0);
    for (const auto& pair : r.stored) {
        CHECK((pair.E.snapshots[0].values() == E0.values()).all());
        CHECK((pair.v.snapshots[0].values() == v0.values()).all());
        for (const auto& s : pair.v.snapshots) {
            auto [n, dn] = reconstruct(s);
            CHECK(imaginary_residue(n) <= 1e-10);
            CHECK(imaginary_residue(dn) <= 1e-10);
        }
    }
    // Base case: the free flow is isometric.
    for (const auto& s : r.stored[0].E.snapshots)
        CHECK(std::abs(s.l2_norm() / d.E0.l2_norm() - 1.0) <= 1e-12);

    DifferenceResiduals res = difference_system_check(r);
    CHECK(res.E.size() == 6);
    CHECK(res.worst() <= 1e-10);

    IterationReport again = run_iteration(d, c);
    for (std::size_t k = 0; k < r.iterates.size(); ++k) {
        CHECK(again.iterates[k].x_norm_E == r.iterates[k].x_norm_E);
        CHECK(again.iterates[k].R == r.iterates[k].R);
    }
}

TEST_CASE("difference check holds after rescaling the data")
{
    Grid g = make_grid(2, 16.0, 32);
    for (double scale : {1.0, 3.0}) {
        ZakharovData d = small_data(g, 0.05 * scale, 30);
        IterationConfig c = small_config(g, 1.0);
        c.store_iterates = true;
        CHECK(difference_system_check(run_iteration(d, c)).worst() <= 1e-10);
    }
}

TEST_CASE("divergence guard reports instead of throwing")
{
    Grid g = make_grid(2, 16.0, 32);
    ZakharovData d = small_data(g, 0.1, 40);
    IterationConfig c = small_config(g, 2.0);
    c.divergence_factor = 1.0 + 1e-12;
    IterationReport r = run_iteration(d, c);
    CHECK(r.diverged());
    CHECK(r.status == "diverged at " + std::to_string(r.diverged_at));
    CHECK(r.iterates.size() == static_cast<std::size_t>(r.diverged_at));

    ZakharovData big = small_data(g, 40.0, 41);
    IterationConfig loud = small_config(g, 8.0);
    loud.iterate_count = 8;
    IterationReport blown = run_iteration(big, loud);
    CHECK(blown.diverged());
    CHECK_THROWS_AS(lipschitz_probe(big, small_data(g, 0.1, 42), loud), DivergenceError);
}

TEST_CASE("tune_horizon halves until the ratio target holds")
{
    Grid g = make_grid(2, 16.0, 32);
    ZakharovData d = small_data(g, 0.1, 50);
    IterationConfig c = small_config(g, 1.0);
    HorizonSearch s = tune_horizon(d, c, 4.0, 6, 1e-3);
    REQUIRE_FALSE(s.trials.empty());
    for (std::size_t j = 1; j < s.trials.size(); ++j)
        CHECK(s.trials[j].first == s.trials[j - 1].first / 2);
    if (s.satisfied)
        CHECK(s.trials.back().second <= 1e-3);
    CHECK(s.report.horizon == s.horizon);
    CHECK(s.report.iterates.size() == 5);
}

TEST_CASE("lipschitz probe")
{
    Grid g = make_grid(2, 16.0, 32);
    ZakharovData d = small_data(g, 0.1, 60);
    IterationConfig c = small_config(g, 1.0);
    Field zero = Field::zeros(g);
    CHECK(lipschitz_probe(d, make_zakharov_data(zero, zero, zero), c) == 0.0);

    ZakharovData p = small_data(g, 0.002, 61);
    ZakharovData p2 = make_zakharov_data(2.0 * p.E0, 2.0 * p.n0, 2.0 * p.n1);
    double r1 = lipschitz_probe(d, p, c), r2 = lipschitz_probe(d, p2, c);
    CHECK(std::isfinite(r1));
    CHECK(std::abs(r2 / r1 - 1.0) <= 0.2);

    ZakharovData huge = small_data(g, 1.0, 62);
    CHECK_THROWS_AS(lipschitz_probe(d, huge, c), std::invalid_argument);
}
