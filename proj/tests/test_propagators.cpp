#include "doctest.h"
#include "support.hpp"

#include "zlab/littlewood_paley.hpp"
#include "zlab/multiplier.hpp"
#include "zlab/norms.hpp"
#include "zlab/propagators.hpp"

#include <cmath>
#include <numbers>

using namespace zlab;
using zlab::test::max_abs_diff;
using zlab::test::plane_wave;
using zlab::test::random_band_limited;
using zlab::test::relative_error;

constexpr double pi = std::numbers::pi;

TEST_CASE("schrodinger_flow examples")
{
    Grid g = make_grid(2, 2 * pi, 32);
    Field e = plane_wave(g, {2, 0, 0});
    CHECK(max_abs_diff(schrodinger_flow(e, 0.0), e) < 1e-14);
    CHECK(max_abs_diff(schrodinger_flow(e, 0.5), std::exp(complex(0, -2.0)) * e) < 1e-13);

    Field u = random_band_limited(g, 10.0, 1);
    Field a = schrodinger_flow(schrodinger_flow(u, 0.3), 0.45);
    Field b = schrodinger_flow(u, 0.75);
    CHECK(relative_error(a, b) < 1e-12);
    CHECK(std::abs(schrodinger_flow(u, 3.7).l2_norm() - u.l2_norm()) < 1e-12);
    CHECK(relative_error(schrodinger_flow(schrodinger_flow(u, 2.0), -2.0), u) < 1e-12);
}

TEST_CASE("half_wave_flow examples")
{
    Grid g = make_grid(2, 2 * pi, 32);
    Field v = plane_wave(g, {3, 0, 0});
    CHECK(max_abs_diff(half_wave_flow(v, 0.0), v) < 1e-14);
    CHECK(max_abs_diff(half_wave_flow(v, 1.0), std::exp(complex(0, -3.0)) * v) < 1e-13);
    Field u = random_band_limited(g, 10.0, 2);
    CHECK(relative_error(half_wave_flow(half_wave_flow(u, 0.2), 0.9), half_wave_flow(u, 1.1)) < 1e-12);
    CHECK(std::abs(half_wave_flow(u, 5.0).l2_norm() - u.l2_norm()) < 1e-12);
}

TEST_CASE("wave_flow examples")
{
    Grid g = make_grid(2, 2 * pi, 32);
    Field n0 = Field::sample(g, [](auto& x) { return complex(std::cos(2 * x[0])); });
    Field zero = Field::zeros(g);
    auto [n, dn] = wave_flow(n0, zero, 0.0);
    CHECK(max_abs_diff(n, n0) < 1e-14);
    CHECK(max_abs_diff(dn, zero) < 1e-14);
    for (double t : {0.3, 1.7}) {
        auto [nt, dnt] = wave_flow(n0, zero, t);
        CHECK(max_abs_diff(nt, std::cos(2 * t) * n0) < 1e-13);
    }

    Field a = random_band_limited(g, 8.0, 3, true);
    Field b = lambda_power(lambda_power(random_band_limited(g, 8.0, 4, true), 1.0), 0.0);
    b = to_physical(b);
    double e0 = wave_energy(a, b);
    double worst = 0.0;
    for (int m = 1; m <= 32; ++m) {
        auto [nt, dnt] = wave_flow(a, b, 0.37 * m);
        worst = std::max(worst, std::abs(wave_energy(nt, dnt) - e0) / e0);
    }
    CHECK(worst <= 1e-10);

    Field complex_input = plane_wave(g, {1, 0, 0});
    CHECK_THROWS_AS(wave_flow(complex_input, zero, 1.0), std::invalid_argument);
    Field with_mean = Field::sample(g, [](auto&) { return complex(1.0); });
    CHECK_THROWS_AS(wave_flow(zero, with_mean, 1.0), std::invalid_argument);
}

TEST_CASE("duhamel with zero source is the free flow")
{
    Grid g = make_grid(2, 2 * pi, 32);
    Field u = random_band_limited(g, 6.0, 5);
    const int m = 16;
    SourceTerm zero{std::vector<Field>(m + 1, Field::zeros(g)), "zero"};
    for (Equation kind : {Equation::schrodinger, Equation::half_wave}) {
        Trajectory d = duhamel(kind, u, zero, 1.0, m);
        Trajectory f = free_trajectory(kind, u, 1.0, m);
        for (int k = 0; k <= m; ++k)
            CHECK((d.snapshots[k].values() == f.snapshots[k].values()).all());
    }
    SourceTerm short_source{std::vector<Field>(m, Field::zeros(g)), "short"};
    CHECK_THROWS_AS(duhamel(Equation::schrodinger, u, short_source, 1.0, m), std::invalid_argument);
}

TEST_CASE("duhamel matches the closed form for a constant single-mode source")
{
    // i E_t + ΔE = c e^{2ix}: E(t) = -i c e^{2ix} ∫_0^t e^{-4i(t-s)} ds.
    Grid g = make_grid(1, 2 * pi, 16);
    const complex c(0.7, -0.2);
    Field mode = plane_wave(g, {2, 0, 0});
    const double horizon = 1.3;
    double previous = 0.0;
    for (int m : {16, 32, 64}) {
        SourceTerm src{std::vector<Field>(m + 1, c * mode), "mode"};
        Trajectory d = duhamel(Equation::schrodinger, Field::zeros(g), src, horizon, m);
        double err = 0.0;
        for (int k = 0; k <= m; ++k) {
            double t = d.time(k);
            complex integral = (1.0 - std::exp(complex(0, -4 * t))) / complex(0, 4);
            Field exact = (complex(0, -1) * c * integral) * mode;
            err = std::max(err, max_abs_diff(d.snapshots[k], exact));
        }
        if (previous > 0.0)
            CHECK(previous / err == doctest::Approx(4.0).epsilon(0.05));
        previous = err;
    }
    CHECK(previous < 1e-3);
}

TEST_CASE("duhamel converges at second order on a smooth random source")
{
    Grid g = make_grid(2, 2 * pi, 32);
    Field g1 = random_band_limited(g, 4.0, 6);
    Field g2 = random_band_limited(g, 4.0, 7);
    Field e0 = random_band_limited(g, 4.0, 8);
    auto run = [&](int m) {
        SourceTerm src;
        for (int k = 0; k <= m; ++k) {
            double t = 1.0 * k / m;
            src.samples.push_back(std::cos(t) * g1 + std::sin(2 * t) * g2);
        }
        return duhamel(Equation::schrodinger, e0, src, 1.0, m).snapshots.back();
    };
    Field d32 = run(32), d64 = run(64), d128 = run(128);
    double ratio = (d32 - d64).l2_norm() / (d64 - d128).l2_norm();
    CHECK(ratio >= 3.3);
    CHECK(ratio <= 4.7);
}

TEST_CASE("duhamel residual of the differentiated trajectory is second order")
{
    Grid g = make_grid(1, 2 * pi, 32);
    Field src_field = random_band_limited(g, 3.0, 9);
    auto residual = [&](int m) {
        SourceTerm src;
        for (int k = 0; k <= m; ++k)
            src.samples.push_back(std::cos(1.0 * k / m) * src_field);
        Trajectory d = duhamel(Equation::schrodinger, Field::zeros(g), src, 1.0, m);
        // i ∂_t E + ΔE - F at the middle node by centered differences.
        int k = m / 2;
        Field dt = (1.0 / (2 * d.step())) * (d.snapshots[k + 1] - d.snapshots[k - 1]);
        Field lap = lambda_power(d.snapshots[k], 2.0);
        Field r = complex(0, 1) * dt - lap - src.samples[k];
        return r.l2_norm();
    };
    double r1 = residual(32), r2 = residual(64);
    CHECK(r1 / r2 > 3.3);
}

TEST_CASE("wave_pair duhamel solves the forced wave equation")
{
    // ∂_t² n - Δn = G with G = cos(3x) mean-zero and constant in time, n(0) = 0.
    // Exact: n = (1 - cos(3t)) cos(3x) / 9.
    Grid g = make_grid(1, 2 * pi, 16);
    Field cos3 = Field::sample(g, [](auto& x) { return complex(std::cos(3 * x[0])); });
    const int m = 128;
    SourceTerm src{std::vector<Field>(m + 1, cos3), "G"};
    Trajectory d = duhamel(Equation::wave_pair, Field::zeros(g), src, 2.0, m);
    double t = d.time(m);
    Field exact = ((1.0 - std::cos(3 * t)) / 9.0) * cos3;
    CHECK(max_abs_diff(real_part(d.snapshots[m]), exact) < 1e-3);
}

TEST_CASE("dispersive kernel examples")
{
    Grid g = make_grid(2, 64.0, 128);
    Field k0 = dispersive_kernel(1.0, 0.0, g);
    // Parseval: ||φ||_{L^2}^2 = L^{-d} sum chi^2.
    double lattice = 0.0;
    for (Eigen::Index j = 0; j < g.size(); ++j) {
        double c = chi(g.frequency_norm()[j]);
        lattice += c * c;
    }
    lattice = std::sqrt(lattice / std::pow(g.extent(), 2));
    CHECK(k0.l2_norm() == doctest::Approx(lattice).epsilon(1e-12));

    // Even symbol: φ(t, -x) = φ(t, x).
    Field k1 = dispersive_kernel(1.0, 1.0, g);
    const int n = g.points();
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            complex a = k1.values()[i * n + j];
            complex b = k1.values()[((n - i) % n) * n + (n - j) % n];
            worst = std::max(worst, std::abs(a - b));
        }
    CHECK(worst < 1e-14);

    CHECK(kernel_wrap_time(g, 1.0) == doctest::Approx(64.0 / 36.0));
    CHECK_THROWS_AS(dispersive_kernel(1.0, 2.0, g), std::invalid_argument);
    CHECK_THROWS_AS(dispersive_kernel(16.0, 0.01, g), std::invalid_argument);
}

TEST_CASE("free trajectories are isometric at every node")
{
    Grid g = make_grid(2, 2 * pi, 32);
    Field u = random_band_limited(g, 10.0, 12);
    for (Equation kind : {Equation::schrodinger, Equation::half_wave}) {
        Trajectory t = free_trajectory(kind, u, 3.0, 24);
        for (const auto& s : t.snapshots)
            CHECK(std::abs(s.l2_norm() - 1.0) <= 1e-12);
    }
}
