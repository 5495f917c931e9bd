#include "doctest.h"
#include "support.hpp"

#include "zlab/angular.hpp"
#include "zlab/littlewood_paley.hpp"
#include "zlab/multiplier.hpp"

#include <cmath>
#include <numbers>

using namespace zlab;
using zlab::test::max_abs_diff;
using zlab::test::plane_wave;
using zlab::test::random_band_limited;
using zlab::test::relative_error;

constexpr double pi = std::numbers::pi;

TEST_CASE("make_grid validates its arguments")
{
    CHECK_THROWS_AS(make_grid(2, 1.0, 17), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(4, 1.0, 16), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(0, 1.0, 16), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1, -1.0, 16), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1, 1.0, 8), std::invalid_argument);
    Grid g = make_grid(3, 2.0, 16);
    CHECK(g.spacing() * g.points() == g.extent());
    CHECK(g.size() == 16 * 16 * 16);
}

TEST_CASE("grid with L = 2π has integer frequencies")
{
    Grid g = make_grid(1, 2 * pi, 16);
    for (int i = 0; i < 16; ++i) {
        int k = i < 8 ? i : i - 16;
        CHECK(g.lattice_index(i) == k);
        CHECK(g.axis_frequency(i) == doctest::Approx(k).epsilon(1e-15));
    }
}

TEST_CASE("frequency lattice matches 2πk/L by enumeration")
{
    Grid g = make_grid(2, 64 * 2 * pi, 256);
    CHECK(g.frequency_step() == doctest::Approx(1.0 / 64).epsilon(1e-14));
    for (Eigen::Index j = 0; j < g.size(); j += 97) {
        int i0 = static_cast<int>(j / 256), i1 = static_cast<int>(j % 256);
        double k0 = i0 < 128 ? i0 : i0 - 256;
        double k1 = i1 < 128 ? i1 : i1 - 256;
        double expected = 2 * pi * std::hypot(k0, k1) / g.extent();
        CHECK(g.frequency_norm()[j] == doctest::Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("transform of a constant is a single zero-mode coefficient")
{
    Grid g = make_grid(2, 2 * pi, 16);
    Field c(g, Eigen::ArrayXcd::Constant(g.size(), complex(2.5, -1.0)), Space::physical);
    Field f = to_fourier(c);
    CHECK(std::abs(f.values()[0] - 16.0 * complex(2.5, -1.0)) < 1e-12);
    CHECK(f.values().tail(g.size() - 1).abs().maxCoeff() < 1e-12);
}

TEST_CASE("plane wave maps to one coefficient at its frequency")
{
    Grid g = make_grid(2, 2 * pi, 16);
    Field f = to_fourier(plane_wave(g, {4, 0, 0}));
    Eigen::Index at = 4 * 16;
    for (Eigen::Index j = 0; j < g.size(); ++j) {
        if (j == at)
            CHECK(std::abs(f.values()[j]) == doctest::Approx(16.0));
        else
            CHECK(std::abs(f.values()[j]) < 1e-12);
    }
}

TEST_CASE("transform agrees with a direct DFT sum and obeys Parseval")
{
    // Direct O(N^4) sum on the smallest admissible 2-d grid.
    Grid g = make_grid(2, 1.0, 16);
    Field u = random_band_limited(g, 1e9, 7);
    Field f = to_fourier(u);
    const int n = 16;
    double worst = 0.0;
    for (int k0 = 0; k0 < n; ++k0)
        for (int k1 = 0; k1 < n; ++k1) {
            complex sum = 0.0;
            for (int j0 = 0; j0 < n; ++j0)
                for (int j1 = 0; j1 < n; ++j1)
                    sum += u.values()[j0 * n + j1] *
                           std::exp(complex(0.0, -2 * pi * (double(k0) * j0 + double(k1) * j1) / n));
            sum /= n;
            worst = std::max(worst, std::abs(sum - f.values()[k0 * n + k1]));
        }
    CHECK(worst < 1e-12);
    double ps = u.values().abs2().sum(), fs = f.values().abs2().sum();
    CHECK(std::abs(ps - fs) <= 1e-12 * ps);
}

TEST_CASE("transform round trip and identity on matching tag")
{
    for (int dim : {1, 2, 3}) {
        Grid g = make_grid(dim, 3.0, dim == 3 ? 16 : 64);
        Field u = random_band_limited(g, 1e9, 11 + dim);
        Field back = to_physical(to_fourier(u));
        CHECK(relative_error(back, u) < 1e-12);
        Field same = transform(u, Space::physical);
        CHECK((same.values() == u.values()).all());
    }
}

TEST_CASE("apply_multiplier examples")
{
    Grid g = make_grid(2, 2 * pi, 32);
    Field u = random_band_limited(g, 1e9, 3);
    Field id = apply_multiplier(u, [](const std::array<double, 3>&) { return complex(1.0); });
    CHECK(id.space() == Space::fourier);
    CHECK(relative_error(id, u) < 1e-13);

    Field w = plane_wave(g, {3, 0, 0});
    Field lap = apply_multiplier(w, [](const std::array<double, 3>& xi) {
        return complex(xi[0] * xi[0] + xi[1] * xi[1]);
    });
    CHECK(max_abs_diff(lap, 9.0 * w) < 1e-12);

    // Indicator of |xi| <= 2 against direct coefficient zeroing.
    Field masked = apply_multiplier(u, [](const std::array<double, 3>& xi) {
        return complex(std::hypot(xi[0], xi[1]) <= 2.0 ? 1.0 : 0.0);
    });
    Field f = to_fourier(u);
    Eigen::ArrayXcd c = f.values();
    for (Eigen::Index j = 0; j < g.size(); ++j) {
        int k0 = g.lattice_index(int(j / 32)), k1 = g.lattice_index(int(j % 32));
        if (k0 * k0 + k1 * k1 > 4)
            c[j] = 0.0;
    }
    CHECK((masked.values() - c).abs().maxCoeff() < 1e-15);

    CHECK_THROWS_AS(apply_multiplier(u, [](const std::array<double, 3>& xi) {
                        return complex(1.0 / xi[0]);
                    }),
                    std::domain_error);
}

TEST_CASE("lambda_power examples")
{
    Grid g = make_grid(2, 2 * pi, 32);
    Field w = plane_wave(g, {3, 0, 0});
    CHECK(max_abs_diff(lambda_power(w, 1.0), 3.0 * w) < 1e-12);

    Field u = random_band_limited(g, 10.0, 5);
    CHECK(relative_error(lambda_power(u, 0.0), u) < 1e-14);

    CHECK_THROWS_WITH_AS(lambda_power(u, -1.0), "mean-zero required for Λ^{negative}", std::domain_error);

    Field f = to_fourier(u);
    Eigen::ArrayXcd c = f.values();
    c[0] = 0.0;
    Field mz(g, c, Space::fourier);
    CHECK(relative_error(lambda_power(lambda_power(mz, -1.0), 1.0), mz) < 1e-12);
    // Zero mode goes to zero for nonzero powers.
    CHECK(to_fourier(lambda_power(u, 0.5)).values()[0] == complex(0.0));
}

TEST_CASE("psi profile shape")
{
    CHECK(psi(0.0) == 1.0);
    CHECK(psi(1.0) == 1.0);
    CHECK(psi(9.0 / 8.0) == 0.0);
    CHECK(psi(2.0) == 0.0);
    double prev = 1.0;
    for (int i = 0; i <= 1000; ++i) {
        double r = 1.0 + 0.125 * i / 1000.0;
        double v = psi(r);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        CHECK(v <= prev);
        prev = v;
    }
    CHECK(psi(1.0625) == doctest::Approx(0.5));
    CHECK(phi(2.0) == 1.0);
    CHECK(phi(0.5) == 0.0);
    CHECK(phi(9.0 / 4.0) == 0.0);
    CHECK(chi(1.0) == 1.0);
    CHECK(chi(9.0 / 4.0) == 1.0);
}

TEST_CASE("dyadic ladder respects the band-limit guard")
{
    Grid g = make_grid(2, 2 * pi, 64); // Nyquist 32
    DyadicLadder l = DyadicLadder::for_grid(g);
    CHECK(l.max_band == 8.0);
    CHECK(9.0 * l.max_band / 4.0 < g.nyquist());
    CHECK(l.bands() == std::vector<double>{2, 4, 8});
    Field u = random_band_limited(g, 5.0, 1);
    CHECK_THROWS_AS(project_dyadic(u, 16.0, l), std::invalid_argument);
    CHECK_THROWS_AS(project_dyadic(u, 3.0, l), std::invalid_argument);
    CHECK_THROWS_AS(project_dyadic(u, 1.0, l), std::invalid_argument);
}

TEST_CASE("telescoping of the low symbol and bands")
{
    Grid g = make_grid(2, 2 * pi, 128);
    DyadicLadder l = DyadicLadder::for_grid(g);
    Eigen::ArrayXd sum = low_symbol(g, 1.0);
    for (double b : l.bands())
        sum += band_symbol(g, b);
    for (Eigen::Index j = 0; j < g.size(); ++j)
        if (g.frequency_norm()[j] <= 2.0 * l.max_band)
            CHECK(std::abs(sum[j] - 1.0) <= 1e-12);
}

TEST_CASE("project_dyadic and project_low pointwise examples")
{
    Grid g = make_grid(2, 2 * pi, 64);
    DyadicLadder l = DyadicLadder::for_grid(g);
    Field w4 = plane_wave(g, {4, 0, 0});
    CHECK(max_abs_diff(project_dyadic(w4, 2.0, l), phi(2.0) * w4) < 1e-12);
    CHECK(max_abs_diff(project_dyadic(w4, 2.0, l), w4) < 1e-12);
    CHECK(to_physical(project_dyadic(w4, 8.0, l)).values().abs().maxCoeff() < 1e-13);
    CHECK(project_dyadic(Field::zeros(g), 4.0, l).values().abs().maxCoeff() == 0.0);

    Field w3 = plane_wave(g, {3, 0, 0});
    CHECK(max_abs_diff(project_low(w3, 4.0, l), w3) < 1e-12);
    Field w8 = plane_wave(g, {8, 0, 0});
    CHECK(to_physical(project_low(w8, 2.0, l)).values().abs().maxCoeff() < 1e-13);

    // Off-grid-point band value: |xi| = 5 under lambda = 4 sits on the bridge.
    Field w5 = plane_wave(g, {3, 4, 0});
    CHECK(max_abs_diff(project_dyadic(w5, 4.0, l), phi(5.0 / 4.0) * w5) < 1e-12);
}

TEST_CASE("Littlewood-Paley reconstruction is the identity on band-limited fields")
{
    Grid g = make_grid(2, 2 * pi, 128);
    DyadicLadder l = DyadicLadder::for_grid(g);
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        Field u = random_band_limited(g, 2.0 * l.max_band, 100 + seed);
        Field sum = project_low(u, 1.0, l);
        for (double b : l.bands())
            sum = sum + project_dyadic(u, b, l);
        CHECK(relative_error(sum, u) <= 1e-12);
    }
}

TEST_CASE("bands four apart have disjoint supports")
{
    Grid g = make_grid(2, 2 * pi, 128);
    DyadicLadder l = DyadicLadder::for_grid(g);
    Field u = random_band_limited(g, 60.0, 8);
    Field pp = project_dyadic(project_dyadic(u, 2.0, l), 8.0, l);
    CHECK(pp.values().abs().maxCoeff() == 0.0);
}

TEST_CASE("angular partition structure")
{
    auto p2 = make_angular_partition(2, 2.0);
    CHECK(p2.patch_count() == 4);
    CHECK(p2.directions[0].isApprox(Eigen::Vector3d::UnitX()));
    CHECK(p2.directions[1].isApprox(Eigen::Vector3d::UnitY()));
    CHECK(p2.covering_radius_estimate(4000) < p2.support_angle);

    auto p100 = make_angular_partition(2, 100.0);
    CHECK(p100.patch_count() % 2 == 0);
    CHECK(p100.covering_radius_estimate(200000) < p100.support_angle);

    auto p3 = make_angular_partition(3, 2.0);
    for (int a = 0; a < 3; ++a)
        CHECK(p3.directions[a].isApprox(Eigen::Vector3d::Unit(a)));
    CHECK(p3.covering_radius_estimate(20000) < 0.9 * p3.support_angle);

    auto p1 = make_angular_partition(1, 2.0);
    CHECK(p1.patch_count() == 1);
}

TEST_CASE("angular partition sums to one and obeys the cone condition")
{
    for (int dim : {2, 3}) {
        Grid g = make_grid(dim, 2 * pi, dim == 2 ? 64 : 16);
        auto part = make_angular_partition(dim, 2.0);
        auto q = patch_symbols(g, part);
        Eigen::ArrayXd total = Eigen::ArrayXd::Zero(g.size());
        for (auto& qi : q)
            total += qi;
        CHECK((total - 1.0).abs().maxCoeff() <= 1e-12);
        for (int i = 0; i < part.patch_count(); ++i) {
            const auto& w = part.directions[i];
            for (Eigen::Index j = 1; j < g.size(); ++j) {
                if (q[i][j] == 0.0)
                    continue;
                Eigen::Vector3d xi = Eigen::Vector3d::Zero();
                for (int a = 0; a < dim; ++a)
                    xi[a] = g.axis_frequency(g.coordinate(j, a));
                double along = std::abs(xi.dot(w));
                double perp = (xi - xi.dot(w) * w).norm();
                CHECK(along >= part.cone_constant * perp);
            }
        }
    }
}

TEST_CASE("project_angular examples")
{
    Grid g = make_grid(2, 2 * pi, 64);
    DyadicLadder l = DyadicLadder::for_grid(g);
    auto part = make_angular_partition(2, 2.0);
    Field ex = plane_wave(g, {4, 0, 0});
    // Along e_1 only the e_1 bump is nonzero, so Q = 1 there.
    CHECK(max_abs_diff(project_angular(ex, 2.0, 0, part, l), ex) < 1e-12);
    Field ey = plane_wave(g, {0, 4, 0});
    CHECK(to_physical(project_angular(ey, 2.0, 0, part, l)).values().abs().maxCoeff() < 1e-13);
    CHECK_THROWS_AS(project_angular(ex, 2.0, 4, part, l), std::out_of_range);

    Field u = random_band_limited(g, 20.0, 21);
    for (double b : l.bands()) {
        Field sum = Field::zeros(g, Space::fourier);
        for (int i = 0; i < part.patch_count(); ++i)
            sum = sum + project_angular(u, b, i, part, l);
        Field pb = project_dyadic(u, b, l);
        CHECK((sum - pb).l2_norm() <= 1e-12 * pb.l2_norm());
    }
}

TEST_CASE("bony_split examples")
{
    Grid g = make_grid(2, 2 * pi, 64);
    DyadicLadder l = DyadicLadder::for_grid(g);
    Field u = plane_wave(g, {2, 0, 0});
    // sigma = 4: the product mode |xi| = 4 sits where phi(4/4) = 0.
    auto p4 = bony_split(u, u, 4.0, l);
    CHECK(p4.high_low.values().abs().maxCoeff() == 0.0);
    CHECK(p4.low_high.values().abs().maxCoeff() == 0.0);
    Field direct4 = project_dyadic(multiply(u, u), 4.0, l);
    CHECK(max_abs_diff(p4.high_high, direct4) < 1e-12);
    // sigma = 2 keeps the product entirely, in the high-high piece.
    auto p2 = bony_split(u, u, 2.0, l);
    CHECK(max_abs_diff(p2.high_high, multiply(u, u)) < 1e-12);
    CHECK(p2.high_low.values().abs().maxCoeff() == 0.0);

    auto pz = bony_split(u, Field::zeros(g), 4.0, l);
    for (const Field* f : {&pz.high_low, &pz.low_high, &pz.high_high})
        CHECK(f->values().abs().maxCoeff() == 0.0);

    Field a = random_band_limited(g, 15.0, 31);
    Field b = random_band_limited(g, 15.0, 32);
    for (double sigma : {2.0, 4.0, 8.0}) {
        auto p = bony_split(a, b, sigma, l);
        Field direct = project_dyadic(multiply(a, b), sigma, l);
        Field sum = p.high_low + p.low_high + p.high_high;
        CHECK((sum - direct).l2_norm() <= 1e-10 * direct.l2_norm());
    }
    // sigma = 8 has a nonempty low class.
    auto p8 = bony_split(a, b, 8.0, l);
    CHECK(p8.high_low.l2_norm() > 0.0);

    Field wide = random_band_limited(g, 40.0, 33);
    CHECK_THROWS_AS(bony_split(wide, b, 4.0, l), std::domain_error);
}
