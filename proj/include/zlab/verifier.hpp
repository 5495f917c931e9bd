#pragma once

#include "zlab/ensemble.hpp"
#include "zlab/picard.hpp"

#include <Eigen/Core>
#include <Eigen/QR>

#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace zlab {

inline constexpr double not_a_number = std::numeric_limits<double>::quiet_NaN();

struct LineFit {
    double slope = not_a_number;
    double intercept = not_a_number;
    double residual = not_a_number; // largest |y - fit|
};

// Ordinary least squares y = slope x + intercept; needs >= 3 points.
template <typename X, typename Y>
LineFit fit_scaling_exponent(const Eigen::ArrayBase<X>& x, const Eigen::ArrayBase<Y>& y)
{
    if (x.size() != y.size())
        throw std::invalid_argument("fit needs matching x and y");
    if (x.size() < 3)
        throw std::invalid_argument("fit needs at least 3 points");
    Eigen::MatrixXd A(x.size(), 2);
    A.col(0) = x.matrix().template cast<double>();
    A.col(1).setOnes();
    Eigen::VectorXd b = y.matrix().template cast<double>();
    Eigen::Vector2d c = A.colPivHouseholderQr().solve(b);
    LineFit fit;
    fit.slope = c[0];
    fit.intercept = c[1];
    fit.residual = (A * c - b).cwiseAbs().maxCoeff();
    return fit;
}

LineFit fit_scaling_exponent(std::span<const std::pair<double, double>> points);

// Per-sample ratios of an estimate LHS <= C RHS, grouped by a scale (a band).
struct RatioReport {
    std::string name;
    std::vector<double> sample_scale, lhs, rhs, ratio;
    // Per scale, in insertion order.
    std::vector<double> scales, max_ratio;
    // Per scale: max over samples of LHS / data, the quantity whose scaling
    // exponent is fitted (data = RHS without the scale power).
    std::vector<double> max_normalized;
    double overall_max = 0.0, overall_mean = 0.0, overall_min = 0.0;
    LineFit fit; // log max_normalized (or log max_ratio) against log scale

    // ratio = LHS / RHS; LHS = RHS = 0 records ratio 0.
    void add(double scale, double lhs, double rhs, double normalized);
    // Summary statistics; fits when there are >= 3 scales.
    void finish(bool fit_normalized = true);
};

// ---- dispersive decay ----

struct DecayFit {
    std::vector<double> t, x1, value; // value = sup_y |phi_lambda(t, x1, y)|
    double exponent = not_a_number;
    double residual = not_a_number;
    double envelope = 0.0; // max value * (1/lambda + sqrt t + |x1|)^d
};

// Offsets 0 and 2^{j/2} up to L/4, snapped to the lattice.
std::vector<double> decay_offsets(const Grid& grid);

DecayFit check_dispersive_decay(double lambda, std::span<const double> t_samples,
                                std::span<const double> x1_samples, const Grid& grid);

// ---- refined Strichartz ----

struct StrichartzCase {
    std::vector<double> bands;
    double horizon = 1.0;
    int nodes = 32;
    double eps = 0.05;          // d = 3 factor (T lambda^2)^eps
    bool inhomogeneous = false; // F(t) = e^{itΔ} G0 with G0 from the ensemble
    bool sup_accurate = true;
};

// d = 2: ||P_l E||_{L^4_t L^2_{x1} L^inf_y} / (||P_l E0|| + ||P_l F||_{L^{4/3} L^2 L^1}).
// d = 3: L^2_t and the RHS multiplied by (T l^2)^eps. Ensemble samples are
// drawn per band with `ensemble` supplying count and seed.
RatioReport check_refined_strichartz(const Grid& grid, const StrichartzCase& c, const EnsembleSpec& ensemble);

// ---- div-curl ----

// Transverse-integrated densities on the x1 line, sampled on uniform nodes:
//   ∂_t f11 + ∂_x f12 = G1,   ∂_t f21 - ∂_x f22 = G2.
// dt_f11 / dt_f21 and dx_f12 / dx_f22 hold exact derivatives when known;
// empty means centered differences in t and spectral differences in x.
struct DivCurlRows {
    double horizon = 0.0;
    double dx = 1.0;
    std::vector<Eigen::ArrayXd> f11, f12, G1, f21, f22, G2;
    std::vector<Eigen::ArrayXd> dt_f11, dt_f21, dx_f12, dx_f22;

    int nodes() const { return static_cast<int>(f11.size()) - 1; }
};

struct DivCurlValue {
    double lhs = 0.0;
    double rhs = 0.0;
    double structure_residual = 0.0;
};

// LHS = |∫∫ (f11 f22 + f12 f21)|, RHS = product of the two row norms.
// Throws "inputs do not satisfy div-curl structure" when the relative
// residual of either conservation law exceeds tolerance.
DivCurlValue divcurl_ratio(const DivCurlRows& rows, double tolerance = 1e-2);

// Wave energy row of P_lambda n and Schrödinger mass row of E, both free.
DivCurlRows divcurl_rows(const Field& n0, const Field& n1, const Field& E0, double horizon, int nodes);

struct DivCurlCase {
    double wave_band = 2.0;
    std::vector<double> schrodinger_bands; // mu
    double length = 8.0;
    int nodes = 24;
    double window = 1.0;
};

// One report row per mu, on a grid sized for mu, with T_mu = L / (18 mu).
RatioReport check_divcurl(const DivCurlCase& c, const EnsembleSpec& ensemble);

// ---- flux identities ----

struct ResidualReport {
    std::vector<std::string> identity;
    std::vector<double> coarse, fine; // residual at M and 2M nodes
    std::vector<double> order;        // log2(coarse / fine)
    // The wave momentum flux with coefficient -2 on |∇_y n|^2, as printed.
    double literal_coarse = 0.0, literal_fine = 0.0;
};

ResidualReport check_flux_identities(const Field& E0, const Field& n0, const Field& n1, double horizon,
                                     int nodes);

// ---- bilinear ----

enum class BilinearCase { high_low, low_high };

struct BilinearRows {
    RatioReport n_row;       // ||P n||_{L^2_y} ||P E||_{L^2_y} in L^2_{t,x1}
    RatioReport dtn_row;     // same with ∂_t n
    RatioReport product_row; // ||P v . P E||_{L^2_t L^2_{x1} L^1_y}
};

struct BilinearCaseSpec {
    BilinearCase kind = BilinearCase::high_low;
    double fixed_band = 2.0;          // lambda (high_low) or mu (low_high)
    std::vector<double> varied_bands; // mu (high_low) or lambda (low_high)
    double length = 8.0;
    int nodes = 24;
    int samples = 32;
    std::uint64_t seed = 0;
    double window = 1.0;
};

// Horizon used for a band pair: L / (4 max(9 mu_E / 2, 1)).
double bilinear_horizon(double length, double schrodinger_band);

BilinearRows check_bilinear(const BilinearCaseSpec& spec);

// The bilinear quantities of one free pair (n, E) at bands (lambda, mu).
struct BilinearSample {
    double n_lhs = 0.0, dtn_lhs = 0.0, product_lhs = 0.0;
    double E_data = 0.0;         // ||P E0|| with the n-row E projection
    double n_data = 0.0;         // ||P n0|| + lambda^{-1} ||P n1||
    double E_product_data = 0.0; // ||P E0|| with the product-row E projection
    double v_data = 0.0;         // ||P v0|| with the product-row v projection
};

BilinearSample bilinear_sample(BilinearCase kind, double lambda, double mu, const Field& E0, const Field& v0,
                               double horizon, int nodes);

// Source-corrected bilinear bound on stored Picard iterates: LHS on
// (v^(k), E^(k)); RHS adds the L^1_{t,x} square-root source terms built
// from iterate k - 1 (none for k = 0).
struct InhomogeneousBilinear {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    double E_source = 0.0; // ||P((Re v) E) P E||_{L^1}
    double v_source = 0.0; // ||P Im(Λ v) P Δ|E|^2||_{L^1} or the ∂_{x1} variant
};

InhomogeneousBilinear check_bilinear_inhomogeneous(const IterationReport& run, int k, BilinearCase kind,
                                                   double lambda, double mu);

// ---- Bernstein ----

// ||P_l u||_inf / (l^{d/2} ||P_l u||_2), the sup taken on a 2x refined
// lattice; 0 when P_l u = 0.
double bernstein_ratio(const Field& u, double lambda);

// bernstein_ratio per sample; the ensemble window is
// scaled to window / l along every axis when window > 0.
RatioReport check_bernstein(const Grid& grid, std::span<const double> bands, const EnsembleSpec& ensemble);

} // namespace zlab
