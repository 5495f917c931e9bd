#pragma once

#include "zlab/norms.hpp"
#include "zlab/propagators.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace zlab {

// Initial data of the Zakharov system and its reduced potential
// v0 = n0 + i Λ^{-1} n1.
struct ZakharovData {
    Field E0;
    Field n0;
    Field n1;
    Field v0;
};

// Validates reality of n0, n1 and the zero mean of n1, then derives v0.
ZakharovData make_zakharov_data(const Field& E0, const Field& n0, const Field& n1);

Field reduce(const Field& n0, const Field& n1);
// (Re v, Λ Im v)
std::pair<Field, Field> reconstruct(const Field& v);

struct IterationConfig {
    IterationNormFamily family; // carries (s, l) and the horizon T
    int iterate_count = 8;      // K
    int time_nodes = 64;        // M
    std::uint64_t seed = 0;
    double divergence_factor = 1e6;
    bool store_iterates = false;
    // false: X is replaced by its L^inf_t H^s part (S_1 skipped). R_k and
    // the S_2 and N_1 norms are always measured.
    bool full_norms = true;

    void validate(const Grid& grid) const;
};

// Thrown by probes that need a converged run.
struct DivergenceError : std::runtime_error {
    int iterate;
    DivergenceError(int k, const std::string& what) : std::runtime_error(what), iterate(k) {}
};

struct IterateRecord {
    int k = 0;
    double x_norm_E = 0.0;       // ||E^(k)||_X
    double s2_norm_v = 0.0;      // ||Re v^(k)||_{S_2}
    double n1_norm_product = 0.0; // ||(Re v^(k)) E^(k)||_{N_1}
    double x_norm_dE = 0.0;      // ||E^(k) - E^(k-1)||_X, k >= 1
    double s2_norm_dv = 0.0;     // ||Re(v^(k) - v^(k-1))||_{S_2}, k >= 1
    double R = 0.0;              // R_k, k >= 1
    double mass_deviation = 0.0; // max_t | ||E^(k)(t)|| / ||E0|| - 1 |
};

struct IteratePair {
    Trajectory E;
    Trajectory v;
};

struct IterationReport {
    std::string status = "converging";
    int diverged_at = -1;
    double horizon = 0.0;
    std::string regime_tag;
    std::vector<IterateRecord> iterates;
    // R_{k+1} / R_k for k = 1..K-1; 0 when R_k = 0.
    std::vector<double> contraction_ratios;
    // max over k >= 3 of R_k / (T^{1/4} R_{k-1} + T^{1/2} R_{k-2}).
    double recursion_constant = 0.0;
    std::optional<IteratePair> final_iterate;
    std::vector<IteratePair> stored; // all iterates when requested

    bool diverged() const { return diverged_at >= 0; }
    double ratio(int k) const { return contraction_ratios.at(k - 1); } // R_{k+1}/R_k
};

// Dealiased nonlinear sources of the next step: (Re v) E and Λ|E|^2.
std::pair<SourceTerm, SourceTerm> nonlinear_sources(const Trajectory& E, const Trajectory& v);

IteratePair picard_step(const Trajectory& E_prev, const Trajectory& v_prev, const ZakharovData& data);

IterationReport run_iteration(const ZakharovData& data, const IterationConfig& config);

struct HorizonSearch {
    double horizon = 0.0;
    bool satisfied = false;
    std::vector<std::pair<double, double>> trials; // (T, R_4 / R_3)
    IterationReport report;
};

// T = T0 2^{-j}, j = 0..max_halvings, until R_4 / R_3 <= target. Trials run
// four iterates without S_1; the accepted T is rerun with the full config.
HorizonSearch tune_horizon(const ZakharovData& data, IterationConfig config, double T0,
                           int max_halvings = 12, double target = 0.5);

// Runs data and data + perturbation. Returns
// ||E - E'||_X + ||Re(v - v')||_{S_2} at the final iterate over
// ||dE0||_{H^s} + ||dv0||_{H^l}; 0 for a zero perturbation.
double lipschitz_probe(const ZakharovData& data, const ZakharovData& perturbation,
                       const IterationConfig& config);

// Residuals, relative to the size of E^(k) and v^(k), of E^(k) - E^(k-1) and v^(k) - v^(k-1) against Duhamel
// with zero data and the differenced sources, for k = 1..K.
struct DifferenceResiduals {
    std::vector<double> E;
    std::vector<double> v;
    double worst() const;
};

DifferenceResiduals difference_system_check(const IterationReport& report);

} // namespace zlab
