#pragma once

#include "shadowlab/config.hpp"
#include "shadowlab/measures.hpp"
#include "shadowlab/noise.hpp"
#include "shadowlab/shadowing.hpp"
#include "shadowlab/stationary.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace shadowlab {

/// Random-stream ids. Stream (seed, id) is independent of every other id, so
/// each orbit below can be regenerated on its own.
namespace streams {
inline constexpr std::uint64_t simulate = 0;
inline constexpr std::uint64_t stationary_mc = 1000;          // + seed index
inline constexpr std::uint64_t sweep_mc = 10000;              // + 1000 * epsilon index + seed index
inline constexpr std::uint64_t birkhoff_deterministic = 1000000;  // + 1000 * schedule index + seed index
inline constexpr std::uint64_t birkhoff_random = 2000000;         // + 1000 * schedule index + seed index
} // namespace streams

std::vector<Observable> dictionary_for(const ExperimentConfig& cfg);

/// Initial point: run.x0 when given, otherwise uniform from `rng`.
PhasePoint initial_point(const ExperimentConfig& cfg, RandomStream& rng);

// --- simulate -------------------------------------------------------------

struct SimulationReport {
    RandomOrbit orbit;
    PseudoOrbitCheck check;
};

/// One random orbit of length run.n at the first epsilon.
SimulationReport run_simulate(const ExperimentConfig& cfg);
void write_simulation_csv(std::ostream& out, const MapSpec& map, const SimulationReport& r);

// --- shadowing and the orbit-comparison inequality -----------------------

struct ObservableComparison {
    std::string observable;
    double lip_const = 0.0;
    double lhs = 0.0;   ///< |int phi dS_n^f(z) - int phi dS_n(x)|
    double rhs = 0.0;   ///< lip_const * shadow_distance
    bool ok = true;     ///< lhs <= rhs + 1e-9
};

struct ShadowReport {
    Sequence pseudo;
    PseudoOrbitCheck pseudo_check;
    ShadowOrbit shadow;
    double target_epsilon = 0.0;   ///< modulus accuracy for the observed gap, + 1e-9
    Certificate certificate;
    std::vector<ObservableComparison> comparisons;
    bool inequality_holds = true;
};

/// Shadow `pseudo`, certify at the accuracy the modulus promises for its max
/// gap, and compare empirical measures of pseudo-orbit and shadow on `dictionary`.
ShadowReport shadow_and_compare(const MapSpec& map, Sequence pseudo, std::span<const Observable> dictionary);

/// Random orbit at the first epsilon (or the pseudo-orbit file in shadow.input),
/// then shadow_and_compare.
ShadowReport run_shadow_demo(const ExperimentConfig& cfg);
void write_shadow_csv(std::ostream& out, const ShadowReport& r);
void write_comparison_csv(std::ostream& out, const ShadowReport& r);

// --- stationary -----------------------------------------------------------

CrossValidationSettings cross_validation_settings(const ExperimentConfig& cfg);
void write_cross_validation_csv(std::ostream& out, const CrossValidationReport& r);

// --- epsilon sweep --------------------------------------------------------

/// Slack added to every bound check on top of the estimator budgets.
inline constexpr double bound_tolerance = 1e-6;

struct ObservableBound {
    std::string observable;
    double lip_const = 0.0;
    double gap = 0.0;       ///< |int phi dmu_eps - int phi dmu|
    double bound = 0.0;     ///< (lip + 1) eps + delta(eps)
    double budget = 0.0;    ///< lip * estimator W1 budget
    double excess = 0.0;    ///< gap - bound - budget
    bool ok = true;         ///< excess <= bound_tolerance
};

struct SweepRow {
    double epsilon = 0.0;
    double delta = 0.0;                 ///< shadowing modulus delta(eps)
    double w1 = 0.0;                    ///< W1(mu_eps, mu) (NaN on T^2)
    double max_normalized_gap = 0.0;    ///< dictionary_gap(mu_eps, mu).max_gap
    double estimator_budget = 0.0;      ///< W1 error budget of the two Ulam estimates
    double max_excess = 0.0;            ///< max over observables of `excess`
    double mc_w1 = 0.0;                 ///< median over seeds of W1(MC, Ulam) (NaN on T^2)
    double mc_gap = 0.0;                ///< median over seeds of the MC/Ulam dictionary gap
    double mc_budget = 0.0;             ///< 2 (1/k + 3/sqrt(n))
    bool mc_agree = true;
    bool bound_ok = true;               ///< max_excess <= bound_tolerance
    int seeds = 0;
    int ulam_iterations = 0;
    double ulam_residual = 0.0;
    std::vector<ObservableBound> per_observable;
};

struct SweepResult {
    std::string reference;              ///< "lebesgue" or "ulam-acim"
    std::vector<SweepRow> rows;         ///< epsilon descending
    std::optional<std::string> error;   ///< set when a component failed; rows are the partial table
    bool all_bounds_ok() const;
};

SweepResult run_sweep(const ExperimentConfig& cfg);
void write_sweep_csv(std::ostream& out, const SweepResult& r);
void write_sweep_observables_csv(std::ostream& out, const SweepResult& r);

/// Physical-measure oracle: Lebesgue for the linear family and the cat map,
/// the epsilon = 0 Ulam fixed point otherwise.
ReferenceMeasure reference_measure(const MapSpec& map, int cells, int quadrature, double tol, int max_iter);

// --- Birkhoff convergence -------------------------------------------------

struct BirkhoffRow {
    long long n = 0;
    double deterministic_gap = 0.0;   ///< median over seeds of max_phi |avg - int phi dmu|
    double random_gap = 0.0;          ///< same for random orbits against mu_eps
};

struct BirkhoffReport {
    double epsilon = 0.0;
    std::vector<BirkhoffRow> rows;
    double deterministic_slope = 0.0;   ///< least-squares slope of log gap vs log n
    double random_slope = 0.0;
    std::optional<long long> deterministic_n0;  ///< first n from which the gap stays <= epsilon
    std::optional<long long> random_n0;
};

/// n runs over n_min, 2 n_min, ... <= n_max; each (n, seed) uses a fresh orbit.
BirkhoffReport run_birkhoff(const ExperimentConfig& cfg);
void write_birkhoff_csv(std::ostream& out, const BirkhoffReport& r);

double loglog_slope(std::span<const double> n, std::span<const double> gap);

} // namespace shadowlab
