#pragma once

#include "shadowlab/dynamics.hpp"
#include "shadowlab/error.hpp"
#include "shadowlab/measures.hpp"
#include "shadowlab/noise.hpp"
#include "shadowlab/random.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cstdint>
#include <string>
#include <vector>

namespace shadowlab {

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Row-stochastic discretization of x -> P_eps(.|x) on the uniform partition
/// (k cells on S^1, k x k on T^2; flat indices as in GridMeasure).
///
/// The matrix is the product T * N of
///   T  the cell-averaged transfer of f: row i spreads cell i over the cells its
///      image meets, in proportion to the overlap. f is replaced by its affine
///      interpolant on q sub-cells per cell and dimension, which is exact for
///      the linear-expanding family and the cat map;
///   N  the noise stencil N(i, j) = int rho(t) * overlap(C_i + t, C_j) / |C| dt,
///      translation invariant and symmetric, so doubly stochastic.
/// For a Lebesgue-preserving f both factors are doubly stochastic and the
/// uniform vector is an exact left fixed point.
struct UlamOperator {
    MapSpec map;
    NoiseKernel kernel;
    int cells = 0;
    int quadrature = 4;
    SparseRowMatrix matrix;
    std::vector<std::string> warnings;

    int dim() const { return map.dim(); }
    Eigen::Index size() const { return matrix.rows(); }
};

SparseRowMatrix map_transfer_matrix(const MapSpec& map, int cells, int quadrature);
SparseRowMatrix noise_transfer_matrix(const NoiseKernel& kernel, int dim, int cells);

/// Stencil N(dx[, dy]) for offsets 0..reach (mirror-symmetric). Index [dx] in 1-D,
/// [dx * (reach + 1) + dy] in 2-D; entries over the full symmetric stencil sum to 1.
std::vector<double> noise_stencil(const NoiseKernel& kernel, int dim, int cells, int& reach);

/// k >= 16, q >= 1. Warns (in `warnings`) when a cell is wider than epsilon.
UlamOperator build_ulam(const MapSpec& map, const NoiseKernel& kernel, int cells, int quadrature = 4);

struct StationaryResult {
    GridMeasure density;
    double residual = 0.0;  ///< ||pi A - pi||_1 at the returned iterate
    int iterations = 0;
};

/// Left power iteration from the uniform vector until ||pi_{m+1} - pi_m||_1 <= tol.
/// Throws non_convergence after max_iter steps.
StationaryResult stationary_distribution(const UlamOperator& op, double tol = 1e-12, int max_iter = 100000);

class non_convergence : public numerical_error {
public:
    non_convergence(const std::string& what, Eigen::VectorXd last, double residual)
        : numerical_error(what), last_iterate(std::move(last)), residual(residual)
    {
    }
    Eigen::VectorXd last_iterate;
    double residual;
};

/// Empirical measure of n chain steps after discarding burn_in. n >= 1000.
EmpiricalMeasure monte_carlo_stationary(const MapSpec& map, const NoiseKernel& kernel, const PhasePoint& x0,
                                        int burn_in, int n, RandomStream& rng);

struct CrossValidationSettings {
    int cells = 1024;
    int quadrature = 4;
    int samples = 100000;
    int burn_in = 10000;
    int seeds = 10;
    std::uint64_t master_seed = 0;
    std::uint64_t stream_base = 0;
    int dictionary_order = -1;  ///< -1: standard dictionary
    double tol = 1e-12;
    int max_iter = 100000;
};

struct CrossValidationReport {
    StationaryResult ulam;
    std::vector<double> w1;           ///< per seed (NaN on T^2)
    std::vector<double> dict_gap;     ///< per seed, max normalized dictionary gap
    double median_w1 = 0.0;
    double median_dict_gap = 0.0;
    double budget = 0.0;              ///< 2 (1/k + 3/sqrt(n))
    std::vector<bool> seed_ok;
    bool agree = false;               ///< median discrepancy within budget
};

/// Ulam fixed point vs. Monte-Carlo time averages (one chain per seed, started at
/// a uniform random point of that seed's stream).
CrossValidationReport cross_validate(const MapSpec& map, const NoiseKernel& kernel,
                                     const CrossValidationSettings& settings);

double median(std::vector<double> values);

} // namespace shadowlab
