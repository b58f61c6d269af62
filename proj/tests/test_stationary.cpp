#include "shadowlab/error.hpp"
#include "shadowlab/stationary.hpp"

#include <doctest.h>

#include <cmath>

using namespace shadowlab;

namespace {

NoiseKernel uniform(double eps) { return make_kernel(KernelShape::uniform_ball, eps); }

void check_stochastic(const SparseRowMatrix& a)
{
    for (Eigen::Index i = 0; i < a.outerSize(); ++i) {
        double row = 0.0;
        for (SparseRowMatrix::InnerIterator it(a, i); it; ++it) {
            CHECK(it.value() >= 0.0);
            row += it.value();
        }
        CHECK(row == doctest::Approx(1.0).epsilon(1e-10));
    }
}

} // namespace

TEST_CASE("build_ulam arguments")
{
    const MapSpec d = MapSpec::linear_expanding(2);
    CHECK_THROWS_AS(build_ulam(d, uniform(0.01), 8), usage_error);
    CHECK_THROWS_AS(build_ulam(d, uniform(0.01), 64, 0), usage_error);
    CHECK(build_ulam(d, uniform(0.01), 64).warnings.size() == 1);
    CHECK(build_ulam(d, uniform(0.01), 1024).warnings.empty());
}

TEST_CASE("epsilon 0 gives the classical Ulam matrix of the doubling map")
{
    const int k = 32;
    const UlamOperator op = build_ulam(MapSpec::linear_expanding(2), uniform(0.0), k, 4);
    const Eigen::MatrixXd a = Eigen::MatrixXd(op.matrix);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            // of the 4 quadrature points (i + (m + 1/2)/4)/k, two land in cell 2i and two in 2i + 1
            const double want = (j == (2 * i) % k || j == (2 * i + 1) % k) ? 0.5 : 0.0;
            CHECK(a(i, j) == doctest::Approx(want).epsilon(1e-14));
        }
    }
}

TEST_CASE("operators are row-stochastic, nonnegative and local")
{
    for (const MapSpec& m : {MapSpec::linear_expanding(2), MapSpec::linear_expanding(3), MapSpec::nonlinear_expanding(0.1)}) {
        for (KernelShape shape : {KernelShape::uniform_ball, KernelShape::cosine_bump}) {
            const double eps = 0.03;
            const int k = 256;
            const double h = 1.0 / k;
            const UlamOperator op = build_ulam(m, make_kernel(shape, eps), k, 4);
            check_stochastic(op.matrix);
            const GridMeasure grid = GridMeasure::uniform(1, k);
            for (Eigen::Index i = 0; i < op.matrix.outerSize(); ++i) {
                const PhasePoint image = apply(m, grid.center(i));
                for (SparseRowMatrix::InnerIterator it(op.matrix, i); it; ++it) {
                    // cell i maps onto an arc of half-width Lip * h / 2 around the image of its center
                    CHECK(dist(image, grid.center(it.col())) <= eps + 2 * h + m.lipschitz() * h / 2);
                }
            }
        }
    }
    const UlamOperator cat = build_ulam(MapSpec::cat_map(), make_kernel(KernelShape::cosine_bump, 0.05), 32, 2);
    check_stochastic(cat.matrix);
}

TEST_CASE("noise stencil sums to one and is symmetric")
{
    for (KernelShape shape : {KernelShape::uniform_ball, KernelShape::cosine_bump}) {
        int reach = 0;
        const std::vector<double> s1 = noise_stencil(make_kernel(shape, 0.037), 1, 200, reach);
        double total = s1[0];
        for (int d = 1; d <= reach; ++d) total += 2 * s1[d];
        CHECK(total == doctest::Approx(1.0).epsilon(1e-13));

        const std::vector<double> s2 = noise_stencil(make_kernel(shape, 0.037), 2, 100, reach);
        const int w = reach + 1;
        total = 0.0;
        for (int dx = 0; dx <= reach; ++dx) {
            for (int dy = 0; dy <= reach; ++dy) {
                total += (dx ? 2 : 1) * (dy ? 2 : 1) * s2[dx * w + dy];
                CHECK(s2[dx * w + dy] == doctest::Approx(s2[dy * w + dx]).epsilon(1e-12));
            }
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("Lebesgue-preserving maps: the uniform vector is a left fixed point")
{
    const int k = 1024;
    const UlamOperator op = build_ulam(MapSpec::linear_expanding(2), uniform(0.01), k, 4);
    const Eigen::RowVectorXd u = Eigen::RowVectorXd::Constant(k, 1.0 / k);
    CHECK((u * op.matrix - u).lpNorm<1>() <= 1e-10);

    const StationaryResult r = stationary_distribution(op);
    CHECK(r.residual <= 1e-12);
    CHECK((r.density.masses().array() * k - 1.0).abs().maxCoeff() <= 1e-8);

    const StationaryResult r0 = stationary_distribution(build_ulam(MapSpec::linear_expanding(2), uniform(0.0), k, 4));
    CHECK((r0.density.masses().array() * k - 1.0).abs().maxCoeff() <= 1e-8);
}

TEST_CASE("nonlinear map: non-uniform fixed point within tolerance")
{
    const UlamOperator op = build_ulam(MapSpec::nonlinear_expanding(0.05), uniform(0.01), 1024, 4);
    const StationaryResult r = stationary_distribution(op, 1e-12);
    CHECK(r.residual <= 1e-12);
    const Eigen::RowVectorXd pi = r.density.masses().transpose();
    CHECK((pi * op.matrix - pi).lpNorm<1>() <= 1e-12);
    CHECK(r.density.masses().maxCoeff() * 1024 > 1.01);
    CHECK(r.density.masses().sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("non-convergence carries the last iterate")
{
    const UlamOperator op = build_ulam(MapSpec::nonlinear_expanding(0.1), uniform(0.01), 256, 4);
    try {
        stationary_distribution(op, 1e-14, 1);
        FAIL("expected non_convergence");
    } catch (const non_convergence& e) {
        CHECK(e.last_iterate.size() == 256);
        CHECK(e.residual > 1e-14);
    }
    CHECK_THROWS_AS(stationary_distribution(op, 0.0), usage_error);
}

TEST_CASE("Monte Carlo: doubling chain is close to Lebesgue")
{
    const MapSpec d = MapSpec::linear_expanding(2);
    const int n = 100000;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        RandomStream rng(seed, 5);
        const EmpiricalMeasure mc = monte_carlo_stationary(d, uniform(0.01), canonicalize(rng.uniform01()), 1000, n, rng);
        CHECK(mc.size() == static_cast<std::size_t>(n));
        CHECK(wasserstein1_circle(mc, LebesgueMeasure{1}) <= 3.0 / std::sqrt(double(n)));
    }
}

TEST_CASE("Monte Carlo: degenerate chain at a fixed point")
{
    RandomStream rng(1, 0);
    const EmpiricalMeasure mc = monte_carlo_stationary(MapSpec::linear_expanding(3), uniform(0.0), canonicalize(0.5), 10, 1000, rng);
    CHECK(wasserstein1_circle(mc, dirac(canonicalize(0.5))) <= 1e-15);
    CHECK_THROWS_AS(monte_carlo_stationary(MapSpec::linear_expanding(3), uniform(0.0), canonicalize(0.5), 10, 999, rng), usage_error);
}

TEST_CASE("cross-validation: doubling and nonlinear maps agree within budget, replay exactly")
{
    CrossValidationSettings s;
    s.cells = 1024;
    s.samples = 100000;
    s.burn_in = 10000;
    s.seeds = 10;
    s.master_seed = 77;
    const CrossValidationReport a = cross_validate(MapSpec::linear_expanding(2), uniform(0.02), s);
    CHECK(a.agree);
    CHECK(a.budget == doctest::Approx(2 * (1.0 / 1024 + 3.0 / std::sqrt(100000.0))));

    const CrossValidationReport b = cross_validate(MapSpec::nonlinear_expanding(0.05), uniform(0.02), s);
    CHECK(b.agree);
    for (bool ok : b.seed_ok) CHECK(ok);
    const CrossValidationReport c = cross_validate(MapSpec::nonlinear_expanding(0.05), uniform(0.02), s);
    CHECK(c.w1 == b.w1);
    CHECK(c.dict_gap == b.dict_gap);
}

TEST_CASE("refinement: W1 between k and 2k cells shrinks like 1/k")
{
    const MapSpec f = MapSpec::nonlinear_expanding(0.1);
    const NoiseKernel kern = uniform(0.02);
    std::vector<GridMeasure> dens;
    for (int k : {256, 512, 1024, 2048}) dens.push_back(stationary_distribution(build_ulam(f, kern, k, 4)).density);
    double prev = 0.0;
    for (std::size_t i = 0; i + 1 < dens.size(); ++i) {
        const double w = wasserstein1_circle(dens[i], dens[i + 1]);
        MESSAGE("k = " << dens[i].cells() << ": W1 = " << w << ", k * W1 = " << w * dens[i].cells());
        CHECK(w * dens[i].cells() <= 1e-3);
        if (i > 0) CHECK(w <= 0.75 * prev);
        prev = w;
    }
}
