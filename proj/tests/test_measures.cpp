#include "shadowlab/dynamics.hpp"
#include "shadowlab/error.hpp"
#include "shadowlab/measures.hpp"
#include "shadowlab/random.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

using namespace shadowlab;

namespace {

const double two_pi = 2.0 * std::numbers::pi;

// exhaustive assignment between equal-size, equal-weight atom sets on the circle
double brute_force_w1(const std::vector<double>& a, const std::vector<double>& b)
{
    std::vector<int> perm(b.size());
    std::iota(perm.begin(), perm.end(), 0);
    double best = 1e300;
    do {
        double cost = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double d = std::abs(a[i] - b[perm[i]]);
            cost += std::min(d, 1.0 - d);
        }
        best = std::min(best, cost / a.size());
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

EmpiricalMeasure atoms_of(const std::vector<double>& xs)
{
    Sequence s;
    for (double x : xs) s.push_back(canonicalize(x));
    return empirical_from_sequence(s);
}

EmpiricalMeasure random_measure(RandomStream& rng, int n)
{
    Sequence s;
    std::vector<double> w;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        s.push_back(canonicalize(rng.uniform01()));
        w.push_back(0.1 + rng.uniform01());
        total += w.back();
    }
    for (double& v : w) v /= total;
    return EmpiricalMeasure(s, w);
}

} // namespace

TEST_CASE("observable constants")
{
    const Observable c = Observable::cosine(3);
    CHECK(c.lip_const() == doctest::Approx(two_pi * 3));
    CHECK(c.sup_bound() == 1.0);
    CHECK(std::abs(c(canonicalize(0.25 / 3))) <= 1e-15);
    const Observable t(2, 0.5, {{1, -2, 0.3, -0.4}}, "mixed");
    CHECK(t.lip_const() == doctest::Approx(two_pi * std::sqrt(5.0) * 0.7));
    CHECK(t.sup_bound() == doctest::Approx(1.2));
}

TEST_CASE("property: sampled observables respect their sup and Lipschitz bounds")
{
    RandomStream rng(61, 0);
    for (int dim : {1, 2}) {
        for (const Observable& phi : standard_dictionary(dim)) {
            for (int i = 0; i < 200; ++i) {
                const PhasePoint x = dim == 1 ? canonicalize(rng.uniform01()) : canonicalize(rng.uniform01(), rng.uniform01());
                const PhasePoint y = dim == 1 ? canonicalize(rng.uniform01()) : canonicalize(rng.uniform01(), rng.uniform01());
                CHECK(std::abs(phi(x)) <= phi.sup_bound() + 1e-12);
                CHECK(std::abs(phi(x) - phi(y)) <= phi.lip_const() * dist(x, y) + 1e-12);
            }
        }
    }
}

TEST_CASE("standard dictionary sizes")
{
    CHECK(standard_dictionary(1).size() == 17);
    // (9 * 9 - 1) / 2 wave vectors, cos and sin each, plus the constant
    CHECK(standard_dictionary(2).size() == 81);
    CHECK(standard_dictionary(1, 3).size() == 7);
}

TEST_CASE("empirical measures")
{
    const EmpiricalMeasure m = atoms_of({0.1, 0.2});
    REQUIRE(m.size() == 2);
    CHECK(m.weights()[0] == 0.5);
    CHECK(m.atoms()[1][0] == 0.2);
    const EmpiricalMeasure d = atoms_of({0.7});
    CHECK(d.weights()[0] == 1.0);
    CHECK_THROWS_AS(EmpiricalMeasure({canonicalize(0.1)}, {0.9}), usage_error);
    CHECK_THROWS_AS(EmpiricalMeasure({canonicalize(0.1), canonicalize(0.2)}, {1.5, -0.5}), usage_error);
    CHECK_THROWS_AS(empirical_from_sequence(Sequence{}), usage_error);

    const MapSpec f = MapSpec::nonlinear_expanding(0.05);
    const Sequence o = orbit(f, canonicalize(0.3), 20);
    const Observable phi = Observable::sine(2);
    double sum = 0.0;
    for (const PhasePoint& p : o) sum += phi(p);
    CHECK(integrate(empirical_from_sequence(o), phi) == doctest::Approx(sum / 21));
}

TEST_CASE("integration examples")
{
    CHECK(integrate(LebesgueMeasure{1}, Observable::cosine(1)) == 0.0);
    CHECK(std::abs(integrate(dirac(canonicalize(0.25)), Observable::cosine(1))) <= 1e-15);
    CHECK(integrate(GridMeasure::uniform(1, 64), Observable::constant(1)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(integrate(GridMeasure::uniform(2, 16), Observable::constant(2)) == doctest::Approx(1.0).epsilon(1e-15));
    const Observable poly(1, 0.37, {{1, 0, 0.2, 0.1}, {5, 0, -0.3, 0.0}});
    CHECK(integrate(LebesgueMeasure{1}, poly) == 0.37);
    CHECK_THROWS_AS(integrate(LebesgueMeasure{2}, poly), usage_error);
}

TEST_CASE("birkhoff averages")
{
    const MapSpec d = MapSpec::linear_expanding(2);
    const Observable phi = Observable::cosine(1);
    CHECK(birkhoff_average(d, canonicalize(0.3), 0, phi) == doctest::Approx(phi(canonicalize(0.3))));
    for (int n : {0, 1, 10, 1000}) CHECK(birkhoff_average(d, canonicalize(0.0), n, phi) == 1.0);
    const MapSpec f = MapSpec::nonlinear_expanding(0.1);
    const Sequence o = orbit(f, canonicalize(0.61), 40);
    CHECK(birkhoff_average(f, canonicalize(0.61), 40, phi) == doctest::Approx(integrate(empirical_from_sequence(o), phi)).epsilon(1e-14));

    // plain double iteration of the doubling map collapses to 0, so the orbit comes from typical_orbit
    RandomStream rng(62, 0);
    const Sequence typical = typical_orbit(d, 1000000, rng);
    CHECK(std::abs(birkhoff_average(typical, phi)) <= 5e-3);
    const std::vector<Observable> dict = standard_dictionary(1);
    CHECK(dictionary_gap(LebesgueMeasure{1}, empirical_from_sequence(typical), dict).max_gap <= 5e-3);
}

TEST_CASE("W1 on the circle: closed-form cases")
{
    const EmpiricalMeasure a = atoms_of({0.1, 0.35, 0.8});
    CHECK(wasserstein1_circle(a, a) == 0.0);
    CHECK(wasserstein1_circle(dirac(canonicalize(0.0)), dirac(canonicalize(0.5))) == doctest::Approx(0.5));
    CHECK(wasserstein1_circle(dirac(canonicalize(0.05)), dirac(canonicalize(0.95))) == doctest::Approx(0.1));
    // int_0^1 min(t, 1 - t) dt
    CHECK(wasserstein1_circle(dirac(canonicalize(0.0)), LebesgueMeasure{1}) == doctest::Approx(0.25));
    CHECK(wasserstein1_circle(GridMeasure::uniform(1, 128), LebesgueMeasure{1}) <= 1e-15);
    // cell mass spread over a width-h cell: W1 against its center is h/4
    Eigen::VectorXd m = Eigen::VectorXd::Zero(16);
    m(3) = 1.0;
    const GridMeasure cell(1, 16, m);
    CHECK(wasserstein1_circle(cell, dirac(cell.center(3))) == doctest::Approx(1.0 / 64));
}

TEST_CASE("W1 matches exhaustive assignment")
{
    RandomStream rng(63, 0);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(6));
        std::vector<double> a(n), b(n);
        for (double& x : a) x = rng.uniform01();
        for (double& x : b) x = rng.uniform01();
        CHECK(wasserstein1_circle(atoms_of(a), atoms_of(b)) == doctest::Approx(brute_force_w1(a, b)).epsilon(1e-10));
    }
}

TEST_CASE("property: W1 is a metric and dominates Lipschitz gaps")
{
    RandomStream rng(64, 0);
    const std::vector<Observable> dict = standard_dictionary(1);
    for (int trial = 0; trial < 300; ++trial) {
        const EmpiricalMeasure a = random_measure(rng, 1 + static_cast<int>(rng.below(12)));
        const EmpiricalMeasure b = random_measure(rng, 1 + static_cast<int>(rng.below(12)));
        const EmpiricalMeasure c = random_measure(rng, 1 + static_cast<int>(rng.below(12)));
        const double ab = wasserstein1_circle(a, b);
        CHECK(ab == doctest::Approx(wasserstein1_circle(b, a)).epsilon(1e-12));
        CHECK(wasserstein1_circle(a, c) <= ab + wasserstein1_circle(b, c) + 1e-10);
        CHECK(ab > 0.0);
        CHECK(wasserstein1_circle(a, a) <= 1e-15);
        for (const Observable& phi : dict) CHECK(std::abs(integrate(a, phi) - integrate(b, phi)) <= phi.lip_const() * ab + 1e-12);
    }
}

TEST_CASE("dictionary gap")
{
    const std::vector<Observable> dict = standard_dictionary(1);
    const EmpiricalMeasure a = atoms_of({0.2, 0.9});
    const DictionaryGap same = dictionary_gap(a, a, dict);
    CHECK(same.max_gap == 0.0);
    for (double g : same.raw) CHECK(g == 0.0);

    const std::vector<Observable> cos1{Observable::cosine(1)};
    const double x = 0.13;
    const DictionaryGap g = dictionary_gap(dirac(canonicalize(0.0)), dirac(canonicalize(x)), cos1);
    CHECK(g.raw[0] == doctest::Approx(std::abs(1.0 - std::cos(two_pi * x))));
    CHECK(g.normalized[0] == doctest::Approx(g.raw[0] / (two_pi + 1.0)));

    RandomStream rng(65, 0);
    for (int trial = 0; trial < 50; ++trial) {
        const EmpiricalMeasure p = random_measure(rng, 5), q = random_measure(rng, 7);
        const double small = dictionary_gap(p, q, standard_dictionary(1, 3)).max_gap;
        CHECK(dictionary_gap(p, q, standard_dictionary(1, 8)).max_gap >= small);
    }
    CHECK_THROWS_AS(dictionary_gap(a, a, std::vector<Observable>{}), usage_error);
}

TEST_CASE("grid cells and centers")
{
    const GridMeasure g = GridMeasure::uniform(2, 8);
    CHECK(g.size() == 64);
    CHECK(g.cell_of(canonicalize(0.3, 0.9)) == 2 * 8 + 7);
    CHECK(g.center(2 * 8 + 7)[1] == doctest::Approx(0.9375));
    Eigen::VectorXd bad = Eigen::VectorXd::Constant(16, 1.0 / 8);
    CHECK_THROWS_AS(GridMeasure(1, 16, bad), usage_error);
}
