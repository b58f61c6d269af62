#include "shadowlab/dynamics.hpp"
#include "shadowlab/error.hpp"
#include "shadowlab/random.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace shadowlab;

namespace {

const double two_pi = 2.0 * std::numbers::pi;

} // namespace

TEST_CASE("map construction validates parameters")
{
    CHECK_THROWS_AS(MapSpec::linear_expanding(1), usage_error);
    CHECK_THROWS_AS(MapSpec::nonlinear_expanding(1.0 / two_pi), usage_error);
    CHECK_NOTHROW(MapSpec::nonlinear_expanding(-0.15));
    const MapSpec f = MapSpec::nonlinear_expanding(0.05);
    CHECK(f.lambda() == doctest::Approx(2.0 - two_pi * 0.05));
    CHECK(f.lipschitz() == doctest::Approx(2.0 + two_pi * 0.05));
    CHECK(MapSpec::cat_map().lambda() == doctest::Approx((3.0 + std::sqrt(5.0)) / 2.0));
    CHECK(MapSpec::linear_expanding(3).degree() == 3);
    CHECK(f.degree() == 2);
    for (const MapSpec& m : {MapSpec::linear_expanding(2), f, MapSpec::cat_map()}) CHECK(m.lambda() > 1.0);
}

TEST_CASE("apply on the examples")
{
    const MapSpec d = MapSpec::linear_expanding(2);
    CHECK(apply(d, canonicalize(0.3))[0] == doctest::Approx(0.6));
    CHECK(apply(d, canonicalize(0.75))[0] == 0.5);
    const PhasePoint c = apply(MapSpec::cat_map(), canonicalize(0.5, 0.5));
    CHECK(c[0] == 0.5);
    CHECK(c[1] == 0.0);
}

TEST_CASE("orbit")
{
    const MapSpec d = MapSpec::linear_expanding(2);
    const Sequence o = orbit(d, canonicalize(0.1), 3);
    REQUIRE(o.size() == 4);
    const double want[] = {0.1, 0.2, 0.4, 0.8};
    for (int j = 0; j < 4; ++j) CHECK(o[j][0] == doctest::Approx(want[j]).epsilon(1e-15));

    const Sequence single = orbit(MapSpec::cat_map(), canonicalize(0.3, 0.7), 0);
    REQUIRE(single.size() == 1);
    CHECK(single[0] == canonicalize(0.3, 0.7));

    const Sequence nl = orbit(MapSpec::nonlinear_expanding(0.05), canonicalize(0.25), 1);
    CHECK(nl[1][0] == doctest::Approx(2 * 0.25 + 0.05 * std::sin(two_pi * 0.25)).epsilon(1e-15));
    CHECK(nl[1][0] == doctest::Approx(0.55).epsilon(1e-15));
}

TEST_CASE("inverse branches of the doubling map")
{
    const MapSpec d = MapSpec::linear_expanding(2);
    CHECK(inverse_branch(d, canonicalize(0.6), 0)[0] == doctest::Approx(0.3));
    CHECK(inverse_branch(d, canonicalize(0.6), 1)[0] == doctest::Approx(0.8));
    CHECK(inverse_branch(d, canonicalize(0.0), 0)[0] == 0.0);
    CHECK_THROWS_AS(inverse_branch(d, canonicalize(0.6), 2), usage_error);
    CHECK_THROWS_AS(inverse_branch(d, canonicalize(0.6), -1), usage_error);
    CHECK_THROWS_AS(inverse_branch(MapSpec::cat_map(), canonicalize(0.1, 0.1), 0), usage_error);
}

TEST_CASE("nonlinear inverse branch recovers the forward image")
{
    const MapSpec f = MapSpec::nonlinear_expanding(0.05);
    const PhasePoint x = inverse_branch(f, canonicalize(0.55), 0);
    CHECK(x[0] == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(dist(apply(f, x), canonicalize(0.55)) <= 1e-12);
}

TEST_CASE("nearest inverse branch and ties")
{
    const MapSpec d = MapSpec::linear_expanding(2);
    BranchChoice c = nearest_inverse_branch(d, canonicalize(0.6), canonicalize(0.28));
    CHECK(c.point[0] == doctest::Approx(0.3));
    CHECK_FALSE(c.tie);
    c = nearest_inverse_branch(d, canonicalize(0.6), canonicalize(0.79));
    CHECK(c.point[0] == doctest::Approx(0.8));
    CHECK(c.branch == 1);
    c = nearest_inverse_branch(d, canonicalize(0.0), canonicalize(0.25));
    CHECK(c.point[0] == 0.0);
    CHECK(c.branch == 0);
    CHECK(c.tie);
}

TEST_CASE("property: every inverse branch maps back onto y")
{
    RandomStream rng(3, 0);
    for (const MapSpec& m : {MapSpec::linear_expanding(2), MapSpec::linear_expanding(5),
                             MapSpec::nonlinear_expanding(0.05), MapSpec::nonlinear_expanding(-0.15)}) {
        for (int i = 0; i < 2000; ++i) {
            const PhasePoint y = canonicalize(rng.uniform01());
            for (int b = 0; b < m.degree(); ++b) {
                const PhasePoint x = inverse_branch(m, y, b);
                CHECK(dist(apply(m, x), y) <= 1e-12);
                CHECK(lap_index(m, x) == b);
            }
        }
    }
}

TEST_CASE("property: expansion on short arcs within a lap")
{
    RandomStream rng(4, 0);
    for (const MapSpec& m : {MapSpec::linear_expanding(3), MapSpec::nonlinear_expanding(0.1)}) {
        for (int i = 0; i < 5000; ++i) {
            const PhasePoint a = canonicalize(rng.uniform01());
            const PhasePoint b = canonicalize(a[0] + rng.uniform(-1.0, 1.0) * 0.25 / m.degree() / m.lipschitz());
            if (lap_index(m, a) != lap_index(m, b)) continue;
            CHECK(dist(apply(m, a), apply(m, b)) >= m.lambda() * dist(a, b) - 1e-12);
        }
    }
}

TEST_CASE("typical orbit of the doubling map does not collapse")
{
    RandomStream rng(5, 0);
    const Sequence o = typical_orbit(MapSpec::linear_expanding(2), 10000, rng);
    REQUIRE(o.size() == 10001);
    int zeros = 0;
    double mean = 0.0;
    for (const PhasePoint& p : o) {
        zeros += p[0] == 0.0;
        mean += p[0];
    }
    CHECK(zeros == 0);
    CHECK(mean / o.size() == doctest::Approx(0.5).epsilon(0.02));
    // consecutive points are images of each other up to the final rounding
    for (std::size_t j = 0; j + 1 < o.size(); ++j) CHECK(dist(apply(MapSpec::linear_expanding(2), o[j]), o[j + 1]) <= 1e-15);
}
