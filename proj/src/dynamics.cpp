#include "shadowlab/dynamics.hpp"

#include "shadowlab/error.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <numbers>

namespace shadowlab {

using std::numbers::pi;

MapSpec MapSpec::linear_expanding(int k)
{
    if (k < 2) throw usage_error("linear-expanding map needs integer k >= 2");
    MapSpec m;
    m.family_ = MapFamily::linear_expanding;
    m.k_ = k;
    m.lambda_ = k;
    m.lipschitz_ = k;
    return m;
}

MapSpec MapSpec::nonlinear_expanding(double a)
{
    if (!std::isfinite(a) || !(std::abs(a) < 1.0 / (2.0 * pi))) {
        throw usage_error("nonlinear-expanding map needs |a| < 1/(2 pi)");
    }
    MapSpec m;
    m.family_ = MapFamily::nonlinear_expanding;
    m.a_ = a;
    m.lambda_ = 2.0 - 2.0 * pi * std::abs(a);
    m.lipschitz_ = 2.0 + 2.0 * pi * std::abs(a);
    return m;
}

MapSpec MapSpec::cat_map()
{
    MapSpec m;
    m.family_ = MapFamily::cat_map;
    m.matrix_ << 2.0, 1.0, 1.0, 1.0;
    m.lambda_ = (3.0 + std::sqrt(5.0)) / 2.0;
    // A is symmetric, so its operator norm is the largest eigenvalue
    m.lipschitz_ = m.lambda_;
    return m;
}

int MapSpec::degree() const
{
    switch (family_) {
    case MapFamily::linear_expanding: return k_;
    case MapFamily::nonlinear_expanding: return 2;
    case MapFamily::cat_map: return 0;
    }
    return 0;
}

std::string MapSpec::name() const
{
    switch (family_) {
    case MapFamily::linear_expanding: return "linear-expanding";
    case MapFamily::nonlinear_expanding: return "nonlinear-expanding";
    case MapFamily::cat_map: return "cat-map";
    }
    return "unknown";
}

double lifted(const MapSpec& map, double x)
{
    if (map.family() == MapFamily::linear_expanding) return map.k() * x;
    return 2.0 * x + map.a() * std::sin(2.0 * pi * x);
}

double lifted_derivative(const MapSpec& map, double x)
{
    if (map.family() == MapFamily::linear_expanding) return map.k();
    return 2.0 + 2.0 * pi * map.a() * std::cos(2.0 * pi * x);
}

Eigen::Vector2d lifted(const MapSpec& map, const Eigen::Vector2d& v) { return map.matrix() * v; }

PhasePoint apply(const MapSpec& map, const PhasePoint& p)
{
    if (p.dim() != map.dim()) throw usage_error("apply: point dimension does not match map");
    if (map.family() == MapFamily::cat_map) return canonicalize(lifted(map, p.coords()), 2);
    return canonicalize(lifted(map, p[0]));
}

Sequence orbit(const MapSpec& map, const PhasePoint& z0, int n)
{
    if (n < 0) throw usage_error("orbit: n must be nonnegative");
    Sequence out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    out.push_back(z0);
    for (int j = 0; j < n; ++j) out.push_back(apply(map, out.back()));
    return out;
}

int lap_index(const MapSpec& map, const PhasePoint& x)
{
    if (!map.is_circle_map()) throw usage_error("lap_index: circle maps only");
    int lap = static_cast<int>(std::floor(lifted(map, x[0])));
    return std::clamp(lap, 0, map.degree() - 1);
}

namespace {

// Solves F(x) = target on [0,1) for the monotone lift F of the nonlinear
// family: Newton steps kept inside a shrinking bracket, bisection otherwise.
double solve_lift(const MapSpec& map, double target)
{
    constexpr double tol = 1e-14;
    const double slack = std::abs(map.a());
    double lo = std::max(0.0, (target - slack) / 2.0);
    double hi = std::min(1.0, (target + slack) / 2.0);
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double r = lifted(map, x) - target;
        if (r == 0.0) return x;
        if (r > 0.0) hi = x;
        else lo = x;
        double next = x - r / lifted_derivative(map, x);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= tol || hi - lo <= tol) return next;
        x = next;
    }
    throw numerical_error("inverse_branch: root finder did not converge");
}

} // namespace

PhasePoint inverse_branch(const MapSpec& map, const PhasePoint& y, int branch)
{
    if (!map.is_circle_map()) throw usage_error("inverse_branch: circle maps only");
    if (y.dim() != 1) throw usage_error("inverse_branch: point must lie on the circle");
    if (branch < 0 || branch >= map.degree()) throw usage_error("inverse_branch: branch out of range");
    const double target = y[0] + branch;
    if (map.family() == MapFamily::linear_expanding) return canonicalize(target / map.k());
    return canonicalize(solve_lift(map, target));
}

BranchChoice nearest_inverse_branch(const MapSpec& map, const PhasePoint& y, const PhasePoint& anchor)
{
    BranchChoice best;
    double best_d = std::numeric_limits<double>::infinity();
    for (int b = 0; b < map.degree(); ++b) {
        PhasePoint x = inverse_branch(map, y, b);
        double d = dist(x, anchor);
        if (d < best_d - 4.0 * std::numeric_limits<double>::epsilon()) {
            best = {x, b, false};
            best_d = d;
        } else if (std::abs(d - best_d) <= 4.0 * std::numeric_limits<double>::epsilon()) {
            best.tie = true;
        }
    }
    return best;
}

namespace {

Sequence digit_window_orbit(const MapSpec& map, int n, RandomStream& rng)
{
    const std::uint64_t k = static_cast<std::uint64_t>(map.k());
    // Window of L digits with k^L <= 2^63.
    int len = 0;
    std::uint64_t top = 1; // k^(L-1)
    std::uint64_t scale = 1; // k^L
    while (scale <= (std::uint64_t{1} << 63) / k) {
        scale *= k;
        ++len;
    }
    top = scale / k;

    std::deque<std::uint64_t> digits;
    std::uint64_t window = 0;
    for (int i = 0; i < len; ++i) {
        std::uint64_t d = rng.below(k);
        digits.push_back(d);
        window = window * k + d;
    }
    const double inv_scale = 1.0 / static_cast<double>(scale);

    Sequence out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) {
        // Lower-order digits beyond the window only shift x by < k^-L.
        out.push_back(canonicalize(static_cast<double>(window) * inv_scale));
        std::uint64_t d = rng.below(k);
        window = (window - digits.front() * top) * k + d;
        digits.pop_front();
        digits.push_back(d);
    }
    return out;
}

} // namespace

Sequence typical_orbit(const MapSpec& map, int n, RandomStream& rng)
{
    if (n < 0) throw usage_error("typical_orbit: n must be nonnegative");
    if (map.family() == MapFamily::linear_expanding) return digit_window_orbit(map, n, rng);
    PhasePoint z0 = map.dim() == 1 ? canonicalize(rng.uniform01()) : canonicalize(rng.uniform01(), rng.uniform01());
    return orbit(map, z0, n);
}

} // namespace shadowlab
