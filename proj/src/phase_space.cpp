#include "shadowlab/phase_space.hpp"

#include "shadowlab/error.hpp"

#include <cmath>

namespace shadowlab {

SpaceDescriptor circle() { return {1, 0.5}; }
SpaceDescriptor torus() { return {2, std::sqrt(0.5)}; }

SpaceDescriptor space_of_dim(int dim)
{
    if (dim == 1) return circle();
    if (dim == 2) return torus();
    throw usage_error("phase space dimension must be 1 or 2");
}

double wrap_unit(double x)
{
    if (!std::isfinite(x)) throw usage_error("non-finite coordinate");
    double r = x - std::floor(x);
    // x slightly below an integer can round up to exactly 1
    return r >= 1.0 ? 0.0 : r;
}

double wrap_centered(double x)
{
    double r = wrap_unit(x);
    return r >= 0.5 ? r - 1.0 : r;
}

PhasePoint canonicalize(double x) { return PhasePoint(1, Eigen::Vector2d(wrap_unit(x), 0.0)); }

PhasePoint canonicalize(double x, double y)
{
    return PhasePoint(2, Eigen::Vector2d(wrap_unit(x), wrap_unit(y)));
}

PhasePoint canonicalize(const Eigen::Vector2d& v, int dim)
{
    if (dim == 1) return canonicalize(v[0]);
    if (dim == 2) return canonicalize(v[0], v[1]);
    throw usage_error("phase space dimension must be 1 or 2");
}

PhasePoint canonicalize(std::span<const double> coords)
{
    if (coords.size() == 1) return canonicalize(coords[0]);
    if (coords.size() == 2) return canonicalize(coords[0], coords[1]);
    throw usage_error("a phase point has 1 or 2 coordinates");
}

namespace {

double circle_gap(double a, double b)
{
    double t = std::abs(a - b);
    return std::min(t, 1.0 - t);
}

} // namespace

double dist(const PhasePoint& a, const PhasePoint& b)
{
    if (a.dim() != b.dim()) throw usage_error("dist: dimension mismatch");
    if (a.dim() == 1) return circle_gap(a[0], b[0]);
    return std::hypot(circle_gap(a[0], b[0]), circle_gap(a[1], b[1]));
}

double dist(const SpaceDescriptor& space, const PhasePoint& a, const PhasePoint& b)
{
    if (a.dim() != space.dimension || b.dim() != space.dimension) {
        throw usage_error("dist: point does not belong to this space");
    }
    return dist(a, b);
}

Eigen::Vector2d displacement(const PhasePoint& a, const PhasePoint& b)
{
    if (a.dim() != b.dim()) throw usage_error("displacement: dimension mismatch");
    Eigen::Vector2d d(wrap_centered(b[0] - a[0]), 0.0);
    if (a.dim() == 2) d[1] = wrap_centered(b[1] - a[1]);
    return d;
}

} // namespace shadowlab
