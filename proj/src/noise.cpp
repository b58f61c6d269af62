#include "shadowlab/noise.hpp"

#include "shadowlab/error.hpp"

#include <cmath>
#include <numbers>

namespace shadowlab {

using std::numbers::pi;

std::string to_string(KernelShape shape)
{
    return shape == KernelShape::uniform_ball ? "uniform-ball" : "cosine-bump";
}

KernelShape parse_kernel_shape(const std::string& name)
{
    if (name == "uniform-ball") return KernelShape::uniform_ball;
    if (name == "cosine-bump") return KernelShape::cosine_bump;
    throw usage_error("unknown kernel shape '" + name + "'");
}

NoiseKernel make_kernel(KernelShape shape, double epsilon)
{
    if (!std::isfinite(epsilon) || epsilon < 0.0 || epsilon >= 0.25) {
        throw usage_error("kernel radius must satisfy 0 <= epsilon < 0.25");
    }
    return {shape, epsilon};
}

double radial_density(const NoiseKernel& kernel, int dim, double r)
{
    const double eps = kernel.epsilon;
    if (eps <= 0.0) throw usage_error("radial_density: degenerate kernel has no density");
    if (r > eps) return 0.0;
    if (kernel.shape == KernelShape::uniform_ball) {
        return dim == 1 ? 1.0 / (2.0 * eps) : 1.0 / (pi * eps * eps);
    }
    const double bump = 1.0 + std::cos(pi * r / eps);
    // Normalizers: int_{-e}^{e} (1 + cos(pi t/e)) dt = 2e,
    // int_0^e (1 + cos(pi r/e)) 2 pi r dr = e^2 (pi - 4/pi).
    return dim == 1 ? bump / (2.0 * eps) : bump / (eps * eps * (pi - 4.0 / pi));
}

double transition_density(const NoiseKernel& kernel, const MapSpec& map, const PhasePoint& x, const PhasePoint& y)
{
    return radial_density(kernel, map.dim(), dist(apply(map, x), y));
}

double offset_cdf(const NoiseKernel& kernel, double t)
{
    const double eps = kernel.epsilon;
    if (eps <= 0.0) return t >= 0.0 ? 1.0 : 0.0;
    if (t <= -eps) return 0.0;
    if (t >= eps) return 1.0;
    if (kernel.shape == KernelShape::uniform_ball) return (t + eps) / (2.0 * eps);
    return (t + eps + eps / pi * std::sin(pi * t / eps)) / (2.0 * eps);
}

double offset_ramp(const NoiseKernel& kernel, double s)
{
    const double eps = kernel.epsilon;
    if (eps <= 0.0) return std::max(s, 0.0);
    if (s <= -eps) return 0.0;
    // the offset has mean zero
    if (s >= eps) return s;
    const double u = s + eps;
    if (kernel.shape == KernelShape::uniform_ball) return u * u / (4.0 * eps);
    return (0.5 * u * u - eps * eps / (pi * pi) * (std::cos(pi * s / eps) + 1.0)) / (2.0 * eps);
}

namespace {

Eigen::Vector2d sample_offset(const NoiseKernel& kernel, int dim, RandomStream& rng)
{
    const double eps = kernel.epsilon;
    for (;;) {
        Eigen::Vector2d t(rng.uniform(-eps, eps), dim == 2 ? rng.uniform(-eps, eps) : 0.0);
        const double r = t.norm();
        if (r > eps) continue;
        if (kernel.shape == KernelShape::cosine_bump) {
            // accept with probability (1 + cos(pi r/e)) / 2
            if (2.0 * rng.uniform01() >= 1.0 + std::cos(pi * r / eps)) continue;
        }
        return t;
    }
}

} // namespace

PhasePoint sample_step(const NoiseKernel& kernel, const MapSpec& map, const PhasePoint& x, RandomStream& rng)
{
    if (kernel.epsilon < 0.0 || kernel.epsilon >= 0.25) throw usage_error("sample_step: epsilon out of range");
    const PhasePoint center = apply(map, x);
    if (kernel.epsilon == 0.0) return center;
    for (;;) {
        PhasePoint y = canonicalize(center.coords() + sample_offset(kernel, map.dim(), rng), map.dim());
        // rounding in the mod-1 reduction can push a boundary draw just outside
        if (dist(center, y) <= kernel.epsilon) return y;
    }
}

RandomOrbit random_orbit(const NoiseKernel& kernel, const MapSpec& map, const PhasePoint& x0, int n, RandomStream& rng)
{
    if (n < 1) throw usage_error("random_orbit: n must be at least 1");
    if (x0.dim() != map.dim()) throw usage_error("random_orbit: x0 dimension does not match map");
    RandomOrbit out;
    out.seed = rng.master_seed();
    out.stream = rng.stream_id();
    out.kernel = kernel;
    out.points.reserve(static_cast<std::size_t>(n) + 1);
    out.points.push_back(x0);
    for (int j = 0; j < n; ++j) out.points.push_back(sample_step(kernel, map, out.points.back(), rng));
    return out;
}

PseudoOrbitCheck verify_pseudo_orbit(const MapSpec& map, std::span<const PhasePoint> seq, double delta)
{
    if (seq.size() < 2) throw usage_error("verify_pseudo_orbit: need at least two points");
    PseudoOrbitCheck out;
    for (std::size_t j = 0; j + 1 < seq.size(); ++j) {
        const double gap = dist(apply(map, seq[j]), seq[j + 1]);
        if (gap > out.max_gap) {
            out.max_gap = gap;
            out.worst_index = j;
        }
    }
    out.valid = out.max_gap <= delta;
    return out;
}

} // namespace shadowlab
