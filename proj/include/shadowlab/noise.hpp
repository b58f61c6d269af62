#pragma once

#include "shadowlab/dynamics.hpp"
#include "shadowlab/phase_space.hpp"
#include "shadowlab/random.hpp"

#include <cstddef>
#include <span>
#include <string>

namespace shadowlab {

enum class KernelShape { uniform_ball, cosine_bump };

std::string to_string(KernelShape shape);
KernelShape parse_kernel_shape(const std::string& name);

/// Transition kernel P_eps(.|x): an absolutely continuous law supported in the
/// closed ball of radius epsilon about f(x). Densities are radial:
///   uniform-ball  constant on the ball
///   cosine-bump   proportional to 1 + cos(pi r / epsilon)
/// epsilon = 0 is the degenerate (deterministic) kernel, meant for oracle runs.
struct NoiseKernel {
    KernelShape shape = KernelShape::uniform_ball;
    double epsilon = 0.0;
};

/// Validates 0 <= epsilon < 0.25.
NoiseKernel make_kernel(KernelShape shape, double epsilon);

/// Density (w.r.t. Lebesgue on S^1 or T^2) at distance r from the ball center.
double radial_density(const NoiseKernel& kernel, int dim, double r);
/// Density of P_eps(.|x) at y.
double transition_density(const NoiseKernel& kernel, const MapSpec& map, const PhasePoint& x, const PhasePoint& y);

/// Circle kernels only: CDF of the signed offset t = y - f(x).
double offset_cdf(const NoiseKernel& kernel, double t);
/// Circle kernels only: integral of offset_cdf from -infinity to s, i.e. E[(s - T)^+].
double offset_ramp(const NoiseKernel& kernel, double s);

/// Draw x_{j+1} ~ P_eps(.|x_j). The result satisfies dist(result, f(x)) <= epsilon exactly.
PhasePoint sample_step(const NoiseKernel& kernel, const MapSpec& map, const PhasePoint& x, RandomStream& rng);

struct RandomOrbit {
    Sequence points;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    NoiseKernel kernel;
};

RandomOrbit random_orbit(const NoiseKernel& kernel, const MapSpec& map, const PhasePoint& x0, int n, RandomStream& rng);

struct PseudoOrbitCheck {
    bool valid = true;
    double max_gap = 0.0;
    std::size_t worst_index = 0;
};

/// max_j d(f(x_j), x_{j+1}) against delta.
PseudoOrbitCheck verify_pseudo_orbit(const MapSpec& map, std::span<const PhasePoint> seq, double delta);

} // namespace shadowlab
