#pragma once

#include "shadowlab/dynamics.hpp"
#include "shadowlab/phase_space.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace shadowlab {

/// Finite-horizon true orbit (z_0..z_n) near a pseudo-orbit (x_0..x_n).
///
/// Stored as the full sequence rather than z_0 alone: forward iteration of z_0
/// in double would drift off the orbit within a few dozen steps, so the orbit
/// property is certified through `consistency` instead.
struct ShadowOrbit {
    Sequence points;
    double shadow_distance = 0.0;          ///< max_j d(z_j, x_j)
    double consistency = 0.0;              ///< max_j d(f(z_j), z_{j+1})
    std::vector<int> branch_itinerary;     ///< expanding maps: branch of z_j, j < n
    bool degraded = false;                 ///< a branch tie was broken
};

/// Consistency threshold for calling a sequence a true orbit.
inline constexpr double orbit_tolerance = 1e-10;

/// Pullback shadowing for circle-expanding maps: z_n = x_n, then
/// z_j = preimage of z_{j+1} nearest x_j. With delta the input's max gap,
/// d(z_j, x_j) <= delta * sum_{k=1}^{n-j} lambda^-k < delta / (lambda - 1).
/// Requires delta / (lambda - 1) < 0.25 / degree so the branch choice is unambiguous.
ShadowOrbit shadow_expanding(const MapSpec& map, std::span<const PhasePoint> pseudo);

/// Eigen-splitting of the cat map's linear part.
struct HyperbolicSplitting {
    Eigen::Matrix2d basis;     ///< columns: unstable, stable eigenvector
    Eigen::Matrix2d inverse;   ///< basis^-1
    double lambda_u = 0.0;
    double lambda_s = 0.0;
    double condition = 1.0;    ///< ||basis|| * ||basis^-1|| (spectral norms)
    /// C_A = (1/(lambda_u - 1) + 1/(1 - lambda_s)) * condition
    double shadowing_constant = 0.0;
};

HyperbolicSplitting hyperbolic_splitting(const Eigen::Matrix2d& a);

/// Solves e_{j+1} = A e_j + r_j, j < n, for (e_0..e_n): the stable component
/// summed forward from e^s_0 = 0, the unstable one backward from e^u_n = 0.
/// Linear in the defects.
std::vector<Eigen::Vector2d> hyperbolic_corrections(const HyperbolicSplitting& split,
                                                    std::span<const Eigen::Vector2d> defects);

/// Defects r_j = lift(f(x_j) - x_{j+1}) of a torus pseudo-orbit, so that
/// z_j = x_j + e_j is an orbit iff e_{j+1} = A e_j + r_j.
std::vector<Eigen::Vector2d> cat_defects(const MapSpec& map, std::span<const PhasePoint> pseudo);

/// Shadowing for the cat map; shadow_distance <= C_A * max ||r_j||.
ShadowOrbit shadow_cat_map(const MapSpec& map, std::span<const PhasePoint> pseudo);

/// Dispatches on the map family.
ShadowOrbit shadow(const MapSpec& map, std::span<const PhasePoint> pseudo);

struct Certificate {
    double shadow_distance = 0.0;
    double consistency = 0.0;
    bool pass = false;
};

/// Recomputes both maxima from the raw sequences. pass iff
/// shadow_distance < epsilon and consistency <= orbit_tolerance.
Certificate certify(const MapSpec& map, std::span<const PhasePoint> pseudo, std::span<const PhasePoint> shadow,
                    double epsilon);

/// delta(eps) = eps / C: pseudo-orbits with gaps <= delta(eps) are eps-shadowed
/// by the solvers above. C = lambda/(lambda-1) for expanding maps, C_A for the cat map.
struct ShadowingModulus {
    MapFamily family = MapFamily::linear_expanding;
    double constant = 1.0;

    double operator()(double epsilon) const { return epsilon / constant; }
    /// Inverse: shadowing accuracy guaranteed for a delta-pseudo-orbit.
    double accuracy(double delta) const { return delta * constant; }
};

ShadowingModulus shadowing_modulus(const MapSpec& map);

} // namespace shadowlab
