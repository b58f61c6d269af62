#pragma once

#include "shadowlab/phase_space.hpp"
#include "shadowlab/random.hpp"

#include <Eigen/Core>

#include <string>

namespace shadowlab {

enum class MapFamily { linear_expanding, nonlinear_expanding, cat_map };

/// One of three maps with the shadowing property:
///   linear-expanding     x -> k x mod 1 on S^1, integer k >= 2
///   nonlinear-expanding  x -> 2x + a sin(2 pi x) mod 1 on S^1, |a| < 1/(2 pi)
///   cat-map              v -> [[2,1],[1,1]] v mod 1 on T^2
/// Immutable once constructed.
class MapSpec {
public:
    static MapSpec linear_expanding(int k);
    static MapSpec nonlinear_expanding(double a);
    static MapSpec cat_map();

    MapFamily family() const { return family_; }
    int k() const { return k_; }
    double a() const { return a_; }
    int dim() const { return family_ == MapFamily::cat_map ? 2 : 1; }
    /// Number of inverse branches (circle maps only; 0 for the cat map).
    int degree() const;
    bool is_circle_map() const { return family_ != MapFamily::cat_map; }

    /// Uniform expansion lower bound; for the cat map the unstable eigenvalue.
    double lambda() const { return lambda_; }
    /// Uniform Lipschitz upper bound.
    double lipschitz() const { return lipschitz_; }
    /// Linear part of the cat map.
    const Eigen::Matrix2d& matrix() const { return matrix_; }

    std::string name() const;

private:
    MapSpec() = default;

    MapFamily family_ = MapFamily::linear_expanding;
    int k_ = 2;
    double a_ = 0.0;
    double lambda_ = 2.0;
    double lipschitz_ = 2.0;
    Eigen::Matrix2d matrix_ = Eigen::Matrix2d::Zero();
};

/// Lift R -> R of a circle map: k x, or 2x + a sin(2 pi x).
double lifted(const MapSpec& map, double x);
double lifted_derivative(const MapSpec& map, double x);
/// Lift R^2 -> R^2 of the cat map (plain matrix product).
Eigen::Vector2d lifted(const MapSpec& map, const Eigen::Vector2d& v);

PhasePoint apply(const MapSpec& map, const PhasePoint& p);

/// (z0, f(z0), ..., f^n(z0)) by plain double iteration.
Sequence orbit(const MapSpec& map, const PhasePoint& z0, int n);

/// Monotone lap of x: floor of the lifted image, in [0, degree).
int lap_index(const MapSpec& map, const PhasePoint& x);

/// Preimage of y in lap `branch`.
PhasePoint inverse_branch(const MapSpec& map, const PhasePoint& y, int branch);

struct BranchChoice {
    PhasePoint point;
    int branch = 0;
    bool tie = false;
};

/// Preimage of y closest to `anchor`. Equidistant preimages resolve to the
/// smallest branch index and set `tie`.
BranchChoice nearest_inverse_branch(const MapSpec& map, const PhasePoint& y, const PhasePoint& anchor);

/// Orbit of a Lebesgue-random initial point.
///
/// Plain double iteration of x -> kx mod 1 (k even) collapses onto 0 after
/// ~53 steps because every double is a dyadic rational. For linear-expanding
/// maps the initial point is therefore drawn as an i.i.d. base-k digit stream
/// and f^j(z0) is read off a sliding window of digits, which is the exact orbit
/// up to the final rounding to double. Other families iterate in double from a
/// uniform z0.
Sequence typical_orbit(const MapSpec& map, int n, RandomStream& rng);

} // namespace shadowlab
