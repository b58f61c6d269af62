#pragma once

#include <Eigen/Core>

#include <initializer_list>
#include <span>
#include <vector>

namespace shadowlab {

/// Point on S^1 (dim 1) or T^2 (dim 2) in fractional coordinates.
///
/// Coordinates always lie in [0,1); construction goes through canonicalize().
/// For dim 1 the second coordinate is held at zero.
class PhasePoint {
public:
    PhasePoint() = default;

    int dim() const { return dim_; }
    double operator[](int i) const { return coords_[i]; }
    const Eigen::Vector2d& coords() const { return coords_; }

    bool operator==(const PhasePoint& other) const
    {
        return dim_ == other.dim_ && coords_ == other.coords_;
    }

    friend PhasePoint canonicalize(double x);
    friend PhasePoint canonicalize(double x, double y);
    friend PhasePoint canonicalize(const Eigen::Vector2d& v, int dim);

private:
    PhasePoint(int dim, const Eigen::Vector2d& c) : dim_(dim), coords_(c) {}

    int dim_ = 1;
    Eigen::Vector2d coords_ = Eigen::Vector2d::Zero();
};

struct SpaceDescriptor {
    int dimension = 1;
    double diameter = 0.5;
};

SpaceDescriptor circle();
SpaceDescriptor torus();
SpaceDescriptor space_of_dim(int dim);

/// Reduce a real coordinate mod 1 into [0,1). Throws usage_error on non-finite input.
double wrap_unit(double x);

/// Signed representative of x mod 1 in [-0.5, 0.5).
double wrap_centered(double x);

PhasePoint canonicalize(double x);
PhasePoint canonicalize(double x, double y);
PhasePoint canonicalize(const Eigen::Vector2d& v, int dim);
PhasePoint canonicalize(std::span<const double> coords);

/// Wraparound distance. Circle: min(|a-b|, 1-|a-b|); torus: Euclidean norm of
/// the per-coordinate circle distances.
double dist(const SpaceDescriptor& space, const PhasePoint& a, const PhasePoint& b);
double dist(const PhasePoint& a, const PhasePoint& b);

/// Shortest lifted displacement b - a, each coordinate in [-0.5, 0.5).
Eigen::Vector2d displacement(const PhasePoint& a, const PhasePoint& b);

using Sequence = std::vector<PhasePoint>;

} // namespace shadowlab
