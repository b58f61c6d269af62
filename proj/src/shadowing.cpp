#include "shadowlab/shadowing.hpp"

#include "shadowlab/error.hpp"
#include "shadowlab/noise.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace shadowlab {

namespace {

void finish(const MapSpec& map, std::span<const PhasePoint> pseudo, ShadowOrbit& out)
{
    out.shadow_distance = 0.0;
    out.consistency = 0.0;
    for (std::size_t j = 0; j < out.points.size(); ++j) {
        out.shadow_distance = std::max(out.shadow_distance, dist(out.points[j], pseudo[j]));
        if (j + 1 < out.points.size()) {
            out.consistency = std::max(out.consistency, dist(apply(map, out.points[j]), out.points[j + 1]));
        }
    }
}

} // namespace

ShadowOrbit shadow_expanding(const MapSpec& map, std::span<const PhasePoint> pseudo)
{
    if (!map.is_circle_map()) throw usage_error("shadow_expanding: circle-expanding maps only");
    if (pseudo.empty()) throw usage_error("shadow_expanding: empty pseudo-orbit");

    ShadowOrbit out;
    if (pseudo.size() == 1) {
        out.points.assign(pseudo.begin(), pseudo.end());
        return out;
    }
    const double delta = verify_pseudo_orbit(map, pseudo, 0.0).max_gap;
    if (!(delta / (map.lambda() - 1.0) < 0.25 / map.degree())) {
        throw usage_error("shadow_expanding: pseudo-orbit gaps too large for unambiguous branch selection");
    }

    const std::size_t n = pseudo.size() - 1;
    out.points.resize(n + 1);
    out.branch_itinerary.resize(n);
    out.points[n] = pseudo[n];
    for (std::size_t j = n; j-- > 0;) {
        BranchChoice c = nearest_inverse_branch(map, out.points[j + 1], pseudo[j]);
        out.points[j] = c.point;
        out.branch_itinerary[j] = c.branch;
        out.degraded = out.degraded || c.tie;
    }
    finish(map, pseudo, out);
    return out;
}

HyperbolicSplitting hyperbolic_splitting(const Eigen::Matrix2d& a)
{
    Eigen::EigenSolver<Eigen::Matrix2d> es(a);
    if (es.eigenvalues().imag().cwiseAbs().maxCoeff() != 0.0) {
        throw usage_error("hyperbolic_splitting: complex eigenvalues");
    }
    Eigen::Vector2d ev = es.eigenvalues().real();
    Eigen::Matrix2d vecs = es.eigenvectors().real();
    const int iu = std::abs(ev[0]) > std::abs(ev[1]) ? 0 : 1;
    const int is = 1 - iu;

    HyperbolicSplitting s;
    s.lambda_u = ev[iu];
    s.lambda_s = ev[is];
    if (!(std::abs(s.lambda_u) > 1.0 && std::abs(s.lambda_s) < 1.0)) {
        throw usage_error("hyperbolic_splitting: matrix is not hyperbolic");
    }
    if (s.lambda_u < 0.0 || s.lambda_s < 0.0) {
        // the geometric-series bound below is written for positive eigenvalues
        throw usage_error("hyperbolic_splitting: negative eigenvalues unsupported");
    }
    s.basis.col(0) = vecs.col(iu).normalized();
    s.basis.col(1) = vecs.col(is).normalized();
    s.inverse = s.basis.inverse();

    auto spectral_norm = [](const Eigen::Matrix2d& m) {
        return Eigen::JacobiSVD<Eigen::Matrix2d>(m).singularValues()[0];
    };
    s.condition = spectral_norm(s.basis) * spectral_norm(s.inverse);
    s.shadowing_constant = (1.0 / (s.lambda_u - 1.0) + 1.0 / (1.0 - s.lambda_s)) * s.condition;
    return s;
}

std::vector<Eigen::Vector2d> hyperbolic_corrections(const HyperbolicSplitting& split,
                                                    std::span<const Eigen::Vector2d> defects)
{
    const std::size_t n = defects.size();
    std::vector<double> cu(n + 1, 0.0);
    std::vector<double> cs(n + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        cs[j + 1] = split.lambda_s * cs[j] + split.inverse.row(1).dot(defects[j]);
    }
    for (std::size_t j = n; j-- > 0;) {
        cu[j] = (cu[j + 1] - split.inverse.row(0).dot(defects[j])) / split.lambda_u;
    }
    std::vector<Eigen::Vector2d> e(n + 1);
    for (std::size_t j = 0; j <= n; ++j) e[j] = cu[j] * split.basis.col(0) + cs[j] * split.basis.col(1);
    return e;
}

std::vector<Eigen::Vector2d> cat_defects(const MapSpec& map, std::span<const PhasePoint> pseudo)
{
    std::vector<Eigen::Vector2d> r;
    if (pseudo.size() < 2) return r;
    r.reserve(pseudo.size() - 1);
    for (std::size_t j = 0; j + 1 < pseudo.size(); ++j) {
        r.push_back(displacement(pseudo[j + 1], apply(map, pseudo[j])));
    }
    return r;
}

ShadowOrbit shadow_cat_map(const MapSpec& map, std::span<const PhasePoint> pseudo)
{
    if (map.family() != MapFamily::cat_map) throw usage_error("shadow_cat_map: cat map only");
    if (pseudo.empty()) throw usage_error("shadow_cat_map: empty pseudo-orbit");
    for (const auto& p : pseudo) {
        if (p.dim() != 2) throw usage_error("shadow_cat_map: points must lie on the torus");
    }

    const HyperbolicSplitting split = hyperbolic_splitting(map.matrix());
    const std::vector<Eigen::Vector2d> defects = cat_defects(map, pseudo);
    double delta = 0.0;
    for (const auto& r : defects) delta = std::max(delta, r.norm());
    if (!(split.shadowing_constant * delta < 0.25)) {
        throw usage_error("shadow_cat_map: defect too large");
    }

    const std::vector<Eigen::Vector2d> e = hyperbolic_corrections(split, defects);
    ShadowOrbit out;
    out.points.reserve(pseudo.size());
    for (std::size_t j = 0; j < pseudo.size(); ++j) out.points.push_back(canonicalize(pseudo[j].coords() + e[j], 2));
    finish(map, pseudo, out);
    return out;
}

ShadowOrbit shadow(const MapSpec& map, std::span<const PhasePoint> pseudo)
{
    return map.is_circle_map() ? shadow_expanding(map, pseudo) : shadow_cat_map(map, pseudo);
}

Certificate certify(const MapSpec& map, std::span<const PhasePoint> pseudo, std::span<const PhasePoint> shadow,
                    double epsilon)
{
    if (pseudo.size() != shadow.size()) throw usage_error("certify: length mismatch");
    Certificate c;
    for (std::size_t j = 0; j < shadow.size(); ++j) {
        c.shadow_distance = std::max(c.shadow_distance, dist(shadow[j], pseudo[j]));
        if (j + 1 < shadow.size()) c.consistency = std::max(c.consistency, dist(apply(map, shadow[j]), shadow[j + 1]));
    }
    c.pass = c.shadow_distance < epsilon && c.consistency <= orbit_tolerance;
    return c;
}

ShadowingModulus shadowing_modulus(const MapSpec& map)
{
    if (map.family() == MapFamily::cat_map) {
        return {map.family(), hyperbolic_splitting(map.matrix()).shadowing_constant};
    }
    return {map.family(), map.lambda() / (map.lambda() - 1.0)};
}

} // namespace shadowlab
