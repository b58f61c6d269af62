#include "shadowlab/stationary.hpp"

#include "shadowlab/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace shadowlab {

using std::numbers::pi;

namespace {

// 16-point Gauss-Legendre rule on [-1,1] by Golub-Welsch.
struct GaussRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};

const GaussRule& gauss16()
{
    static const GaussRule rule = [] {
        constexpr int n = 16;
        Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
        for (int i = 1; i < n; ++i) {
            const double b = i / std::sqrt(4.0 * i * i - 1.0);
            jacobi(i, i - 1) = b;
            jacobi(i - 1, i) = b;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
        GaussRule r;
        r.nodes = es.eigenvalues();
        r.weights = 2.0 * es.eigenvectors().row(0).transpose().array().square();
        return r;
    }();
    return rule;
}

template <class F>
double gauss(const F& f, double a, double b)
{
    const GaussRule& r = gauss16();
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0.0;
    for (Eigen::Index i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(mid + half * r.nodes[i]);
    return s * half;
}

template <class F>
double adaptive_gauss(const F& f, double a, double b, double tol, int depth = 0)
{
    const double whole = gauss(f, a, b);
    const double mid = 0.5 * (a + b);
    const double left = gauss(f, a, mid);
    const double right = gauss(f, mid, b);
    if (std::abs(left + right - whole) <= tol || depth >= 24) return left + right;
    return adaptive_gauss(f, a, mid, 0.5 * tol, depth + 1) + adaptive_gauss(f, mid, b, 0.5 * tol, depth + 1);
}

// Integral of f over [a,b] split at the given interior breakpoints.
template <class F>
double piecewise_integral(const F& f, double a, double b, std::vector<double> cuts, double tol)
{
    if (!(b > a)) return 0.0;
    cuts.push_back(a);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    double s = 0.0;
    double prev = a;
    for (double c : cuts) {
        c = std::clamp(c, a, b);
        if (c > prev) {
            s += adaptive_gauss(f, prev, c, tol);
            prev = c;
        }
    }
    return s;
}

// Overlap fraction of two cells of width h whose left edges differ by t.
double hat(double t, double h) { return std::max(0.0, 1.0 - std::abs(t) / h); }

constexpr double quad_tol = 1e-15;

int positive_mod(long long j, int k)
{
    long long r = j % k;
    return static_cast<int>(r < 0 ? r + k : r);
}

} // namespace

std::vector<double> noise_stencil(const NoiseKernel& kernel, int dim, int cells, int& reach)
{
    const double eps = kernel.epsilon;
    const double h = 1.0 / cells;
    if (eps == 0.0) {
        reach = 0;
        return {1.0};
    }
    reach = static_cast<int>(std::ceil(eps / h)) + 1;
    const int w = reach + 1;

    if (dim == 1) {
        std::vector<double> s(w, 0.0);
        for (int d = 0; d <= reach; ++d) {
            const double c = d * h;
            auto f = [&](double t) { return radial_density(kernel, 1, std::abs(t)) * hat(t - c, h); };
            s[d] = piecewise_integral(f, std::max(-eps, c - h), std::min(eps, c + h), {c}, quad_tol);
        }
        double total = s[0];
        for (int d = 1; d <= reach; ++d) total += 2.0 * s[d];
        for (double& v : s) v /= total;
        return s;
    }

    std::vector<double> s(static_cast<std::size_t>(w) * w, 0.0);
    for (int dx = 0; dx <= reach; ++dx) {
        for (int dy = dx; dy <= reach; ++dy) {
            const double cx = dx * h;
            const double cy = dy * h;
            auto inner = [&](double tx) {
                const double half = std::sqrt(std::max(0.0, eps * eps - tx * tx));
                auto g = [&](double ty) {
                    return radial_density(kernel, 2, std::hypot(tx, ty)) * hat(ty - cy, h);
                };
                return piecewise_integral(g, std::max(-half, cy - h), std::min(half, cy + h), {cy}, quad_tol);
            };
            // tx = eps sin(theta) removes the square-root endpoint behaviour of the disk
            auto outer = [&](double theta) {
                const double tx = eps * std::sin(theta);
                return inner(tx) * hat(tx - cx, h) * eps * std::cos(theta);
            };
            auto to_theta = [&](double tx) { return std::asin(std::clamp(tx / eps, -1.0, 1.0)); };
            std::vector<double> cuts{to_theta(cx)};
            for (double yb : {cy - h, cy, cy + h}) {
                if (std::abs(yb) < eps) {
                    const double xb = std::sqrt(eps * eps - yb * yb);
                    cuts.push_back(to_theta(xb));
                    cuts.push_back(to_theta(-xb));
                }
            }
            const double v = piecewise_integral(outer, to_theta(cx - h), to_theta(cx + h), cuts, quad_tol);
            s[static_cast<std::size_t>(dx) * w + dy] = v;
            s[static_cast<std::size_t>(dy) * w + dx] = v;
        }
    }
    double total = 0.0;
    for (int dx = -reach; dx <= reach; ++dx) {
        for (int dy = -reach; dy <= reach; ++dy) total += s[static_cast<std::size_t>(std::abs(dx)) * w + std::abs(dy)];
    }
    for (double& v : s) v /= total;
    return s;
}

SparseRowMatrix noise_transfer_matrix(const NoiseKernel& kernel, int dim, int cells)
{
    int reach = 0;
    const std::vector<double> s = noise_stencil(kernel, dim, cells, reach);
    const int w = reach + 1;
    std::vector<Eigen::Triplet<double>> trip;
    if (dim == 1) {
        trip.reserve(static_cast<std::size_t>(cells) * (2 * reach + 1));
        for (int i = 0; i < cells; ++i) {
            for (int d = -reach; d <= reach; ++d) {
                const double v = s[std::abs(d)];
                if (v > 0.0) trip.emplace_back(i, positive_mod(i + d, cells), v);
            }
        }
        SparseRowMatrix m(cells, cells);
        m.setFromTriplets(trip.begin(), trip.end());
        return m;
    }
    const Eigen::Index n = Eigen::Index(cells) * cells;
    trip.reserve(static_cast<std::size_t>(n) * (2 * reach + 1) * (2 * reach + 1));
    for (int ix = 0; ix < cells; ++ix) {
        for (int iy = 0; iy < cells; ++iy) {
            for (int dx = -reach; dx <= reach; ++dx) {
                for (int dy = -reach; dy <= reach; ++dy) {
                    const double v = s[static_cast<std::size_t>(std::abs(dx)) * w + std::abs(dy)];
                    if (v > 0.0) {
                        trip.emplace_back(Eigen::Index(ix) * cells + iy,
                                          Eigen::Index(positive_mod(ix + dx, cells)) * cells + positive_mod(iy + dy, cells),
                                          v);
                    }
                }
            }
        }
    }
    SparseRowMatrix m(n, n);
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
}

namespace {

using Polygon = std::vector<Eigen::Vector2d>;

// Clip a convex polygon to the half-plane coord[axis] >= bound (keep_above) or <= bound.
Polygon clip(const Polygon& poly, int axis, double bound, bool keep_above)
{
    Polygon out;
    auto inside = [&](const Eigen::Vector2d& p) { return keep_above ? p[axis] >= bound : p[axis] <= bound; };
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Eigen::Vector2d& a = poly[i];
        const Eigen::Vector2d& b = poly[(i + 1) % poly.size()];
        const bool ia = inside(a);
        const bool ib = inside(b);
        if (ia) out.push_back(a);
        if (ia != ib) {
            const double t = (bound - a[axis]) / (b[axis] - a[axis]);
            out.push_back(a + t * (b - a));
        }
    }
    return out;
}

double area(const Polygon& poly)
{
    double s = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Eigen::Vector2d& a = poly[i];
        const Eigen::Vector2d& b = poly[(i + 1) % poly.size()];
        s += a[0] * b[1] - a[1] * b[0];
    }
    return 0.5 * std::abs(s);
}

SparseRowMatrix circle_transfer(const MapSpec& map, int k, int q)
{
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(k) * q * (static_cast<std::size_t>(map.lipschitz()) + 2));
    const double denom = static_cast<double>(q) * k;
    for (int i = 0; i < k; ++i) {
        for (int m = 0; m < q; ++m) {
            const double y0 = lifted(map, (static_cast<double>(i) * q + m) / denom);
            const double y1 = lifted(map, (static_cast<double>(i) * q + m + 1) / denom);
            const double len = y1 - y0;
            const long long j_lo = static_cast<long long>(std::floor(y0 * k));
            const long long j_hi = static_cast<long long>(std::ceil(y1 * k));
            for (long long j = j_lo; j < j_hi; ++j) {
                const double lo = std::max(y0, static_cast<double>(j) / k);
                const double hi = std::min(y1, static_cast<double>(j + 1) / k);
                if (hi > lo) trip.emplace_back(i, positive_mod(j, k), (hi - lo) / len / q);
            }
        }
    }
    SparseRowMatrix t(k, k);
    t.setFromTriplets(trip.begin(), trip.end());
    return t;
}

// Affine torus maps: each sub-cell image is a parallelogram, clipped exactly
// against the target cells. Coordinates are in cell units relative to the
// cell containing the image of the sub-cell corner.
SparseRowMatrix torus_transfer(const MapSpec& map, int k, int q)
{
    const Eigen::Matrix2d& a = map.matrix();
    const double det = std::abs(a.determinant());
    const double sub = 1.0 / q;  // sub-cell side in cell units
    const Eigen::Vector2d ex = a.col(0) * sub;
    const Eigen::Vector2d ey = a.col(1) * sub;
    const Eigen::Index n = Eigen::Index(k) * k;

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(n) * q * q * 6);
    for (int ix = 0; ix < k; ++ix) {
        for (int iy = 0; iy < k; ++iy) {
            const Eigen::Index row = Eigen::Index(ix) * k + iy;
            for (int mx = 0; mx < q; ++mx) {
                for (int my = 0; my < q; ++my) {
                    // image of the sub-cell corner in cell units, integer part split off
                    const Eigen::Vector2d corner(ix + mx * sub, iy + my * sub);
                    const Eigen::Vector2d image = a * corner;
                    const Eigen::Vector2d base = image.array().floor();
                    const Eigen::Vector2d p0 = image - base;
                    const Polygon para{p0, p0 + ex, p0 + ex + ey, p0 + ey};
                    Eigen::Vector2d lo = p0, hi = p0;
                    for (const auto& v : para) {
                        lo = lo.cwiseMin(v);
                        hi = hi.cwiseMax(v);
                    }
                    for (int cx = static_cast<int>(std::floor(lo[0])); cx < std::ceil(hi[0]); ++cx) {
                        const Polygon px = clip(clip(para, 0, cx, true), 0, cx + 1, false);
                        if (px.size() < 3) continue;
                        for (int cy = static_cast<int>(std::floor(lo[1])); cy < std::ceil(hi[1]); ++cy) {
                            const Polygon pxy = clip(clip(px, 1, cy, true), 1, cy + 1, false);
                            if (pxy.size() < 3) continue;
                            const double frac = area(pxy) / det;
                            if (frac <= 0.0) continue;
                            const int tx = positive_mod(static_cast<long long>(base[0]) + cx, k);
                            const int ty = positive_mod(static_cast<long long>(base[1]) + cy, k);
                            trip.emplace_back(row, Eigen::Index(tx) * k + ty, frac);
                        }
                    }
                }
            }
        }
    }
    SparseRowMatrix t(n, n);
    t.setFromTriplets(trip.begin(), trip.end());
    return t;
}

} // namespace

SparseRowMatrix map_transfer_matrix(const MapSpec& map, int cells, int quadrature)
{
    return map.is_circle_map() ? circle_transfer(map, cells, quadrature) : torus_transfer(map, cells, quadrature);
}

UlamOperator build_ulam(const MapSpec& map, const NoiseKernel& kernel, int cells, int quadrature)
{
    if (cells < 16) throw usage_error("build_ulam: need at least 16 cells per dimension");
    if (quadrature < 1) throw usage_error("build_ulam: need at least one quadrature point per cell");
    if (kernel.epsilon < 0.0 || kernel.epsilon >= 0.25) throw usage_error("build_ulam: epsilon out of range");

    UlamOperator op{map, kernel, cells, quadrature, {}, {}};
    const double h = 1.0 / cells;
    if (kernel.epsilon > 0.0 && h >= kernel.epsilon) {
        op.warnings.push_back("cell width " + std::to_string(h) + " is not below epsilon " +
                              std::to_string(kernel.epsilon) + "; noise is under-resolved");
    }
    const SparseRowMatrix t = map_transfer_matrix(map, cells, quadrature);
    if (kernel.epsilon == 0.0) {
        op.matrix = t;
    } else {
        op.matrix = (t * noise_transfer_matrix(kernel, map.dim(), cells)).pruned();
    }
    op.matrix.makeCompressed();
    return op;
}

StationaryResult stationary_distribution(const UlamOperator& op, double tol, int max_iter)
{
    if (!(tol > 0.0)) throw usage_error("stationary_distribution: tol must be positive");
    const Eigen::Index n = op.size();
    Eigen::VectorXd pi_vec = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    double residual = std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXd next = (pi_vec.transpose() * op.matrix).transpose();
        residual = (next - pi_vec).lpNorm<1>();
        if (residual <= tol) {
            return {GridMeasure(op.dim(), op.cells, pi_vec), residual, it + 1};
        }
        pi_vec = next / next.sum();
    }
    throw non_convergence("stationary_distribution: power iteration did not converge", pi_vec, residual);
}

EmpiricalMeasure monte_carlo_stationary(const MapSpec& map, const NoiseKernel& kernel, const PhasePoint& x0,
                                        int burn_in, int n, RandomStream& rng)
{
    if (n < 1000) throw usage_error("monte_carlo_stationary: need n >= 1000");
    if (burn_in < 0) throw usage_error("monte_carlo_stationary: burn_in must be nonnegative");
    PhasePoint x = x0;
    for (int j = 0; j < burn_in; ++j) x = sample_step(kernel, map, x, rng);
    Sequence tail;
    tail.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        tail.push_back(x);
        x = sample_step(kernel, map, x, rng);
    }
    return empirical_from_sequence(tail);
}

double median(std::vector<double> values)
{
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(values.begin(), values.end());
    const std::size_t m = values.size() / 2;
    return values.size() % 2 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

CrossValidationReport cross_validate(const MapSpec& map, const NoiseKernel& kernel,
                                     const CrossValidationSettings& settings)
{
    CrossValidationReport r{stationary_distribution(build_ulam(map, kernel, settings.cells, settings.quadrature),
                                                    settings.tol, settings.max_iter),
                            {}, {}, 0.0, 0.0, 0.0, {}, false};
    const std::vector<Observable> dict = settings.dictionary_order < 0
                                             ? standard_dictionary(map.dim())
                                             : standard_dictionary(map.dim(), settings.dictionary_order);
    r.budget = 2.0 * (1.0 / settings.cells + 3.0 / std::sqrt(static_cast<double>(settings.samples)));
    for (int s = 0; s < settings.seeds; ++s) {
        RandomStream rng(settings.master_seed, settings.stream_base + static_cast<std::uint64_t>(s));
        const PhasePoint x0 = map.dim() == 1 ? canonicalize(rng.uniform01()) : canonicalize(rng.uniform01(), rng.uniform01());
        const EmpiricalMeasure mc = monte_carlo_stationary(map, kernel, x0, settings.burn_in, settings.samples, rng);
        const double w1 = map.dim() == 1 ? wasserstein1_circle(mc, r.ulam.density) : std::numeric_limits<double>::quiet_NaN();
        const double gap = dictionary_gap(mc, r.ulam.density, dict).max_gap;
        r.w1.push_back(w1);
        r.dict_gap.push_back(gap);
        r.seed_ok.push_back((map.dim() == 1 ? w1 : gap) <= r.budget);
    }
    r.median_w1 = median(r.w1);
    r.median_dict_gap = median(r.dict_gap);
    r.agree = (map.dim() == 1 ? r.median_w1 : r.median_dict_gap) <= r.budget;
    return r;
}

} // namespace shadowlab
