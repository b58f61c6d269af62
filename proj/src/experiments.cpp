#include "shadowlab/experiments.hpp"

#include "shadowlab/error.hpp"
#include "shadowlab/io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace shadowlab {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

const char* yes_no(bool b) { return b ? "true" : "false"; }

// W1 error of one Ulam estimate: the diameter of a cell.
double ulam_w1_budget(int dim, int cells) { return dim == 1 ? 1.0 / cells : std::sqrt(2.0) / cells; }

} // namespace

std::vector<Observable> dictionary_for(const ExperimentConfig& cfg)
{
    return standard_dictionary(cfg.map.dim(), cfg.effective_dictionary_order());
}

PhasePoint initial_point(const ExperimentConfig& cfg, RandomStream& rng)
{
    if (cfg.x0) return canonicalize(*cfg.x0);
    return cfg.map.dim() == 1 ? canonicalize(rng.uniform01()) : canonicalize(rng.uniform01(), rng.uniform01());
}

// --- simulate -------------------------------------------------------------

SimulationReport run_simulate(const ExperimentConfig& cfg)
{
    RandomStream rng(cfg.seed, streams::simulate);
    const PhasePoint x0 = initial_point(cfg, rng);
    SimulationReport r{random_orbit(cfg.kernel(cfg.epsilon()), cfg.map, x0, cfg.n, rng), {}};
    r.check = verify_pseudo_orbit(cfg.map, r.orbit.points, cfg.epsilon());
    return r;
}

void write_simulation_csv(std::ostream& out, const MapSpec& map, const SimulationReport& r)
{
    const bool torus = map.dim() == 2;
    out << (torus ? "index,x,y,gap\n" : "index,x,gap\n");
    const Sequence& pts = r.orbit.points;
    for (std::size_t j = 0; j < pts.size(); ++j) {
        const double gap = j == 0 ? 0.0 : dist(apply(map, pts[j - 1]), pts[j]);
        out << j << ',' << format_double(pts[j][0]);
        if (torus) out << ',' << format_double(pts[j][1]);
        out << ',' << format_double(gap) << '\n';
    }
}

// --- shadowing ------------------------------------------------------------

ShadowReport shadow_and_compare(const MapSpec& map, Sequence pseudo, std::span<const Observable> dictionary)
{
    if (pseudo.size() < 2) throw usage_error("shadow: pseudo-orbit needs at least two points");
    for (const auto& p : pseudo) {
        if (p.dim() != map.dim()) throw usage_error("shadow: pseudo-orbit dimension does not match the map");
    }
    ShadowReport r;
    r.pseudo = std::move(pseudo);
    r.pseudo_check = verify_pseudo_orbit(map, r.pseudo, std::numeric_limits<double>::infinity());
    r.shadow = shadow(map, r.pseudo);
    r.target_epsilon = shadowing_modulus(map).accuracy(r.pseudo_check.max_gap) + 1e-9;
    r.certificate = certify(map, r.pseudo, r.shadow.points, r.target_epsilon);

    for (const auto& phi : dictionary) {
        ObservableComparison c;
        c.observable = phi.name();
        c.lip_const = phi.lip_const();
        c.lhs = std::abs(birkhoff_average(r.shadow.points, phi) - birkhoff_average(r.pseudo, phi));
        c.rhs = c.lip_const * r.certificate.shadow_distance;
        c.ok = c.lhs <= c.rhs + 1e-9;
        r.inequality_holds = r.inequality_holds && c.ok;
        r.comparisons.push_back(c);
    }
    return r;
}

ShadowReport run_shadow_demo(const ExperimentConfig& cfg)
{
    const std::vector<Observable> dict = dictionary_for(cfg);
    if (!cfg.shadow_input.empty()) return shadow_and_compare(cfg.map, read_pseudo_orbit_file(cfg.shadow_input), dict);
    RandomStream rng(cfg.seed, streams::simulate);
    const PhasePoint x0 = initial_point(cfg, rng);
    RandomOrbit orbit = random_orbit(cfg.kernel(cfg.epsilon()), cfg.map, x0, cfg.n, rng);
    return shadow_and_compare(cfg.map, std::move(orbit.points), dict);
}

void write_shadow_csv(std::ostream& out, const ShadowReport& r)
{
    const bool torus = !r.pseudo.empty() && r.pseudo.front().dim() == 2;
    const bool branches = !r.shadow.branch_itinerary.empty();
    out << (torus ? "index,x,y,z_x,z_y,deviation" : "index,x,z,deviation") << (branches ? ",branch\n" : "\n");
    for (std::size_t j = 0; j < r.pseudo.size(); ++j) {
        const PhasePoint& x = r.pseudo[j];
        const PhasePoint& z = r.shadow.points[j];
        out << j << ',' << format_double(x[0]);
        if (torus) out << ',' << format_double(x[1]);
        out << ',' << format_double(z[0]);
        if (torus) out << ',' << format_double(z[1]);
        out << ',' << format_double(dist(x, z));
        if (branches) {
            out << ',';
            if (j < r.shadow.branch_itinerary.size()) out << r.shadow.branch_itinerary[j];
        }
        out << '\n';
    }
}

void write_comparison_csv(std::ostream& out, const ShadowReport& r)
{
    out << "observable,lip_const,lhs,rhs,ok\n";
    for (const auto& c : r.comparisons) {
        out << c.observable << ',' << format_double(c.lip_const) << ',' << format_double(c.lhs) << ','
            << format_double(c.rhs) << ',' << yes_no(c.ok) << '\n';
    }
}

// --- stationary -----------------------------------------------------------

CrossValidationSettings cross_validation_settings(const ExperimentConfig& cfg)
{
    CrossValidationSettings s;
    s.cells = cfg.ulam_cells;
    s.quadrature = cfg.quadrature;
    s.samples = cfg.n;
    s.burn_in = cfg.burn_in;
    s.seeds = cfg.seeds;
    s.master_seed = cfg.seed;
    s.stream_base = streams::stationary_mc;
    s.dictionary_order = cfg.effective_dictionary_order();
    s.tol = cfg.tol;
    s.max_iter = cfg.max_iter;
    return s;
}

void write_cross_validation_csv(std::ostream& out, const CrossValidationReport& r)
{
    out << "seed_index,w1,dictionary_gap,budget,ok\n";
    for (std::size_t s = 0; s < r.w1.size(); ++s) {
        out << s << ',' << format_double(r.w1[s]) << ',' << format_double(r.dict_gap[s]) << ','
            << format_double(r.budget) << ',' << yes_no(r.seed_ok[s]) << '\n';
    }
}

// --- sweep ----------------------------------------------------------------

ReferenceMeasure reference_measure(const MapSpec& map, int cells, int quadrature, double tol, int max_iter)
{
    if (map.family() == MapFamily::nonlinear_expanding) {
        const NoiseKernel none = make_kernel(KernelShape::uniform_ball, 0.0);
        return stationary_distribution(build_ulam(map, none, cells, quadrature), tol, max_iter).density;
    }
    return LebesgueMeasure{map.dim()};
}

bool SweepResult::all_bounds_ok() const
{
    return std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.bound_ok; });
}

SweepResult run_sweep(const ExperimentConfig& cfg)
{
    SweepResult result;
    const MapSpec& map = cfg.map;
    const std::vector<Observable> dict = dictionary_for(cfg);
    const ShadowingModulus modulus = shadowing_modulus(map);
    try {
        const ReferenceMeasure reference = reference_measure(map, cfg.ulam_cells, cfg.quadrature, cfg.tol, cfg.max_iter);
        const bool ulam_reference = std::holds_alternative<GridMeasure>(reference);
        result.reference = ulam_reference ? "ulam-acim" : "lebesgue";
        const double w1_budget = ulam_w1_budget(map.dim(), cfg.ulam_cells) * (ulam_reference ? 2.0 : 1.0);

        for (std::size_t e = 0; e < cfg.epsilons.size(); ++e) {
            const double eps = cfg.epsilons[e];
            const NoiseKernel kernel = cfg.kernel(eps);
            const StationaryResult st =
                stationary_distribution(build_ulam(map, kernel, cfg.ulam_cells, cfg.quadrature), cfg.tol, cfg.max_iter);

            SweepRow row;
            row.epsilon = eps;
            row.delta = modulus(eps);
            row.w1 = map.dim() == 1 ? wasserstein1_circle(st.density, reference) : nan;
            const DictionaryGap gap = dictionary_gap(st.density, reference, dict);
            row.max_normalized_gap = gap.max_gap;
            row.estimator_budget = w1_budget;
            row.max_excess = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < dict.size(); ++i) {
                ObservableBound b;
                b.observable = dict[i].name();
                b.lip_const = dict[i].lip_const();
                b.gap = gap.raw[i];
                b.bound = (b.lip_const + 1.0) * eps + row.delta;
                b.budget = b.lip_const * w1_budget;
                b.excess = b.gap - b.bound - b.budget;
                b.ok = b.excess <= bound_tolerance;
                row.max_excess = std::max(row.max_excess, b.excess);
                row.per_observable.push_back(b);
            }
            row.bound_ok = row.max_excess <= bound_tolerance;

            // Monte-Carlo cross-check of the Ulam estimate
            std::vector<double> w1s;
            std::vector<double> gaps;
            for (int s = 0; s < cfg.seeds; ++s) {
                RandomStream rng(cfg.seed, streams::sweep_mc + 1000 * e + static_cast<std::uint64_t>(s));
                const PhasePoint x0 = initial_point(cfg, rng);
                const EmpiricalMeasure mc = monte_carlo_stationary(map, kernel, x0, cfg.burn_in, cfg.n, rng);
                w1s.push_back(map.dim() == 1 ? wasserstein1_circle(mc, st.density) : nan);
                gaps.push_back(dictionary_gap(mc, st.density, dict).max_gap);
            }
            row.mc_w1 = median(w1s);
            row.mc_gap = median(gaps);
            row.mc_budget = 2.0 * (1.0 / cfg.ulam_cells + 3.0 / std::sqrt(static_cast<double>(cfg.n)));
            row.mc_agree = (map.dim() == 1 ? row.mc_w1 : row.mc_gap) <= row.mc_budget;
            row.seeds = cfg.seeds;
            row.ulam_iterations = st.iterations;
            row.ulam_residual = st.residual;
            result.rows.push_back(std::move(row));
        }
    } catch (const std::exception& ex) {
        result.error = ex.what();
    }
    return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& r)
{
    out << "epsilon,delta,w1,max_normalized_gap,estimator_budget,max_excess,tolerance,bound_ok,"
           "mc_w1,mc_gap,mc_budget,mc_agree,seeds,ulam_iterations,ulam_residual\n";
    for (const auto& row : r.rows) {
        out << format_double(row.epsilon) << ',' << format_double(row.delta) << ',' << format_double(row.w1) << ','
            << format_double(row.max_normalized_gap) << ',' << format_double(row.estimator_budget) << ','
            << format_double(row.max_excess) << ',' << format_double(bound_tolerance) << ',' << yes_no(row.bound_ok)
            << ',' << format_double(row.mc_w1) << ',' << format_double(row.mc_gap) << ','
            << format_double(row.mc_budget) << ',' << yes_no(row.mc_agree) << ',' << row.seeds << ','
            << row.ulam_iterations << ',' << format_double(row.ulam_residual) << '\n';
    }
}

void write_sweep_observables_csv(std::ostream& out, const SweepResult& r)
{
    out << "epsilon,observable,lip_const,gap,bound,budget,excess,ok\n";
    for (const auto& row : r.rows) {
        for (const auto& b : row.per_observable) {
            out << format_double(row.epsilon) << ',' << b.observable << ',' << format_double(b.lip_const) << ','
                << format_double(b.gap) << ',' << format_double(b.bound) << ',' << format_double(b.budget) << ','
                << format_double(b.excess) << ',' << yes_no(b.ok) << '\n';
        }
    }
}

// --- Birkhoff -------------------------------------------------------------

double loglog_slope(std::span<const double> n, std::span<const double> gap)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (!(gap[i] > 0.0) || !(n[i] > 0.0)) continue;
        const double x = std::log(n[i]);
        const double y = std::log(gap[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 2) return nan;
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

namespace {

double max_gap(std::span<const PhasePoint> orbit, std::span<const Observable> dict, std::span<const double> targets)
{
    double g = 0.0;
    for (std::size_t i = 0; i < dict.size(); ++i) g = std::max(g, std::abs(birkhoff_average(orbit, dict[i]) - targets[i]));
    return g;
}

std::optional<long long> settle_point(const std::vector<BirkhoffRow>& rows, double eps, double BirkhoffRow::*field)
{
    std::optional<long long> n0;
    for (std::size_t i = rows.size(); i-- > 0;) {
        if (rows[i].*field > eps) break;
        n0 = rows[i].n;
    }
    return n0;
}

} // namespace

BirkhoffReport run_birkhoff(const ExperimentConfig& cfg)
{
    const MapSpec& map = cfg.map;
    const std::vector<Observable> dict = dictionary_for(cfg);
    const NoiseKernel kernel = cfg.kernel(cfg.epsilon());

    const ReferenceMeasure mu = reference_measure(map, cfg.ulam_cells, cfg.quadrature, cfg.tol, cfg.max_iter);
    const StationaryResult mu_eps =
        stationary_distribution(build_ulam(map, kernel, cfg.ulam_cells, cfg.quadrature), cfg.tol, cfg.max_iter);
    std::vector<double> target_det, target_rand;
    for (const auto& phi : dict) {
        target_det.push_back(integrate(mu, phi));
        target_rand.push_back(integrate(mu_eps.density, phi));
    }

    BirkhoffReport r;
    r.epsilon = cfg.epsilon();
    std::uint64_t level = 0;
    for (long long n = cfg.birkhoff_n_min; n <= cfg.birkhoff_n_max; n *= 2, ++level) {
        std::vector<double> det, rnd;
        for (int s = 0; s < cfg.seeds; ++s) {
            RandomStream det_rng(cfg.seed, streams::birkhoff_deterministic + 1000 * level + static_cast<std::uint64_t>(s));
            det.push_back(max_gap(typical_orbit(map, static_cast<int>(n), det_rng), dict, target_det));
            RandomStream rnd_rng(cfg.seed, streams::birkhoff_random + 1000 * level + static_cast<std::uint64_t>(s));
            const PhasePoint x0 = initial_point(cfg, rnd_rng);
            rnd.push_back(max_gap(random_orbit(kernel, map, x0, static_cast<int>(n), rnd_rng).points, dict, target_rand));
        }
        r.rows.push_back({n, median(det), median(rnd)});
    }

    std::vector<double> ns, dg, rg;
    for (const auto& row : r.rows) {
        ns.push_back(static_cast<double>(row.n));
        dg.push_back(row.deterministic_gap);
        rg.push_back(row.random_gap);
    }
    r.deterministic_slope = loglog_slope(ns, dg);
    r.random_slope = loglog_slope(ns, rg);
    r.deterministic_n0 = settle_point(r.rows, r.epsilon, &BirkhoffRow::deterministic_gap);
    r.random_n0 = settle_point(r.rows, r.epsilon, &BirkhoffRow::random_gap);
    return r;
}

void write_birkhoff_csv(std::ostream& out, const BirkhoffReport& r)
{
    out << "n,deterministic_gap,random_gap\n";
    for (const auto& row : r.rows) {
        out << row.n << ',' << format_double(row.deterministic_gap) << ',' << format_double(row.random_gap) << '\n';
    }
}

} // namespace shadowlab
