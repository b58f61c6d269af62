#include "shadowlab/measures.hpp"

#include "shadowlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace shadowlab {

using std::numbers::pi;

Observable::Observable(int dim, double constant, std::vector<TrigTerm> terms, std::string name)
    : dim_(dim), constant_(constant), terms_(std::move(terms)), name_(std::move(name))
{
    if (dim != 1 && dim != 2) throw usage_error("observable dimension must be 1 or 2");
    sup_bound_ = std::abs(constant_);
    for (const auto& t : terms_) {
        if (dim == 1 && t.k2 != 0) throw usage_error("circle observable with a second frequency");
        const double amp = std::abs(t.cos_coeff) + std::abs(t.sin_coeff);
        sup_bound_ += amp;
        lip_const_ += 2.0 * pi * std::hypot(t.k1, t.k2) * amp;
    }
}

Observable Observable::constant(int dim, double value) { return Observable(dim, value, {}, "1"); }

namespace {

std::string wave_name(const char* fn, int k1, int k2, bool torus)
{
    std::string s = fn;
    s += "(2pi*(";
    s += std::to_string(k1);
    s += torus ? "x" : "x))";
    if (torus) s += (k2 < 0 ? "" : "+") + std::to_string(k2) + "y))";
    return s;
}

} // namespace

Observable Observable::cosine(int k1, int k2)
{
    const bool torus = k2 != 0;
    return Observable(torus ? 2 : 1, 0.0, {{k1, k2, 1.0, 0.0}}, wave_name("cos", k1, k2, torus));
}

Observable Observable::sine(int k1, int k2)
{
    const bool torus = k2 != 0;
    return Observable(torus ? 2 : 1, 0.0, {{k1, k2, 0.0, 1.0}}, wave_name("sin", k1, k2, torus));
}

double Observable::operator()(const PhasePoint& x) const
{
    double v = constant_;
    for (const auto& t : terms_) {
        const double arg = 2.0 * pi * (t.k1 * x[0] + t.k2 * x[1]);
        if (t.cos_coeff != 0.0) v += t.cos_coeff * std::cos(arg);
        if (t.sin_coeff != 0.0) v += t.sin_coeff * std::sin(arg);
    }
    return v;
}

std::vector<Observable> standard_dictionary(int dim, int max_order)
{
    if (max_order < 0) throw usage_error("dictionary order must be nonnegative");
    std::vector<Observable> out;
    out.push_back(Observable::constant(dim));
    if (dim == 1) {
        for (int k = 1; k <= max_order; ++k) {
            out.push_back(Observable::cosine(k));
            out.push_back(Observable::sine(k));
        }
        return out;
    }
    if (dim != 2) throw usage_error("dictionary dimension must be 1 or 2");
    for (int k1 = 0; k1 <= max_order; ++k1) {
        for (int k2 = -max_order; k2 <= max_order; ++k2) {
            if (k1 == 0 && k2 <= 0) continue;
            const std::string tag = std::to_string(k1) + "x" + (k2 < 0 ? "" : "+") + std::to_string(k2) + "y";
            out.emplace_back(2, 0.0, std::vector<TrigTerm>{{k1, k2, 1.0, 0.0}}, "cos(2pi*(" + tag + "))");
            out.emplace_back(2, 0.0, std::vector<TrigTerm>{{k1, k2, 0.0, 1.0}}, "sin(2pi*(" + tag + "))");
        }
    }
    return out;
}

std::vector<Observable> standard_dictionary(int dim) { return standard_dictionary(dim, dim == 1 ? 8 : 4); }

// --- measures -------------------------------------------------------------

EmpiricalMeasure::EmpiricalMeasure(Sequence atoms, std::vector<double> weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights))
{
    if (atoms_.empty()) throw usage_error("empirical measure needs at least one atom");
    if (atoms_.size() != weights_.size()) throw usage_error("empirical measure: atom/weight count mismatch");
    const int d = atoms_.front().dim();
    long double total = 0.0L;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (atoms_[i].dim() != d) throw usage_error("empirical measure: mixed dimensions");
        if (!(weights_[i] > 0.0)) throw usage_error("empirical measure: weights must be positive");
        total += weights_[i];
    }
    if (std::abs(static_cast<double>(total) - 1.0) > 1e-12) throw usage_error("empirical measure: weights must sum to 1");
}

EmpiricalMeasure empirical_from_sequence(std::span<const PhasePoint> seq)
{
    if (seq.empty()) throw usage_error("empirical_from_sequence: empty sequence");
    return EmpiricalMeasure(Sequence(seq.begin(), seq.end()), std::vector<double>(seq.size(), 1.0 / seq.size()));
}

EmpiricalMeasure dirac(const PhasePoint& x) { return EmpiricalMeasure({x}, {1.0}); }

GridMeasure::GridMeasure(int dim, int cells, Eigen::VectorXd masses) : dim_(dim), cells_(cells), masses_(std::move(masses))
{
    if (dim != 1 && dim != 2) throw usage_error("grid measure dimension must be 1 or 2");
    if (cells < 1) throw usage_error("grid measure needs at least one cell");
    const Eigen::Index expected = dim == 1 ? cells : Eigen::Index(cells) * cells;
    if (masses_.size() != expected) throw usage_error("grid measure: wrong number of masses");
    if ((masses_.array() < 0.0).any()) throw usage_error("grid measure: negative mass");
    if (std::abs(masses_.sum() - 1.0) > 1e-12) throw usage_error("grid measure: masses must sum to 1");
}

GridMeasure GridMeasure::uniform(int dim, int cells)
{
    const Eigen::Index n = dim == 1 ? cells : Eigen::Index(cells) * cells;
    return GridMeasure(dim, cells, Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
}

PhasePoint GridMeasure::center(Eigen::Index index) const
{
    const double h = 1.0 / cells_;
    if (dim_ == 1) return canonicalize((index + 0.5) * h);
    return canonicalize((index / cells_ + 0.5) * h, (index % cells_ + 0.5) * h);
}

Eigen::Index GridMeasure::cell_of(const PhasePoint& x) const
{
    auto idx = [&](double c) { return std::min<Eigen::Index>(static_cast<Eigen::Index>(c * cells_), cells_ - 1); };
    if (dim_ == 1) return idx(x[0]);
    return idx(x[0]) * cells_ + idx(x[1]);
}

MeasureRef::MeasureRef(const ReferenceMeasure& m)
{
    if (const auto* g = std::get_if<GridMeasure>(&m)) v_ = g;
    else v_ = std::get<LebesgueMeasure>(m);
}

int MeasureRef::dim() const
{
    return std::visit(
        [](const auto& m) {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, LebesgueMeasure>) return m.dim;
            else return m->dim();
        },
        v_);
}

double integrate(MeasureRef measure, const Observable& phi)
{
    if (measure.dim() != phi.dim()) throw usage_error("integrate: dimension mismatch");
    const auto& v = measure.get();
    if (const auto* e = std::get_if<const EmpiricalMeasure*>(&v)) {
        double s = 0.0;
        const auto& atoms = (*e)->atoms();
        const auto& w = (*e)->weights();
        for (std::size_t i = 0; i < atoms.size(); ++i) s += w[i] * phi(atoms[i]);
        return s;
    }
    if (const auto* g = std::get_if<const GridMeasure*>(&v)) {
        double s = 0.0;
        const auto& m = (*g)->masses();
        for (Eigen::Index i = 0; i < m.size(); ++i) {
            if (m[i] != 0.0) s += m[i] * phi((*g)->center(i));
        }
        return s;
    }
    return phi.constant_term();
}

double birkhoff_average(std::span<const PhasePoint> orbit, const Observable& phi)
{
    if (orbit.empty()) throw usage_error("birkhoff_average: empty orbit");
    double s = 0.0;
    for (const auto& x : orbit) s += phi(x);
    return s / static_cast<double>(orbit.size());
}

double birkhoff_average(const MapSpec& map, const PhasePoint& z0, int n, const Observable& phi)
{
    return birkhoff_average(orbit(map, z0, n), phi);
}

// --- Wasserstein-1 on the circle -----------------------------------------

namespace {

// G = F_mu - F_nu is piecewise linear between breakpoints: atoms add jumps,
// grid cells and Lebesgue add slope.
struct Segment {
    double length;
    double g0;
    double g1;
};

class SignedProfile {
public:
    void add(MeasureRef m, double sign)
    {
        const auto& v = m.get();
        if (const auto* e = std::get_if<const EmpiricalMeasure*>(&v)) {
            const auto& atoms = (*e)->atoms();
            const auto& w = (*e)->weights();
            for (std::size_t i = 0; i < atoms.size(); ++i) jumps_.push_back({atoms[i][0], sign * w[i]});
        } else if (const auto* g = std::get_if<const GridMeasure*>(&v)) {
            const int k = (*g)->cells();
            const auto& masses = (*g)->masses();
            for (int i = 0; i < k; ++i) {
                if (masses[i] != 0.0) ramps_.push_back({edge(i, k), edge(i + 1, k), sign * masses[i] * k});
            }
        } else {
            ramps_.push_back({0.0, 1.0, sign});
        }
    }

    std::vector<Segment> segments() const
    {
        std::vector<double> pts{0.0, 1.0};
        pts.reserve(jumps_.size() + 2 * ramps_.size() + 2);
        for (const auto& j : jumps_) pts.push_back(j.pos);
        for (const auto& r : ramps_) {
            pts.push_back(r.lo);
            pts.push_back(r.hi);
        }
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

        auto index_of = [&](double x) {
            return static_cast<std::size_t>(std::lower_bound(pts.begin(), pts.end(), x) - pts.begin());
        };
        std::vector<double> jump(pts.size(), 0.0);
        std::vector<double> slope(pts.size(), 0.0);
        for (const auto& j : jumps_) jump[index_of(j.pos)] += j.mass;
        for (const auto& r : ramps_) {
            slope[index_of(r.lo)] += r.density;
            slope[index_of(r.hi)] -= r.density;
        }

        std::vector<Segment> segs;
        segs.reserve(pts.size());
        double g = 0.0;
        double s = 0.0;
        for (std::size_t t = 0; t + 1 < pts.size(); ++t) {
            g += jump[t];
            s += slope[t];
            const double len = pts[t + 1] - pts[t];
            segs.push_back({len, g, g + s * len});
            g += s * len;
        }
        return segs;
    }

private:
    static double edge(int i, int k) { return static_cast<double>(i) / k; }

    struct Jump {
        double pos;
        double mass;
    };
    struct Ramp {
        double lo;
        double hi;
        double density;
    };
    std::vector<Jump> jumps_;
    std::vector<Ramp> ramps_;
};

// Median of the values of G under Lebesgue measure on [0,1).
double lebesgue_median(const std::vector<Segment>& segs)
{
    struct Event {
        double value;
        double atom;  // point mass at value
        double rate;  // change of dm/dc at value
    };
    std::vector<Event> ev;
    ev.reserve(2 * segs.size());
    double total = 0.0;
    for (const auto& s : segs) {
        total += s.length;
        const double lo = std::min(s.g0, s.g1);
        const double hi = std::max(s.g0, s.g1);
        if (hi - lo <= 1e-300) {
            ev.push_back({lo, s.length, 0.0});
        } else {
            const double r = s.length / (hi - lo);
            ev.push_back({lo, 0.0, r});
            ev.push_back({hi, 0.0, -r});
        }
    }
    std::sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) { return a.value < b.value; });

    const double half = 0.5 * total;
    double mass = 0.0;
    double rate = 0.0;
    double at = ev.empty() ? 0.0 : ev.front().value;
    std::size_t i = 0;
    while (i < ev.size()) {
        const double v = ev[i].value;
        const double grown = mass + rate * (v - at);
        if (grown >= half && rate > 0.0) return at + (half - mass) / rate;
        mass = grown;
        at = v;
        for (; i < ev.size() && ev[i].value == v; ++i) {
            mass += ev[i].atom;
            rate += ev[i].rate;
        }
        if (mass >= half) return v;
    }
    return at;
}

double abs_integral(const Segment& s, double c)
{
    const double a = s.g0 - c;
    const double b = s.g1 - c;
    if ((a >= 0.0 && b >= 0.0) || (a <= 0.0 && b <= 0.0)) return s.length * std::abs(0.5 * (a + b));
    return s.length * (a * a + b * b) / (2.0 * std::abs(b - a));
}

} // namespace

double wasserstein1_circle(MeasureRef mu, MeasureRef nu)
{
    if (mu.dim() != 1 || nu.dim() != 1) throw usage_error("wasserstein1_circle: both measures must live on S^1");
    SignedProfile profile;
    profile.add(mu, 1.0);
    profile.add(nu, -1.0);
    const std::vector<Segment> segs = profile.segments();
    const double c = lebesgue_median(segs);
    double w = 0.0;
    for (const auto& s : segs) w += abs_integral(s, c);
    return w;
}

DictionaryGap dictionary_gap(MeasureRef mu, MeasureRef nu, std::span<const Observable> dictionary)
{
    if (dictionary.empty()) throw usage_error("dictionary_gap: empty dictionary");
    DictionaryGap out;
    out.raw.reserve(dictionary.size());
    out.normalized.reserve(dictionary.size());
    for (const auto& phi : dictionary) {
        const double g = std::abs(integrate(mu, phi) - integrate(nu, phi));
        out.raw.push_back(g);
        out.normalized.push_back(g / (phi.lip_const() + 1.0));
        out.max_gap = std::max(out.max_gap, out.normalized.back());
    }
    return out;
}

} // namespace shadowlab
