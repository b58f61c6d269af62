#pragma once

#include "shadowlab/dynamics.hpp"
#include "shadowlab/phase_space.hpp"

#include <Eigen/Core>

#include <span>
#include <string>
#include <variant>
#include <vector>

namespace shadowlab {

/// cos_coeff * cos(2 pi k.x) + sin_coeff * sin(2 pi k.x), k = (k1, k2); k2 = 0 on S^1.
struct TrigTerm {
    int k1 = 0;
    int k2 = 0;
    double cos_coeff = 0.0;
    double sin_coeff = 0.0;
};

/// Real trigonometric polynomial on S^1 or T^2.
class Observable {
public:
    Observable(int dim, double constant, std::vector<TrigTerm> terms, std::string name = {});

    static Observable constant(int dim, double value = 1.0);
    static Observable cosine(int k1, int k2 = 0);
    static Observable sine(int k1, int k2 = 0);

    double operator()(const PhasePoint& x) const;

    int dim() const { return dim_; }
    const std::string& name() const { return name_; }
    double constant_term() const { return constant_; }
    const std::vector<TrigTerm>& terms() const { return terms_; }

    /// |c0| + sum (|a| + |b|)
    double sup_bound() const { return sup_bound_; }
    /// sum 2 pi |k| (|a| + |b|); Lipschitz w.r.t. the wraparound metric
    double lip_const() const { return lip_const_; }

private:
    int dim_;
    double constant_;
    std::vector<TrigTerm> terms_;
    std::string name_;
    double sup_bound_ = 0.0;
    double lip_const_ = 0.0;
};

/// {1} and cos/sin of every frequency up to `max_order`: k = 1..max_order on S^1,
/// wave vectors with max(|k1|,|k2|) <= max_order (one per +/- pair) on T^2.
/// The T^2 set spans the same space as the tensor products cos/sin(2 pi k1 x) cos/sin(2 pi k2 y).
std::vector<Observable> standard_dictionary(int dim, int max_order);
/// max_order 8 on S^1, 4 on T^2.
std::vector<Observable> standard_dictionary(int dim);

/// Finite weighted point set; weights positive and summing to 1.
class EmpiricalMeasure {
public:
    EmpiricalMeasure(Sequence atoms, std::vector<double> weights);

    int dim() const { return atoms_.front().dim(); }
    std::size_t size() const { return atoms_.size(); }
    const Sequence& atoms() const { return atoms_; }
    const std::vector<double>& weights() const { return weights_; }

private:
    Sequence atoms_;
    std::vector<double> weights_;
};

/// (1/(n+1)) sum_j delta_{x_j}
EmpiricalMeasure empirical_from_sequence(std::span<const PhasePoint> seq);
EmpiricalMeasure dirac(const PhasePoint& x);

/// Probability masses on the uniform partition of S^1 into k cells or T^2 into
/// k x k cells. Flat index of cell (ix, iy) is ix * k + iy.
class GridMeasure {
public:
    GridMeasure(int dim, int cells, Eigen::VectorXd masses);
    static GridMeasure uniform(int dim, int cells);

    int dim() const { return dim_; }
    int cells() const { return cells_; }
    Eigen::Index size() const { return masses_.size(); }
    const Eigen::VectorXd& masses() const { return masses_; }
    PhasePoint center(Eigen::Index index) const;
    /// Flat index of the cell containing x.
    Eigen::Index cell_of(const PhasePoint& x) const;

private:
    int dim_;
    int cells_;
    Eigen::VectorXd masses_;
};

/// Normalized Lebesgue measure m.
struct LebesgueMeasure {
    int dim = 1;
};

/// Physical-measure oracle: Lebesgue, or an Ulam approximation on a grid.
using ReferenceMeasure = std::variant<LebesgueMeasure, GridMeasure>;

/// Non-owning view over any of the measure types above.
class MeasureRef {
public:
    MeasureRef(const EmpiricalMeasure& m) : v_(&m) {}
    MeasureRef(const GridMeasure& m) : v_(&m) {}
    MeasureRef(const LebesgueMeasure& m) : v_(m) {}
    MeasureRef(const ReferenceMeasure& m);

    int dim() const;
    const std::variant<const EmpiricalMeasure*, const GridMeasure*, LebesgueMeasure>& get() const { return v_; }

private:
    std::variant<const EmpiricalMeasure*, const GridMeasure*, LebesgueMeasure> v_;
};

/// Empirical: weighted sum over atoms. Grid: cell-center value times mass.
/// Lebesgue: constant coefficient (exact for trigonometric polynomials).
double integrate(MeasureRef measure, const Observable& phi);

double birkhoff_average(std::span<const PhasePoint> orbit, const Observable& phi);
/// (1/(n+1)) sum_{j<=n} phi(f^j(z0)) along the double-precision orbit.
double birkhoff_average(const MapSpec& map, const PhasePoint& z0, int n, const Observable& phi);

/// Exact Wasserstein-1 distance on S^1: min over c of int_0^1 |F_mu - F_nu - c| dt.
/// Grid cells carry their mass uniformly over the cell. O(N log N).
double wasserstein1_circle(MeasureRef mu, MeasureRef nu);

struct DictionaryGap {
    double max_gap = 0.0;                 ///< max of `normalized`
    std::vector<double> raw;              ///< |int phi dmu - int phi dnu|
    std::vector<double> normalized;       ///< raw / (lip_const + 1)
};

DictionaryGap dictionary_gap(MeasureRef mu, MeasureRef nu, std::span<const Observable> dictionary);

} // namespace shadowlab
