#pragma once

#include "shadowlab/dynamics.hpp"
#include "shadowlab/noise.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace shadowlab {

/// Declarative experiment description, read from an INI file:
///
///   [map]         family = linear-expanding | nonlinear-expanding | cat-map
///                 k = 2            (linear-expanding)
///                 a = 0.05         (nonlinear-expanding)
///   [noise]       shape = uniform-ball | cosine-bump
///                 epsilon = 0.1, 0.05, 0.02      (positive, strictly descending)
///   [run]         seed = 42   seeds = 10   n = 10000   burn_in = 10000
///                 x0 = 0.3    (optional; "x, y" on the torus)
///   [ulam]        cells = 1024   quadrature = 4   tol = 1e-12   max_iter = 100000
///   [dictionary]  order = 8      (default 8 on S^1, 4 on T^2)
///   [birkhoff]    n_min = 1000   n_max = 1024000
///   [shadow]      input = path/to/pseudo_orbit.txt   (optional)
///   [output]      path = results.csv
///
/// Every key except map.family has a default. Comments start with ';' or '#',
/// either at the start of a line or after whitespace.
struct ExperimentConfig {
    MapSpec map = MapSpec::linear_expanding(2);
    KernelShape shape = KernelShape::uniform_ball;
    std::vector<double> epsilons{0.01};
    int n = 10000;
    int burn_in = 10000;
    int seeds = 10;
    std::uint64_t seed = 0;
    std::optional<std::vector<double>> x0;
    int ulam_cells = 1024;
    int quadrature = 4;
    double tol = 1e-12;
    int max_iter = 100000;
    int dictionary_order = -1;
    long long birkhoff_n_min = 1000;
    long long birkhoff_n_max = 1024000;
    std::string shadow_input;
    std::string output = "results.csv";

    double epsilon() const { return epsilons.front(); }
    NoiseKernel kernel(double epsilon) const { return make_kernel(shape, epsilon); }
    int effective_dictionary_order() const { return dictionary_order >= 0 ? dictionary_order : (map.dim() == 1 ? 8 : 4); }
};

/// Parses and validates; throws usage_error with the offending key.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_text(const std::string& text);

/// Checks the invariants: epsilons positive, below 0.25 and strictly descending;
/// n >= 1000; seeds >= 1; component parameters constructible.
void validate(const ExperimentConfig& cfg);

} // namespace shadowlab
