#include "shadowlab/config.hpp"

#include "shadowlab/error.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <sstream>

namespace shadowlab {

namespace pt = boost::property_tree;

namespace {

// read_ini only knows whole-line comments; drop "value  ; note" tails as well.
std::string strip_inline_comments(std::istream& in)
{
    std::string out, line;
    while (std::getline(in, line)) {
        for (std::size_t i = 1; i < line.size(); ++i) {
            if ((line[i] == ';' || line[i] == '#') && (line[i - 1] == ' ' || line[i - 1] == '\t')) {
                line.erase(i);
                break;
            }
        }
        out += line;
        out += '\n';
    }
    return out;
}

std::vector<double> parse_list(const std::string& key, const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) {
        std::size_t used = 0;
        try {
            const auto b = field.find_first_not_of(" \t");
            const auto e = field.find_last_not_of(" \t");
            if (b == std::string::npos) throw usage_error("empty entry");
            field = field.substr(b, e - b + 1);
            out.push_back(std::stod(field, &used));
        } catch (const std::exception&) {
            throw usage_error("config key '" + key + "': not a number list");
        }
        if (used != field.size()) throw usage_error("config key '" + key + "': not a number list");
    }
    if (out.empty()) throw usage_error("config key '" + key + "': empty list");
    return out;
}

template <class T>
T get(const pt::ptree& tree, const std::string& key, T fallback)
{
    const auto node = tree.get_optional<std::string>(key);
    if (!node) return fallback;
    const auto v = tree.get_optional<T>(key);
    if (!v) throw usage_error("config key '" + key + "': cannot parse '" + *node + "'");
    return *v;
}

} // namespace

void validate(const ExperimentConfig& cfg)
{
    if (cfg.epsilons.empty()) throw usage_error("noise.epsilon: at least one value required");
    for (std::size_t i = 0; i < cfg.epsilons.size(); ++i) {
        const double e = cfg.epsilons[i];
        if (!(e > 0.0) || e >= 0.25) throw usage_error("noise.epsilon: values must lie in (0, 0.25)");
        if (i > 0 && !(e < cfg.epsilons[i - 1])) throw usage_error("noise.epsilon: values must be strictly descending");
    }
    if (cfg.n < 1000) throw usage_error("run.n must be at least 1000");
    if (cfg.burn_in < 0) throw usage_error("run.burn_in must be nonnegative");
    if (cfg.seeds < 1) throw usage_error("run.seeds must be at least 1");
    if (cfg.ulam_cells < 16) throw usage_error("ulam.cells must be at least 16");
    if (cfg.quadrature < 1) throw usage_error("ulam.quadrature must be at least 1");
    if (!(cfg.tol > 0.0)) throw usage_error("ulam.tol must be positive");
    if (cfg.max_iter < 1) throw usage_error("ulam.max_iter must be positive");
    if (cfg.birkhoff_n_min < 1 || cfg.birkhoff_n_max < cfg.birkhoff_n_min) {
        throw usage_error("birkhoff: need 1 <= n_min <= n_max");
    }
    if (cfg.birkhoff_n_max > 100000000) throw usage_error("birkhoff.n_max must not exceed 1e8");
    if (cfg.x0 && static_cast<int>(cfg.x0->size()) != cfg.map.dim()) {
        throw usage_error("run.x0: wrong number of coordinates for this map");
    }
}

ExperimentConfig parse_config(std::istream& in)
{
    pt::ptree tree;
    try {
        std::istringstream cleaned(strip_inline_comments(in));
        pt::read_ini(cleaned, tree);
    } catch (const pt::ini_parser_error& e) {
        throw usage_error(std::string("config: ") + e.what());
    }

    ExperimentConfig cfg;
    const auto family = tree.get_optional<std::string>("map.family");
    if (!family) throw usage_error("config: map.family is required");
    if (*family == "linear-expanding") {
        cfg.map = MapSpec::linear_expanding(get<int>(tree, "map.k", 2));
    } else if (*family == "nonlinear-expanding") {
        cfg.map = MapSpec::nonlinear_expanding(get<double>(tree, "map.a", 0.05));
    } else if (*family == "cat-map") {
        cfg.map = MapSpec::cat_map();
    } else {
        throw usage_error("config: unknown map.family '" + *family + "'");
    }

    cfg.shape = parse_kernel_shape(get<std::string>(tree, "noise.shape", "uniform-ball"));
    if (auto eps = tree.get_optional<std::string>("noise.epsilon")) cfg.epsilons = parse_list("noise.epsilon", *eps);

    cfg.seed = get<std::uint64_t>(tree, "run.seed", 0);
    cfg.seeds = get<int>(tree, "run.seeds", cfg.seeds);
    cfg.n = get<int>(tree, "run.n", cfg.n);
    cfg.burn_in = get<int>(tree, "run.burn_in", cfg.burn_in);
    if (auto x0 = tree.get_optional<std::string>("run.x0")) cfg.x0 = parse_list("run.x0", *x0);

    cfg.ulam_cells = get<int>(tree, "ulam.cells", cfg.ulam_cells);
    cfg.quadrature = get<int>(tree, "ulam.quadrature", cfg.quadrature);
    cfg.tol = get<double>(tree, "ulam.tol", cfg.tol);
    cfg.max_iter = get<int>(tree, "ulam.max_iter", cfg.max_iter);

    cfg.dictionary_order = get<int>(tree, "dictionary.order", cfg.dictionary_order);
    cfg.birkhoff_n_min = get<long long>(tree, "birkhoff.n_min", cfg.birkhoff_n_min);
    cfg.birkhoff_n_max = get<long long>(tree, "birkhoff.n_max", cfg.birkhoff_n_max);
    cfg.shadow_input = get<std::string>(tree, "shadow.input", "");
    cfg.output = get<std::string>(tree, "output.path", cfg.output);

    validate(cfg);
    return cfg;
}

ExperimentConfig parse_config_text(const std::string& text)
{
    std::istringstream in(text);
    return parse_config(in);
}

} // namespace shadowlab
