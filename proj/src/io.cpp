#include "shadowlab/io.hpp"

#include "shadowlab/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace shadowlab {

std::string format_double(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<double> parse_row(const std::string& line)
{
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
        field = trim(field);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(field, &used);
        } catch (const std::exception&) {
            throw usage_error("not a number: '" + field + "'");
        }
        if (used != field.size()) throw usage_error("not a number: '" + field + "'");
        vals.push_back(v);
    }
    return vals;
}

} // namespace

Sequence read_pseudo_orbit(std::istream& in)
{
    std::string line;
    int dim = 0;
    Sequence seq;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (dim == 0) {
            if (line == "dim=1") dim = 1;
            else if (line == "dim=2") dim = 2;
            else throw usage_error("pseudo-orbit file must start with 'dim=1' or 'dim=2'");
            continue;
        }
        std::vector<double> v = parse_row(line);
        if (static_cast<int>(v.size()) != dim) {
            throw usage_error("pseudo-orbit line " + std::to_string(lineno) + ": expected " + std::to_string(dim) +
                              " coordinates");
        }
        seq.push_back(canonicalize(v));
    }
    if (dim == 0) throw usage_error("pseudo-orbit file has no 'dim=' header");
    if (seq.empty()) throw usage_error("pseudo-orbit file has no points");
    return seq;
}

Sequence read_pseudo_orbit_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw usage_error("cannot open pseudo-orbit file '" + path + "'");
    return read_pseudo_orbit(in);
}

void write_pseudo_orbit(std::ostream& out, std::span<const PhasePoint> seq)
{
    const int dim = seq.empty() ? 1 : seq.front().dim();
    out << "dim=" << dim << '\n';
    for (const auto& p : seq) {
        out << format_double(p[0]);
        if (dim == 2) out << ',' << format_double(p[1]);
        out << '\n';
    }
}

void write_empirical_csv(std::ostream& out, const EmpiricalMeasure& m)
{
    const bool torus = m.dim() == 2;
    out << (torus ? "x,y,weight\n" : "x,weight\n");
    for (std::size_t i = 0; i < m.size(); ++i) {
        out << format_double(m.atoms()[i][0]);
        if (torus) out << ',' << format_double(m.atoms()[i][1]);
        out << ',' << format_double(m.weights()[i]) << '\n';
    }
}

void write_grid_csv(std::ostream& out, const GridMeasure& m)
{
    out << "cell_index,mass\n";
    for (Eigen::Index i = 0; i < m.size(); ++i) out << i << ',' << format_double(m.masses()[i]) << '\n';
}

GridMeasure read_grid_csv(std::istream& in, int dim)
{
    std::string line;
    if (!std::getline(in, line) || trim(line) != "cell_index,mass") throw usage_error("grid CSV: missing header");
    std::vector<double> masses;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::vector<double> v = parse_row(line);
        if (v.size() != 2 || v[0] != static_cast<double>(masses.size())) throw usage_error("grid CSV: malformed row");
        masses.push_back(v[1]);
    }
    const auto n = static_cast<Eigen::Index>(masses.size());
    const int cells = dim == 1 ? static_cast<int>(n) : static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    return GridMeasure(dim, cells, Eigen::Map<Eigen::VectorXd>(masses.data(), n));
}

std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

} // namespace shadowlab
