#pragma once

#include "shadowlab/measures.hpp"
#include "shadowlab/phase_space.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace shadowlab {

/// Shortest round-trip decimal form ("%.17g"); "nan" / "inf" for non-finite values.
std::string format_double(double v);

/// Pseudo-orbit file: a `dim=<1|2>` header line, then one point per line with
/// comma-separated coordinates. Blank lines and lines starting with '#' are skipped.
Sequence read_pseudo_orbit(std::istream& in);
Sequence read_pseudo_orbit_file(const std::string& path);
void write_pseudo_orbit(std::ostream& out, std::span<const PhasePoint> seq);

/// Atom rows: x[,y],weight
void write_empirical_csv(std::ostream& out, const EmpiricalMeasure& m);
/// Cell rows: cell_index,mass
void write_grid_csv(std::ostream& out, const GridMeasure& m);
GridMeasure read_grid_csv(std::istream& in, int dim);

/// 64-bit FNV-1a, used for the config hash recorded in output sidecars.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

} // namespace shadowlab
