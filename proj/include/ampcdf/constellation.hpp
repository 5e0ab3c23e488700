#pragma once

#include <complex>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ampcdf/modulation.hpp"

namespace ampcdf {

using cdouble = std::complex<double>;

/// 8-QAM has no single standard layout; the geometry is selectable.
enum class Qam8Geometry {
    /// Inner square at r1, outer square rotated 45 deg at r1*(1+sqrt(3))/sqrt(2).
    circular,
    /// 4x2 rectangular grid, coordinates {+-1,+-3} x {+-1}.
    rectangular,
};

struct GeometryOptions {
    Qam8Geometry qam8 = Qam8Geometry::circular;

    bool operator==(const GeometryOptions&) const = default;
};

/// Stable identifier of the configured alphabets, echoed in experiment output.
std::string geometry_id(const GeometryOptions& geometry);

/// Immutable unit-average-power symbol alphabet.
class Constellation {
public:
    Constellation(ModulationFormat format, std::vector<cdouble> points);

    ModulationFormat format() const noexcept { return format_; }
    std::span<const cdouble> points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }

    double mean_power() const noexcept;

private:
    ModulationFormat format_;
    std::vector<cdouble> points_;
};

/// Canonical alphabet for `format`, normalized to unit mean power and sorted
/// lexicographically by (real, imag).
Constellation constellation_points(ModulationFormat format, const GeometryOptions& geometry = {});

struct AmplitudeLevel {
    double radius;
    int multiplicity;

    bool operator==(const AmplitudeLevel&) const = default;
};

/// Distinct point radii in increasing order. Radii closer than 1e-9 are merged.
std::vector<AmplitudeLevel> amplitude_levels(const Constellation& constellation);

/// Writes `re,im` CSV, one point per line, 17 significant digits.
void write_constellation_csv(std::ostream& out, const Constellation& constellation);

} // namespace ampcdf
