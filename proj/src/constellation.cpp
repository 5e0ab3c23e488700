#include "ampcdf/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace ampcdf {
namespace {

constexpr double kLevelMergeTolerance = 1e-9;

std::vector<cdouble> square_grid(int side) {
    std::vector<cdouble> pts;
    pts.reserve(static_cast<std::size_t>(side * side));
    for (int i = 0; i < side; ++i) {
        for (int q = 0; q < side; ++q) {
            pts.emplace_back(2 * i - side + 1, 2 * q - side + 1);
        }
    }
    return pts;
}

// 6x6 grid minus the four corners.
std::vector<cdouble> cross32() {
    std::vector<cdouble> pts;
    for (const auto& p : square_grid(6)) {
        if (std::abs(p.real()) == 5.0 && std::abs(p.imag()) == 5.0) {
            continue;
        }
        pts.push_back(p);
    }
    return pts;
}

std::vector<cdouble> qam8_points(Qam8Geometry geometry) {
    switch (geometry) {
    case Qam8Geometry::circular: {
        const double inner = 1.0 / std::numbers::sqrt2;
        const double outer = (1.0 + std::numbers::sqrt3) / std::numbers::sqrt2;
        return {
            {inner, inner}, {-inner, inner}, {-inner, -inner}, {inner, -inner},
            {outer, 0.0},   {0.0, outer},    {-outer, 0.0},    {0.0, -outer},
        };
    }
    case Qam8Geometry::rectangular:
        return {{-3, -1}, {-3, 1}, {-1, -1}, {-1, 1}, {1, -1}, {1, 1}, {3, -1}, {3, 1}};
    }
    throw std::invalid_argument("unknown 8-QAM geometry");
}

std::vector<cdouble> raw_points(ModulationFormat format, const GeometryOptions& geometry) {
    switch (format) {
    case ModulationFormat::qam4: return square_grid(2);
    case ModulationFormat::qam8: return qam8_points(geometry.qam8);
    case ModulationFormat::qam16: return square_grid(4);
    case ModulationFormat::qam32: return cross32();
    case ModulationFormat::qam64: return square_grid(8);
    }
    throw std::invalid_argument("unknown modulation format");
}

} // namespace

std::string geometry_id(const GeometryOptions& geometry) {
    const char* qam8 = geometry.qam8 == Qam8Geometry::circular ? "circular" : "rectangular";
    return fmt::format("qam4=square;qam8={};qam16=square;qam32=cross;qam64=square", qam8);
}

Constellation::Constellation(ModulationFormat format, std::vector<cdouble> points)
    : format_(format), points_(std::move(points)) {
    if (points_.size() != static_cast<std::size_t>(constellation_order(format_))) {
        throw std::invalid_argument("constellation size does not match format order");
    }
}

double Constellation::mean_power() const noexcept {
    double sum = 0.0;
    for (const auto& p : points_) {
        sum += std::norm(p);
    }
    return sum / static_cast<double>(points_.size());
}

Constellation constellation_points(ModulationFormat format, const GeometryOptions& geometry) {
    auto pts = raw_points(format, geometry);
    double power = 0.0;
    for (const auto& p : pts) {
        power += std::norm(p);
    }
    const double gain = 1.0 / std::sqrt(power / static_cast<double>(pts.size()));
    for (auto& p : pts) {
        p *= gain;
    }
    std::sort(pts.begin(), pts.end(), [](const cdouble& a, const cdouble& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return Constellation(format, std::move(pts));
}

std::vector<AmplitudeLevel> amplitude_levels(const Constellation& constellation) {
    std::vector<double> radii;
    radii.reserve(constellation.size());
    for (const auto& p : constellation.points()) {
        radii.push_back(std::abs(p));
    }
    std::sort(radii.begin(), radii.end());

    std::vector<AmplitudeLevel> levels;
    double anchor = -1.0;
    double radius_sum = 0.0;
    for (double r : radii) {
        if (levels.empty() || r - anchor > kLevelMergeTolerance) {
            if (!levels.empty()) {
                levels.back().radius = radius_sum / levels.back().multiplicity;
            }
            levels.push_back({r, 0});
            anchor = r;
            radius_sum = 0.0;
        }
        ++levels.back().multiplicity;
        radius_sum += r;
    }
    if (!levels.empty()) {
        levels.back().radius = radius_sum / levels.back().multiplicity;
    }
    return levels;
}

void write_constellation_csv(std::ostream& out, const Constellation& constellation) {
    out << "re,im\n";
    for (const auto& p : constellation.points()) {
        fmt::print(out, "{:.17g},{:.17g}\n", p.real(), p.imag());
    }
}

} // namespace ampcdf
