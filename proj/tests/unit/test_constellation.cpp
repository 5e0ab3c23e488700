#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "ampcdf/constellation.hpp"

using namespace ampcdf;

namespace {

// Independent oracle: squared radii of the integer grid, grouped.
std::map<int, int> grid_radius_histogram(int side) {
    std::map<int, int> hist;
    for (int i = -side + 1; i < side; i += 2) {
        for (int q = -side + 1; q < side; q += 2) {
            ++hist[i * i + q * q];
        }
    }
    return hist;
}

bool contains(std::span<const cdouble> pts, cdouble p) {
    return std::any_of(pts.begin(), pts.end(), [&](cdouble q) { return std::abs(q - p) < 1e-12; });
}

} // namespace

TEST_CASE("format metadata") {
    std::set<int> indices;
    for (auto f : kFormats) {
        indices.insert(format_index(f));
        CHECK(parse_format(format_name(f)) == f);
    }
    CHECK(indices == std::set<int>{1, 2, 3, 4, 5});
    CHECK(constellation_order(ModulationFormat::qam32) == 32);
    CHECK(parse_format("16qam") == ModulationFormat::qam16);
    CHECK(parse_format("64-QAM") == ModulationFormat::qam64);
    CHECK(parse_format("64") == ModulationFormat::qam64);
    CHECK_FALSE(parse_format("QAM128").has_value());
    CHECK_FALSE(parse_format("PSK8").has_value());
    CHECK_FALSE(parse_format("").has_value());
}

TEST_CASE("every alphabet has M distinct unit-power points closed under 90 degree rotation") {
    for (auto f : kFormats) {
        CAPTURE(format_name(f));
        const auto c = constellation_points(f);
        REQUIRE(c.size() == static_cast<std::size_t>(constellation_order(f)));
        CHECK(std::abs(c.mean_power() - 1.0) < 1e-12);

        const auto pts = c.points();
        for (std::size_t i = 0; i < pts.size(); ++i) {
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                CHECK(std::abs(pts[i] - pts[j]) > 1e-6);
            }
            CHECK(contains(pts, pts[i] * cdouble(0.0, 1.0)));
        }
    }
}

TEST_CASE("points are sorted lexicographically and deterministic") {
    for (auto f : kFormats) {
        const auto a = constellation_points(f);
        const auto b = constellation_points(f);
        CHECK(std::equal(a.points().begin(), a.points().end(), b.points().begin()));
        CHECK(std::is_sorted(a.points().begin(), a.points().end(), [](cdouble x, cdouble y) {
            return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
        }));
    }
}

TEST_CASE("QAM4 is constant modulus") {
    const auto levels = amplitude_levels(constellation_points(ModulationFormat::qam4));
    REQUIRE(levels.size() == 1);
    CHECK(levels[0].radius == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(levels[0].multiplicity == 4);
}

TEST_CASE("square QAM amplitude levels match grid enumeration") {
    const std::map<ModulationFormat, int> sides = {
        {ModulationFormat::qam16, 4},
        {ModulationFormat::qam64, 8},
    };
    for (const auto& [format, side] : sides) {
        const auto oracle = grid_radius_histogram(side);
        const auto levels = amplitude_levels(constellation_points(format));
        REQUIRE(levels.size() == oracle.size());
        const double scale = std::sqrt(static_cast<double>(side * side - 1) * 2.0 / 3.0); // grid rms radius
        auto it = oracle.begin();
        for (const auto& level : levels) {
            CHECK(level.multiplicity == it->second);
            CHECK(level.radius == doctest::Approx(std::sqrt(it->first) / scale).epsilon(1e-12));
            ++it;
        }
    }
    const auto qam16 = amplitude_levels(constellation_points(ModulationFormat::qam16));
    CHECK(qam16 == std::vector<AmplitudeLevel>{{qam16[0].radius, 4}, {qam16[1].radius, 8}, {qam16[2].radius, 4}});
    // 1^2 + 7^2 == 5^2 + 5^2 collapses into a single level.
    CHECK(amplitude_levels(constellation_points(ModulationFormat::qam64)).size() == 9);
}

TEST_CASE("amplitude levels expand back to the point radii") {
    for (auto f : kFormats) {
        const auto c = constellation_points(f);
        const auto levels = amplitude_levels(c);
        std::vector<double> expanded;
        double power = 0.0;
        int total = 0;
        for (std::size_t i = 0; i < levels.size(); ++i) {
            if (i > 0) {
                CHECK(levels[i].radius > levels[i - 1].radius);
            }
            expanded.insert(expanded.end(), static_cast<std::size_t>(levels[i].multiplicity), levels[i].radius);
            power += levels[i].multiplicity * levels[i].radius * levels[i].radius;
            total += levels[i].multiplicity;
        }
        CHECK(total == constellation_order(f));
        CHECK(std::abs(power / total - 1.0) < 1e-12);

        std::vector<double> radii;
        for (auto p : c.points()) {
            radii.push_back(std::abs(p));
        }
        std::sort(radii.begin(), radii.end());
        for (std::size_t i = 0; i < radii.size(); ++i) {
            CHECK(radii[i] == doctest::Approx(expanded[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("circular 8-QAM ring ratio and rectangular alternative") {
    const auto levels = amplitude_levels(constellation_points(ModulationFormat::qam8));
    REQUIRE(levels.size() == 2);
    CHECK(levels[1].radius / levels[0].radius == doctest::Approx((1.0 + std::sqrt(3.0)) / std::sqrt(2.0)));
    CHECK(levels[0].multiplicity == 4);

    const GeometryOptions rect{.qam8 = Qam8Geometry::rectangular};
    const auto c = constellation_points(ModulationFormat::qam8, rect);
    CHECK(std::abs(c.mean_power() - 1.0) < 1e-12);
    CHECK(amplitude_levels(c).size() == 2);
    CHECK(geometry_id(rect) != geometry_id({}));
    CHECK(geometry_id({}).find("qam8=circular") != std::string::npos);
}

TEST_CASE("32-QAM is the 6x6 cross") {
    const auto c = constellation_points(ModulationFormat::qam32);
    const auto levels = amplitude_levels(c);
    // Cross radii^2 in grid units: 2, 10, 18, 26, 34 -> five levels.
    REQUIRE(levels.size() == 5);
    CHECK(levels.back().multiplicity == 8);
}

TEST_CASE("constellation CSV export") {
    std::ostringstream ss;
    write_constellation_csv(ss, constellation_points(ModulationFormat::qam4));
    CHECK(ss.str() ==
          "re,im\n"
          "-0.70710678118654746,-0.70710678118654746\n"
          "-0.70710678118654746,0.70710678118654746\n"
          "0.70710678118654746,-0.70710678118654746\n"
          "0.70710678118654746,0.70710678118654746\n");
}
