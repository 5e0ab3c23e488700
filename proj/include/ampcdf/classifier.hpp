#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ampcdf/cdf.hpp"

namespace ampcdf {

enum class BankMethod {
    analytic,
    monte_carlo,
};

std::string_view bank_method_name(BankMethod method) noexcept;

/// How the average CDF distance is taken.
enum class DistanceMode {
    /// Mean over the fixed amplitude grid (default).
    grid,
    /// Mean over the K observed normalized amplitudes; the reference is read
    /// off its grid by linear interpolation.
    sample_points,
};

std::string_view distance_mode_name(DistanceMode mode) noexcept;

struct BankOptions {
    BankMethod method = BankMethod::analytic;
    std::size_t n_ref = 100'000;
    std::uint64_t seed = 1;
    AmplitudeGrid grid{};
    GeometryOptions geometry{};
    double ref_bandwidth_hz = kDefaultRefBandwidthHz;
};

/// Reference CDFs of every candidate at one known OSNR, all on one grid.
struct ReferenceBank {
    double osnr_db = 0.0;
    double symbol_rate_baud = 0.0;
    double snr_db = 0.0;
    BankOptions options;
    FormatMap<EmpiricalCdf> entries;

    const AmplitudeGrid& grid() const noexcept { return options.grid; }
};

/// Converts OSNR to SNR and builds all candidate references. Deterministic.
ReferenceBank build_reference_bank(double osnr_db, double symbol_rate_baud, const BankOptions& options = {});

/// Mean absolute CDF difference over the shared grid. Throws
/// std::invalid_argument when the grids differ.
double cdf_distance(const EmpiricalCdf& received, const EmpiricalCdf& reference);

struct ClassificationResult {
    ModulationFormat decision = ModulationFormat::qam4;
    FormatMap<double> distances{};
    /// Second-smallest distance minus the smallest.
    double margin = 0.0;
    std::size_t k_samples = 0;
    std::size_t clipped = 0;

    bool operator==(const ClassificationResult&) const = default;
};

/// Lowest distance wins; exact ties go to the lower-order format.
ModulationFormat argmin_distance(const FormatMap<double>& distances) noexcept;

ClassificationResult classify(std::span<const cdouble> samples, const ReferenceBank& bank,
                              DistanceMode mode = DistanceMode::grid);

inline ClassificationResult classify(const SampleBlock& block, const ReferenceBank& bank,
                                     DistanceMode mode = DistanceMode::grid) {
    return classify(block.samples, bank, mode);
}

/// {decision, distances: {format: mu}, margin, config: {...}}.
nlohmann::ordered_json to_json(const ClassificationResult& result, const ReferenceBank& bank,
                               DistanceMode mode = DistanceMode::grid);

} // namespace ampcdf
