#include "ampcdf/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ampcdf/seeding.hpp"
#include "ampcdf/version.hpp"

namespace ampcdf {

std::string_view bank_method_name(BankMethod method) noexcept {
    return method == BankMethod::analytic ? "analytic" : "monte_carlo";
}

std::string_view distance_mode_name(DistanceMode mode) noexcept {
    return mode == DistanceMode::grid ? "grid" : "sample_points";
}

ReferenceBank build_reference_bank(double osnr_db, double symbol_rate_baud, const BankOptions& options) {
    const double snr_db = osnr_to_snr(osnr_db, symbol_rate_baud, options.ref_bandwidth_hz);
    auto entries = make_format_map([&](ModulationFormat f) {
        if (options.method == BankMethod::analytic) {
            return reference_cdf_analytic(f, snr_db, options.grid, options.geometry);
        }
        const auto seed = mix_seed(options.seed, static_cast<std::uint64_t>(format_index(f)));
        return reference_cdf_mc(f, snr_db, options.n_ref, seed, options.grid, options.geometry);
    });
    ReferenceBank bank{
        .osnr_db = osnr_db,
        .symbol_rate_baud = symbol_rate_baud,
        .snr_db = snr_db,
        .options = options,
        .entries = std::move(entries),
    };
    return bank;
}

double cdf_distance(const EmpiricalCdf& received, const EmpiricalCdf& reference) {
    if (!(received.grid() == reference.grid())) {
        throw std::invalid_argument("CDFs are defined on different grids");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < received.size(); ++i) {
        sum += std::abs(reference[i] - received[i]);
    }
    return sum / static_cast<double>(received.size());
}

ModulationFormat argmin_distance(const FormatMap<double>& distances) noexcept {
    auto best = kFormats.front();
    for (auto f : kFormats) {
        if (distances[f] < distances[best]) {
            best = f;
        }
    }
    return best;
}

namespace {

FormatMap<double> sample_point_distances(std::vector<double> amplitudes, const ReferenceBank& bank) {
    std::sort(amplitudes.begin(), amplitudes.end());
    const std::size_t k = amplitudes.size();
    FormatMap<double> distances{};
    for (auto f : kFormats) {
        const auto& reference = bank.entries[f];
        double sum = 0.0;
        std::size_t i = 0;
        while (i < k) {
            // Ties share the CDF value of the last equal amplitude.
            std::size_t j = i;
            while (j + 1 < k && amplitudes[j + 1] == amplitudes[i]) {
                ++j;
            }
            const double received = static_cast<double>(j + 1) / static_cast<double>(k);
            const double diff = std::abs(reference.interpolate(amplitudes[i]) - received);
            sum += diff * static_cast<double>(j - i + 1);
            i = j + 1;
        }
        distances[f] = sum / static_cast<double>(k);
    }
    return distances;
}

} // namespace

ClassificationResult classify(std::span<const cdouble> samples, const ReferenceBank& bank, DistanceMode mode) {
    auto amplitudes = normalized_amplitudes(samples);
    const auto received = empirical_cdf(amplitudes, bank.grid());

    ClassificationResult result;
    result.k_samples = samples.size();
    result.clipped = received.clipped();
    if (mode == DistanceMode::grid) {
        for (auto f : kFormats) {
            result.distances[f] = cdf_distance(received, bank.entries[f]);
        }
    } else {
        result.distances = sample_point_distances(std::move(amplitudes), bank);
    }
    result.decision = argmin_distance(result.distances);

    double runner_up = std::numeric_limits<double>::infinity();
    for (auto f : kFormats) {
        if (f != result.decision) {
            runner_up = std::min(runner_up, result.distances[f]);
        }
    }
    result.margin = std::isfinite(runner_up) ? runner_up - result.distances[result.decision] : 0.0;
    return result;
}

nlohmann::ordered_json to_json(const ClassificationResult& result, const ReferenceBank& bank, DistanceMode mode) {
    nlohmann::ordered_json distances = nlohmann::ordered_json::object();
    for (auto f : kFormats) {
        distances[std::string(format_name(f))] = result.distances[f];
    }
    nlohmann::ordered_json config = {
        {"k_samples", result.k_samples},
        {"clipped", result.clipped},
        {"osnr_db", bank.osnr_db},
        {"snr_db", bank.snr_db},
        {"symbol_rate_baud", bank.symbol_rate_baud},
        {"ref_bandwidth_hz", bank.options.ref_bandwidth_hz},
        {"bank", bank_method_name(bank.options.method)},
        {"grid_points", bank.grid().count()},
        {"grid_max", bank.grid().max()},
        {"distance", distance_mode_name(mode)},
        {"geometry", geometry_id(bank.options.geometry)},
        {"version", kVersion},
    };
    if (bank.options.method == BankMethod::monte_carlo) {
        config["n_ref"] = bank.options.n_ref;
        config["bank_seed"] = bank.options.seed;
    }
    return {
        {"decision", format_name(result.decision)},
        {"distances", distances},
        {"margin", result.margin},
        {"config", config},
    };
}

} // namespace ampcdf
