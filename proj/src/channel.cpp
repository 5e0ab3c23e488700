#include "ampcdf/channel.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "ampcdf/seeding.hpp"

namespace ampcdf {
namespace {

constexpr std::uint64_t kSymbolStream = 1;
constexpr std::uint64_t kNoiseStream = 2;
constexpr std::uint64_t kPhaseStream = 3;

struct RotationModel {
    double phase_step = 0.0;    // 2 pi df / Rs
    double wiener_sigma = 0.0;  // sqrt(2 pi linewidth / Rs)
    double scale = 1.0;

    bool active() const { return phase_step != 0.0 || wiener_sigma > 0.0; }
};

std::vector<cdouble> draw(const Constellation& constellation, std::size_t k_samples, double noise_variance,
                          const RotationModel& rotation, std::uint64_t seed) {
    if (k_samples == 0) {
        throw std::invalid_argument("sample count must be positive");
    }
    if (!(noise_variance >= 0.0)) {
        throw std::invalid_argument("noise variance must be nonnegative");
    }
    // Separate streams so symbols, noise and phase stay aligned across SNRs.
    std::mt19937_64 symbol_rng(mix_seed(seed, kSymbolStream));
    std::mt19937_64 noise_rng(mix_seed(seed, kNoiseStream));
    std::mt19937_64 phase_rng(mix_seed(seed, kPhaseStream));
    const auto points = constellation.points();
    std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
    const bool noisy = noise_variance > 0.0 && std::isfinite(noise_variance);
    std::normal_distribution<double> quadrature(0.0, noisy ? std::sqrt(0.5 * noise_variance) : 1.0);
    std::normal_distribution<double> phase_walk(0.0, rotation.wiener_sigma > 0.0 ? rotation.wiener_sigma : 1.0);

    std::vector<cdouble> out(k_samples);
    double wiener = 0.0;
    for (std::size_t k = 0; k < k_samples; ++k) {
        cdouble y = points[pick(symbol_rng)];
        if (noisy) {
            const double ni = quadrature(noise_rng);
            const double nq = quadrature(noise_rng);
            y += cdouble(ni, nq);
        }
        if (rotation.active()) {
            if (rotation.wiener_sigma > 0.0 && k > 0) {
                wiener += phase_walk(phase_rng);
            }
            y *= std::polar(1.0, rotation.phase_step * static_cast<double>(k) + wiener);
        }
        if (rotation.scale != 1.0) {
            y *= rotation.scale;
        }
        out[k] = y;
    }
    return out;
}

} // namespace

void ChannelConfig::validate() const {
    if (!(symbol_rate_baud > 0.0)) {
        throw std::invalid_argument("symbol rate must be positive");
    }
    if (!(ref_bandwidth_hz > 0.0)) {
        throw std::invalid_argument("reference bandwidth must be positive");
    }
    if (!(amplitude_scale > 0.0)) {
        throw std::invalid_argument("amplitude scale must be positive");
    }
    if (!(linewidth_hz >= 0.0)) {
        throw std::invalid_argument("linewidth must be nonnegative");
    }
}

double ChannelConfig::snr_db() const {
    return osnr_to_snr(osnr_db, symbol_rate_baud, ref_bandwidth_hz);
}

double osnr_to_snr(double osnr_db, double symbol_rate_baud, double ref_bandwidth_hz) {
    if (!(symbol_rate_baud > 0.0) || !(ref_bandwidth_hz > 0.0)) {
        throw std::invalid_argument("symbol rate and reference bandwidth must be positive");
    }
    return osnr_db - 10.0 * std::log10(symbol_rate_baud / ref_bandwidth_hz);
}

double noise_variance_from_snr(double snr_db) {
    return std::pow(10.0, -snr_db / 10.0);
}

SampleBlock simulate_block(ModulationFormat format, std::size_t k_samples, const ChannelConfig& config,
                           const GeometryOptions& geometry) {
    config.validate();
    const RotationModel rotation{
        .phase_step = 2.0 * std::numbers::pi * config.freq_offset_hz / config.symbol_rate_baud,
        .wiener_sigma = std::sqrt(2.0 * std::numbers::pi * config.linewidth_hz / config.symbol_rate_baud),
        .scale = config.amplitude_scale,
    };
    const auto constellation = constellation_points(format, geometry);
    SampleBlock block;
    block.samples = draw(constellation, k_samples, noise_variance_from_snr(config.snr_db()), rotation, config.seed);
    block.provenance = SampleProvenance{config, format};
    return block;
}

std::vector<cdouble> simulate_awgn(const Constellation& constellation, std::size_t k_samples, double noise_variance,
                                   std::uint64_t seed) {
    return draw(constellation, k_samples, noise_variance, RotationModel{}, seed);
}

} // namespace ampcdf
