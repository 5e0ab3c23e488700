#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ampcdf/constellation.hpp"

namespace ampcdf {

inline constexpr double kDefaultRefBandwidthHz = 12.5e9; // 0.1 nm at 1550 nm

struct ChannelConfig {
    double osnr_db = 30.0;
    double symbol_rate_baud = 32e9;
    double ref_bandwidth_hz = kDefaultRefBandwidthHz;
    double freq_offset_hz = 0.0;
    /// Combined linewidth of transmit laser and local oscillator.
    double linewidth_hz = 0.0;
    /// Receiver gain applied after the channel; the classifier must not care.
    double amplitude_scale = 1.0;
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument on non-positive rates, bandwidth or scale.
    void validate() const;
    double snr_db() const;
};

struct SampleProvenance {
    ChannelConfig config;
    ModulationFormat format;
};

struct SampleBlock {
    std::vector<cdouble> samples;
    /// Present for simulated blocks, absent for data loaded from files.
    std::optional<SampleProvenance> provenance;

    std::size_t size() const noexcept { return samples.size(); }
};

/// SNR(dB) = OSNR(dB) - 10 log10(Rs / Bref).
double osnr_to_snr(double osnr_db, double symbol_rate_baud, double ref_bandwidth_hz = kDefaultRefBandwidthHz);

/// Total complex noise variance for unit signal power: 10^(-snr/10).
/// Each quadrature carries half of it.
double noise_variance_from_snr(double snr_db);

/// Received symbols y_k = scale * (x_k + n_k) * exp(j(2 pi df k / Rs + phi_k)),
/// x_k uniform over the alphabet, n_k circular Gaussian, phi_k a Wiener
/// process with step variance 2 pi linewidth / Rs. Deterministic in config.seed.
SampleBlock simulate_block(ModulationFormat format, std::size_t k_samples, const ChannelConfig& config,
                           const GeometryOptions& geometry = {});

/// Noise-only path used for reference emulation: no rotation, unit scale.
std::vector<cdouble> simulate_awgn(const Constellation& constellation, std::size_t k_samples, double noise_variance,
                                   std::uint64_t seed);

} // namespace ampcdf
