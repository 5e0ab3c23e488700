#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "ampcdf/channel.hpp"

namespace ampcdf {

/// Uniform amplitude thresholds z_k = max * k / count, k = 1..count.
class AmplitudeGrid {
public:
    static constexpr std::size_t kDefaultCount = 1000;
    static constexpr double kDefaultMax = 2.5;

    explicit AmplitudeGrid(std::size_t count = kDefaultCount, double max = kDefaultMax);

    std::size_t count() const noexcept { return count_; }
    double max() const noexcept { return max_; }
    double spacing() const noexcept { return max_ / static_cast<double>(count_); }

    /// Zero-based access: point(0) is the first (positive) threshold.
    double point(std::size_t i) const noexcept {
        return max_ * static_cast<double>(i + 1) / static_cast<double>(count_);
    }
    std::vector<double> points() const;

    bool operator==(const AmplitudeGrid&) const = default;

private:
    std::size_t count_;
    double max_;
};

/// CDF values on a grid. Construction checks length, range and monotonicity.
class EmpiricalCdf {
public:
    EmpiricalCdf(AmplitudeGrid grid, std::vector<double> values, std::size_t sample_count = 0,
                 std::size_t clipped = 0);

    const AmplitudeGrid& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    std::size_t size() const noexcept { return values_.size(); }

    /// Samples the CDF was built from (0 for analytic CDFs).
    std::size_t sample_count() const noexcept { return sample_count_; }
    /// Samples above grid.max(); counted in the denominator only.
    std::size_t clipped() const noexcept { return clipped_; }

    /// Piecewise-linear interpolation between grid points with F(0) = 0 and
    /// F = 1 above the grid.
    double interpolate(double z) const noexcept;

    bool operator==(const EmpiricalCdf&) const = default;

private:
    AmplitudeGrid grid_;
    std::vector<double> values_;
    std::size_t sample_count_;
    std::size_t clipped_;
};

/// a_k = |y_k| / mean_j |y_j|. Throws DegenerateInputError if the mean is zero
/// and std::invalid_argument for an empty block.
std::vector<double> normalized_amplitudes(std::span<const cdouble> samples);

/// F(z_k) = #{a <= z_k} / K. Amplitudes above the grid are counted in K only.
EmpiricalCdf empirical_cdf(std::span<const double> amplitudes, const AmplitudeGrid& grid = AmplitudeGrid{});

/// Reference CDF emulated from n_ref noisy symbols (no rotation impairments).
EmpiricalCdf reference_cdf_mc(ModulationFormat format, double snr_db, std::size_t n_ref, std::uint64_t seed,
                              const AmplitudeGrid& grid = AmplitudeGrid{}, const GeometryOptions& geometry = {});

/// Exact reference CDF from the Rician mixture over the alphabet's amplitude
/// levels, normalized by the mixture's mean amplitude.
EmpiricalCdf reference_cdf_analytic(ModulationFormat format, double snr_db,
                                    const AmplitudeGrid& grid = AmplitudeGrid{},
                                    const GeometryOptions& geometry = {});

/// Mean of the (unnormalized) received amplitude for unit-power `levels` at
/// total noise variance sigma_sq, by quadrature of the mixture density.
double mixture_mean_amplitude(std::span<const AmplitudeLevel> levels, double sigma_sq);

/// Writes `z,F` CSV, one row per grid point.
void write_cdf_csv(std::ostream& out, const EmpiricalCdf& cdf);

} // namespace ampcdf
