#include "ampcdf/cdf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "ampcdf/errors.hpp"
#include "ampcdf/special.hpp"

namespace ampcdf {
namespace {

// Half-width of the quadrature window in units of the per-quadrature noise std.
constexpr double kTailWidth = 12.0;
constexpr int kSimpsonIntervals = 4000;

double level_mean(double nu, double s) {
    const double lo = std::max(0.0, nu - kTailWidth * s);
    const double hi = nu + kTailWidth * s;
    const double h = (hi - lo) / kSimpsonIntervals;
    double mass = 0.0;
    double first = 0.0;
    for (int i = 0; i <= kSimpsonIntervals; ++i) {
        const double x = lo + h * i;
        const double w = (i == 0 || i == kSimpsonIntervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        const double f = special::rician_pdf(x, nu, s);
        mass += w * f;
        first += w * x * f;
    }
    return first / mass;
}

} // namespace

AmplitudeGrid::AmplitudeGrid(std::size_t count, double max) : count_(count), max_(max) {
    if (count_ == 0) {
        throw std::invalid_argument("amplitude grid needs at least one point");
    }
    if (!(max_ > 0.0) || !std::isfinite(max_)) {
        throw std::invalid_argument("amplitude grid max must be positive and finite");
    }
}

std::vector<double> AmplitudeGrid::points() const {
    std::vector<double> z(count_);
    for (std::size_t i = 0; i < count_; ++i) {
        z[i] = point(i);
    }
    return z;
}

EmpiricalCdf::EmpiricalCdf(AmplitudeGrid grid, std::vector<double> values, std::size_t sample_count,
                           std::size_t clipped)
    : grid_(grid), values_(std::move(values)), sample_count_(sample_count), clipped_(clipped) {
    if (values_.size() != grid_.count()) {
        throw std::invalid_argument("CDF length does not match its grid");
    }
    double prev = 0.0;
    for (double v : values_) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw std::invalid_argument("CDF value outside [0, 1]");
        }
        if (v < prev) {
            throw std::invalid_argument("CDF is not monotone");
        }
        prev = v;
    }
}

double EmpiricalCdf::interpolate(double z) const noexcept {
    if (z <= 0.0) {
        return 0.0;
    }
    if (z > grid_.max()) {
        return 1.0;
    }
    const double pos = z / grid_.spacing(); // grid index + 1
    const auto upper = std::min(static_cast<std::size_t>(std::ceil(pos)), grid_.count());
    const double hi = values_[upper - 1];
    const double lo = upper >= 2 ? values_[upper - 2] : 0.0;
    const double frac = std::clamp(pos - static_cast<double>(upper - 1), 0.0, 1.0);
    return lo + frac * (hi - lo);
}

std::vector<double> normalized_amplitudes(std::span<const cdouble> samples) {
    if (samples.empty()) {
        throw std::invalid_argument("cannot normalize an empty block");
    }
    std::vector<double> amplitudes(samples.size());
    long double sum = 0.0L;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        amplitudes[k] = std::abs(samples[k]);
        sum += amplitudes[k];
    }
    const double mean = static_cast<double>(sum / static_cast<long double>(samples.size()));
    if (!(mean > 0.0) || !std::isfinite(mean)) {
        throw DegenerateInputError("mean amplitude is zero or not finite");
    }
    for (auto& a : amplitudes) {
        a /= mean;
    }
    return amplitudes;
}

EmpiricalCdf empirical_cdf(std::span<const double> amplitudes, const AmplitudeGrid& grid) {
    if (amplitudes.empty()) {
        throw std::invalid_argument("empirical CDF needs at least one amplitude");
    }
    const std::size_t n = grid.count();
    // counts[i]: amplitudes in (z_{i-1}, z_i], with z_{-1} = -inf.
    std::vector<std::size_t> counts(n, 0);
    std::size_t clipped = 0;
    for (double a : amplitudes) {
        if (a > grid.max()) {
            ++clipped;
            continue;
        }
        auto i = static_cast<std::size_t>(std::max(0.0, std::ceil(a / grid.spacing()) - 1.0));
        i = std::min(i, n - 1);
        while (i > 0 && grid.point(i - 1) >= a) {
            --i;
        }
        while (grid.point(i) < a) {
            ++i;
        }
        ++counts[i];
    }
    std::vector<double> values(n);
    const double total = static_cast<double>(amplitudes.size());
    std::size_t running = 0;
    for (std::size_t i = 0; i < n; ++i) {
        running += counts[i];
        values[i] = static_cast<double>(running) / total;
    }
    return EmpiricalCdf(grid, std::move(values), amplitudes.size(), clipped);
}

EmpiricalCdf reference_cdf_mc(ModulationFormat format, double snr_db, std::size_t n_ref, std::uint64_t seed,
                              const AmplitudeGrid& grid, const GeometryOptions& geometry) {
    if (n_ref == 0) {
        throw std::invalid_argument("n_ref must be positive");
    }
    const auto constellation = constellation_points(format, geometry);
    const auto samples = simulate_awgn(constellation, n_ref, noise_variance_from_snr(snr_db), seed);
    return empirical_cdf(normalized_amplitudes(samples), grid);
}

double mixture_mean_amplitude(std::span<const AmplitudeLevel> levels, double sigma_sq) {
    int total = 0;
    for (const auto& level : levels) {
        total += level.multiplicity;
    }
    const double s = std::sqrt(0.5 * sigma_sq);
    double mean = 0.0;
    for (const auto& level : levels) {
        const double w = static_cast<double>(level.multiplicity) / total;
        mean += w * (s > 0.0 ? level_mean(level.radius, s) : level.radius);
    }
    return mean;
}

EmpiricalCdf reference_cdf_analytic(ModulationFormat format, double snr_db, const AmplitudeGrid& grid,
                                    const GeometryOptions& geometry) {
    if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity()) {
        throw std::invalid_argument("SNR must be finite or +inf");
    }
    const auto levels = amplitude_levels(constellation_points(format, geometry));
    const double sigma_sq = noise_variance_from_snr(snr_db);
    const double s = std::sqrt(0.5 * sigma_sq);
    const double mean = mixture_mean_amplitude(levels, sigma_sq);
    const int total = constellation_order(format);

    std::vector<double> values(grid.count());
    for (std::size_t i = 0; i < grid.count(); ++i) {
        const double z = grid.point(i) * mean;
        double f = 0.0;
        for (const auto& level : levels) {
            const double w = static_cast<double>(level.multiplicity) / total;
            if (s > 0.0) {
                f += w * (1.0 - special::marcum_q1(level.radius / s, z / s));
            } else if (level.radius <= z) {
                f += w;
            }
        }
        values[i] = std::clamp(f, 0.0, 1.0);
    }
    // Guard against rounding breaking monotonicity between adjacent points.
    for (std::size_t i = 1; i < values.size(); ++i) {
        values[i] = std::max(values[i], values[i - 1]);
    }
    return EmpiricalCdf(grid, std::move(values));
}

void write_cdf_csv(std::ostream& out, const EmpiricalCdf& cdf) {
    out << "z,F\n";
    for (std::size_t i = 0; i < cdf.size(); ++i) {
        fmt::print(out, "{:.17g},{:.17g}\n", cdf.grid().point(i), cdf[i]);
    }
}

} // namespace ampcdf
