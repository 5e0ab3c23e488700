#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include <json.hpp>

#include "ampcdf/classifier.hpp"

namespace ampcdf {

/// Rotation and gain impairments applied to every simulated trial block.
struct ImpairmentConfig {
    double freq_offset_hz = 200e6;
    double linewidth_hz = 100e3;
    double amplitude_scale = 1.0;
};

struct ExperimentSpec {
    std::vector<ModulationFormat> formats{kFormats.begin(), kFormats.end()};
    std::vector<double> osnr_grid_db;
    /// When set, osnr_grid_db[i] is the single OSNR used for formats[i]
    /// instead of sweeping the full grid for every format.
    bool paired_osnr = false;
    std::vector<std::size_t> sample_counts{10'000};
    std::size_t trials = 500;
    double symbol_rate_baud = 32e9;
    ImpairmentConfig impairments{};
    std::uint64_t master_seed = 1;
    /// Bank method, n_ref, grid, geometry and reference bandwidth. The bank
    /// seed is derived from master_seed and the bank OSNR.
    BankOptions bank{};
    /// Banks are built at OSNR + osnr_mismatch_db.
    double osnr_mismatch_db = 0.0;
    DistanceMode distance = DistanceMode::grid;
    /// Worker threads for trials; 0 picks the hardware concurrency.
    unsigned threads = 0;

    /// Throws std::invalid_argument when a list is empty, trials is zero or
    /// paired lists differ in length.
    void validate() const;
};

struct SweepRow {
    ModulationFormat format = ModulationFormat::qam4;
    double osnr_db = 0.0;
    std::size_t k_samples = 0;
    std::size_t trials = 0;
    std::size_t correct = 0;
    double accuracy = 0.0;
    double mean_margin = 0.0;
    /// How often each candidate was decided (confusion row).
    FormatMap<std::size_t> decisions{};

    bool operator==(const SweepRow&) const = default;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    nlohmann::ordered_json metadata;
};

/// Per-trial seed: mix_seed(master, {format index, round(OSNR * 1000), K, trial}).
std::uint64_t trial_seed(std::uint64_t master_seed, ModulationFormat format, double osnr_db, std::size_t k_samples,
                         std::size_t trial) noexcept;

/// Bank seed for Monte Carlo references: mix_seed(master, {0xBA4C, round(bank OSNR * 1000)}).
std::uint64_t bank_seed(std::uint64_t master_seed, double bank_osnr_db) noexcept;

/// Runs every (format, OSNR, K) cell. Rows are sorted by (format, OSNR, K).
SweepResult run_sweep(const ExperimentSpec& spec);

/// Runs one cell against a prebuilt bank.
SweepRow run_cell(const ExperimentSpec& spec, const ReferenceBank& bank, ModulationFormat format, double osnr_db,
                  std::size_t k_samples);

struct RequiredOsnrResult {
    /// Empty when the target is not achieved anywhere in the search range.
    std::optional<double> osnr_db;
    /// Every evaluated grid point, in ascending OSNR.
    std::vector<SweepRow> evaluated;
    bool full_scan = false;
};

/// Smallest OSNR on the 0.5 dB grid [min_db, max_db] from which accuracy
/// stays at or above `target_accuracy` up to max_db. Bisection assumes
/// monotone accuracy; its answer is cross-checked at neighbouring points and
/// a full grid scan replaces it when the check fails.
RequiredOsnrResult required_osnr(ModulationFormat format, std::size_t k_samples, double target_accuracy,
                                 double min_db, double max_db, const ExperimentSpec& defaults);

inline constexpr double kRequiredOsnrStepDb = 0.5;

nlohmann::ordered_json spec_to_json(const ExperimentSpec& spec);
nlohmann::ordered_json to_json(const SweepResult& result);

/// `format,osnr_db,k_samples,trials,correct,accuracy,mean_margin`, preceded by
/// `# key=value` metadata lines.
void write_sweep_csv(std::ostream& out, const SweepResult& result);

} // namespace ampcdf
