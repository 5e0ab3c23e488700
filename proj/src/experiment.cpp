#include "ampcdf/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "ampcdf/seeding.hpp"
#include "ampcdf/version.hpp"

namespace ampcdf {
namespace {

std::int64_t millidb(double db) {
    return std::llround(db * 1000.0);
}

unsigned worker_count(const ExperimentSpec& spec) {
    unsigned n = spec.threads != 0 ? spec.threads : std::thread::hardware_concurrency();
    n = std::max(1u, n);
    return static_cast<unsigned>(std::min<std::size_t>(n, spec.trials));
}

BankOptions bank_options_at(const ExperimentSpec& spec, double bank_osnr_db) {
    BankOptions options = spec.bank;
    options.seed = bank_seed(spec.master_seed, bank_osnr_db);
    return options;
}

std::size_t needed_correct(double target_accuracy, std::size_t trials) {
    return static_cast<std::size_t>(std::ceil(target_accuracy * static_cast<double>(trials) - 1e-9));
}

} // namespace

void ExperimentSpec::validate() const {
    if (formats.empty()) {
        throw std::invalid_argument("experiment needs at least one format");
    }
    if (osnr_grid_db.empty()) {
        throw std::invalid_argument("experiment needs at least one OSNR value");
    }
    if (sample_counts.empty()) {
        throw std::invalid_argument("experiment needs at least one sample count");
    }
    if (std::any_of(sample_counts.begin(), sample_counts.end(), [](std::size_t k) { return k == 0; })) {
        throw std::invalid_argument("sample counts must be positive");
    }
    if (trials == 0) {
        throw std::invalid_argument("trials must be at least 1");
    }
    if (!(symbol_rate_baud > 0.0)) {
        throw std::invalid_argument("symbol rate must be positive");
    }
    if (paired_osnr && osnr_grid_db.size() != formats.size()) {
        throw std::invalid_argument("paired OSNR list must have one value per format");
    }
    if (bank.method == BankMethod::monte_carlo && bank.n_ref == 0) {
        throw std::invalid_argument("n_ref must be positive");
    }
}

std::uint64_t trial_seed(std::uint64_t master_seed, ModulationFormat format, double osnr_db, std::size_t k_samples,
                         std::size_t trial) noexcept {
    return mix_seed(master_seed, {static_cast<std::uint64_t>(format_index(format)),
                                  static_cast<std::uint64_t>(millidb(osnr_db)), static_cast<std::uint64_t>(k_samples),
                                  static_cast<std::uint64_t>(trial)});
}

std::uint64_t bank_seed(std::uint64_t master_seed, double bank_osnr_db) noexcept {
    return mix_seed(master_seed, {0xBA4CULL, static_cast<std::uint64_t>(millidb(bank_osnr_db))});
}

SweepRow run_cell(const ExperimentSpec& spec, const ReferenceBank& bank, ModulationFormat format, double osnr_db,
                  std::size_t k_samples) {
    std::vector<ClassificationResult> results(spec.trials);
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) {
            ChannelConfig config{
                .osnr_db = osnr_db,
                .symbol_rate_baud = spec.symbol_rate_baud,
                .ref_bandwidth_hz = spec.bank.ref_bandwidth_hz,
                .freq_offset_hz = spec.impairments.freq_offset_hz,
                .linewidth_hz = spec.impairments.linewidth_hz,
                .amplitude_scale = spec.impairments.amplitude_scale,
                .seed = trial_seed(spec.master_seed, format, osnr_db, k_samples, t),
            };
            const auto block = simulate_block(format, k_samples, config, spec.bank.geometry);
            results[t] = classify(block, bank, spec.distance);
        }
    };

    const unsigned workers = worker_count(spec);
    if (workers <= 1) {
        work(0, spec.trials);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (spec.trials + workers - 1) / workers;
        for (std::size_t begin = 0; begin < spec.trials; begin += chunk) {
            pool.emplace_back(work, begin, std::min(spec.trials, begin + chunk));
        }
    }

    SweepRow row{.format = format, .osnr_db = osnr_db, .k_samples = k_samples, .trials = spec.trials};
    double margin_sum = 0.0;
    for (const auto& r : results) {
        ++row.decisions[r.decision];
        if (r.decision == format) {
            ++row.correct;
        }
        margin_sum += r.margin;
    }
    row.accuracy = static_cast<double>(row.correct) / static_cast<double>(row.trials);
    row.mean_margin = margin_sum / static_cast<double>(row.trials);
    return row;
}

SweepResult run_sweep(const ExperimentSpec& spec) {
    spec.validate();
    std::map<std::int64_t, ReferenceBank> banks;
    auto bank_for = [&](double osnr_db) -> const ReferenceBank& {
        const double bank_osnr = osnr_db + spec.osnr_mismatch_db;
        auto it = banks.find(millidb(bank_osnr));
        if (it == banks.end()) {
            it = banks
                     .emplace(millidb(bank_osnr), build_reference_bank(bank_osnr, spec.symbol_rate_baud,
                                                                       bank_options_at(spec, bank_osnr)))
                     .first;
        }
        return it->second;
    };

    SweepResult result;
    for (std::size_t i = 0; i < spec.formats.size(); ++i) {
        const auto format = spec.formats[i];
        std::vector<double> osnrs = spec.paired_osnr ? std::vector<double>{spec.osnr_grid_db[i]} : spec.osnr_grid_db;
        for (double osnr : osnrs) {
            const auto& bank = bank_for(osnr);
            for (auto k : spec.sample_counts) {
                result.rows.push_back(run_cell(spec, bank, format, osnr, k));
            }
        }
    }
    std::sort(result.rows.begin(), result.rows.end(), [](const SweepRow& a, const SweepRow& b) {
        return std::tuple(format_index(a.format), a.osnr_db, a.k_samples) <
               std::tuple(format_index(b.format), b.osnr_db, b.k_samples);
    });
    result.metadata = {
        {"version", kVersion},
        {"geometry", geometry_id(spec.bank.geometry)},
        {"spec", spec_to_json(spec)},
    };
    return result;
}

RequiredOsnrResult required_osnr(ModulationFormat format, std::size_t k_samples, double target_accuracy,
                                 double min_db, double max_db, const ExperimentSpec& defaults) {
    if (!(target_accuracy > 0.0 && target_accuracy <= 1.0)) {
        throw std::invalid_argument("target accuracy must be in (0, 1]");
    }
    if (!(max_db >= min_db)) {
        throw std::invalid_argument("OSNR search range is empty");
    }
    if (k_samples == 0) {
        throw std::invalid_argument("sample count must be positive");
    }
    ExperimentSpec spec = defaults;
    spec.formats = {format};
    spec.osnr_grid_db = {min_db};
    spec.sample_counts = {k_samples};
    spec.validate();

    const auto steps = static_cast<std::size_t>(std::floor((max_db - min_db) / kRequiredOsnrStepDb + 1e-9));
    std::vector<double> grid(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) {
        grid[i] = min_db + kRequiredOsnrStepDb * static_cast<double>(i);
    }
    const std::size_t need = needed_correct(target_accuracy, spec.trials);

    std::map<std::size_t, SweepRow> cache;
    auto eval = [&](std::size_t i) -> const SweepRow& {
        auto it = cache.find(i);
        if (it == cache.end()) {
            const double bank_osnr = grid[i] + spec.osnr_mismatch_db;
            const auto bank =
                build_reference_bank(bank_osnr, spec.symbol_rate_baud, bank_options_at(spec, bank_osnr));
            it = cache.emplace(i, run_cell(spec, bank, format, grid[i], k_samples)).first;
        }
        return it->second;
    };
    auto pass = [&](std::size_t i) { return eval(i).correct >= need; };

    RequiredOsnrResult out;
    const std::size_t last = grid.size() - 1;
    if (pass(last)) {
        std::size_t candidate = 0;
        if (!pass(0)) {
            std::size_t lo = 0;
            std::size_t hi = last;
            while (hi - lo > 1) {
                const std::size_t mid = lo + (hi - lo) / 2;
                (pass(mid) ? hi : lo) = mid;
            }
            candidate = hi;
        }
        bool consistent = true;
        for (std::size_t j = candidate + 1; j <= std::min(last, candidate + 2); ++j) {
            consistent = consistent && pass(j);
        }
        if (!consistent) {
            out.full_scan = true;
            candidate = last;
            while (candidate > 0 && pass(candidate - 1)) {
                --candidate;
            }
            for (std::size_t i = 0; i < candidate; ++i) {
                eval(i);
            }
        }
        out.osnr_db = grid[candidate];
    }
    for (auto& [i, row] : cache) {
        out.evaluated.push_back(row);
    }
    return out;
}

nlohmann::ordered_json spec_to_json(const ExperimentSpec& spec) {
    nlohmann::ordered_json formats = nlohmann::ordered_json::array();
    for (auto f : spec.formats) {
        formats.push_back(format_name(f));
    }
    return {
        {"formats", formats},
        {"osnr_grid_db", spec.osnr_grid_db},
        {"paired_osnr", spec.paired_osnr},
        {"sample_counts", spec.sample_counts},
        {"trials", spec.trials},
        {"symbol_rate_baud", spec.symbol_rate_baud},
        {"ref_bandwidth_hz", spec.bank.ref_bandwidth_hz},
        {"freq_offset_hz", spec.impairments.freq_offset_hz},
        {"linewidth_hz", spec.impairments.linewidth_hz},
        {"amplitude_scale", spec.impairments.amplitude_scale},
        {"master_seed", spec.master_seed},
        {"bank", bank_method_name(spec.bank.method)},
        {"n_ref", spec.bank.n_ref},
        {"grid_points", spec.bank.grid.count()},
        {"grid_max", spec.bank.grid.max()},
        {"osnr_mismatch_db", spec.osnr_mismatch_db},
        {"distance", distance_mode_name(spec.distance)},
    };
}

nlohmann::ordered_json to_json(const SweepResult& result) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : result.rows) {
        nlohmann::ordered_json decisions = nlohmann::ordered_json::object();
        for (auto f : kFormats) {
            decisions[std::string(format_name(f))] = r.decisions[f];
        }
        rows.push_back({
            {"format", format_name(r.format)},
            {"osnr_db", r.osnr_db},
            {"k_samples", r.k_samples},
            {"trials", r.trials},
            {"correct", r.correct},
            {"accuracy", r.accuracy},
            {"mean_margin", r.mean_margin},
            {"decisions", decisions},
        });
    }
    return {{"metadata", result.metadata}, {"rows", rows}};
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
    for (const auto& [key, value] : result.metadata.items()) {
        fmt::print(out, "# {}={}\n", key, value.is_string() ? value.get<std::string>() : value.dump());
    }
    out << "format,osnr_db,k_samples,trials,correct,accuracy,mean_margin\n";
    for (const auto& r : result.rows) {
        fmt::print(out, "{},{:.2f},{},{},{},{:.4f},{:.6f}\n", format_name(r.format), r.osnr_db, r.k_samples, r.trials,
                   r.correct, r.accuracy, r.mean_margin);
    }
}

} // namespace ampcdf
