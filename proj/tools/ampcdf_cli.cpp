// ampcdf: amplitude-CDF modulation classifier and Monte Carlo harness.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ampcdf/errors.hpp"
#include "ampcdf/experiment.hpp"
#include "ampcdf/sample_io.hpp"
#include "ampcdf/seeding.hpp"
#include "ampcdf/version.hpp"

namespace {

constexpr int kExitInvalidArgs = 2;
constexpr int kExitDataFormat = 3;

struct CommonOptions {
    std::uint64_t seed = 1;
    std::size_t trials = 500;
    double baud = 32e9;
    double ref_bandwidth = ampcdf::kDefaultRefBandwidthHz;
    std::vector<double> osnr;
    std::vector<std::size_t> samples;
    std::vector<std::string> formats;
    std::string bank = "analytic";
    std::size_t n_ref = 100'000;
    double osnr_mismatch = 0.0;
    std::string out;
    bool json = false;
    bool csv = false;
    std::string qam8 = "circular";
    std::string distance = "grid";
    double freq_offset = 200e6;
    double linewidth = 100e3;
    double scale = 1.0;
    unsigned threads = 0;
};

void add_common(CLI::App& cmd, CommonOptions& o) {
    cmd.add_option("--seed", o.seed, "Master seed")->capture_default_str();
    cmd.add_option("--baud", o.baud, "Symbol rate in baud")->capture_default_str();
    cmd.add_option("--ref-bandwidth", o.ref_bandwidth, "OSNR reference bandwidth in Hz")->capture_default_str();
    cmd.add_option("--bank", o.bank, "Reference bank method")
        ->check(CLI::IsMember({"analytic", "mc"}))
        ->capture_default_str();
    cmd.add_option("--nref", o.n_ref, "Symbols per Monte Carlo reference")->capture_default_str();
    cmd.add_option("--osnr-mismatch", o.osnr_mismatch, "Bank OSNR offset in dB")->capture_default_str();
    cmd.add_option("--out", o.out, "Output path (default stdout)");
    auto* json = cmd.add_flag("--json", o.json, "JSON output");
    auto* csv = cmd.add_flag("--csv", o.csv, "CSV output");
    json->excludes(csv);
    cmd.add_option("--qam8", o.qam8, "8-QAM geometry")
        ->check(CLI::IsMember({"circular", "rect"}))
        ->capture_default_str();
    cmd.add_option("--distance", o.distance, "Distance averaging")
        ->check(CLI::IsMember({"grid", "samples"}))
        ->capture_default_str();
}

void add_trial_options(CLI::App& cmd, CommonOptions& o) {
    cmd.add_option("--trials", o.trials, "Trials per cell")->capture_default_str()->check(CLI::PositiveNumber);
    cmd.add_option("--freq-offset", o.freq_offset, "Frequency offset in Hz")->capture_default_str();
    cmd.add_option("--linewidth", o.linewidth, "Combined laser linewidth in Hz")->capture_default_str();
    cmd.add_option("--scale", o.scale, "Receiver amplitude scale")->capture_default_str();
    cmd.add_option("--threads", o.threads, "Worker threads (0 = auto)")->capture_default_str();
}

std::vector<ampcdf::ModulationFormat> parse_formats(const std::vector<std::string>& names) {
    std::vector<ampcdf::ModulationFormat> out;
    if (names.empty()) {
        return {ampcdf::kFormats.begin(), ampcdf::kFormats.end()};
    }
    for (const auto& n : names) {
        const auto f = ampcdf::parse_format(n);
        if (!f) {
            throw std::invalid_argument(fmt::format("unknown format '{}'", n));
        }
        out.push_back(*f);
    }
    return out;
}

ampcdf::ModulationFormat single_format(const CommonOptions& o) {
    const auto formats = parse_formats(o.formats);
    if (o.formats.size() != 1) {
        throw std::invalid_argument("exactly one --format is required");
    }
    return formats.front();
}

double single_osnr(const CommonOptions& o) {
    if (o.osnr.size() != 1) {
        throw std::invalid_argument("exactly one --osnr value is required");
    }
    return o.osnr.front();
}

ampcdf::BankOptions bank_options(const CommonOptions& o) {
    ampcdf::BankOptions b;
    b.method = o.bank == "mc" ? ampcdf::BankMethod::monte_carlo : ampcdf::BankMethod::analytic;
    b.n_ref = o.n_ref;
    b.seed = o.seed;
    b.geometry.qam8 = o.qam8 == "rect" ? ampcdf::Qam8Geometry::rectangular : ampcdf::Qam8Geometry::circular;
    b.ref_bandwidth_hz = o.ref_bandwidth;
    return b;
}

ampcdf::DistanceMode distance_mode(const CommonOptions& o) {
    return o.distance == "samples" ? ampcdf::DistanceMode::sample_points : ampcdf::DistanceMode::grid;
}

ampcdf::ExperimentSpec experiment_spec(const CommonOptions& o) {
    ampcdf::ExperimentSpec spec;
    spec.formats = parse_formats(o.formats);
    spec.osnr_grid_db = o.osnr;
    spec.sample_counts = o.samples;
    spec.trials = o.trials;
    spec.symbol_rate_baud = o.baud;
    spec.impairments = {.freq_offset_hz = o.freq_offset, .linewidth_hz = o.linewidth, .amplitude_scale = o.scale};
    spec.master_seed = o.seed;
    spec.bank = bank_options(o);
    spec.osnr_mismatch_db = o.osnr_mismatch;
    spec.distance = distance_mode(o);
    spec.threads = o.threads;
    return spec;
}

// Writes to --out when given, stdout otherwise.
void emit(const CommonOptions& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(o.out, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw ampcdf::IoError(fmt::format("cannot write '{}'", o.out));
    }
    file << text;
}

std::string render_sweep(const CommonOptions& o, const ampcdf::SweepResult& result) {
    std::ostringstream ss;
    if (o.json) {
        ss << ampcdf::to_json(result).dump(2) << '\n';
    } else {
        ampcdf::write_sweep_csv(ss, result);
    }
    return ss.str();
}

int cmd_sweep(const CommonOptions& o, bool paired) {
    auto spec = experiment_spec(o);
    spec.paired_osnr = paired && o.osnr.size() > 1;
    if (paired && o.osnr.size() > 1 && o.osnr.size() != spec.formats.size()) {
        throw std::invalid_argument("--osnr takes one value, or one value per --format");
    }
    emit(o, render_sweep(o, ampcdf::run_sweep(spec)));
    return 0;
}

int cmd_required_osnr(const CommonOptions& o, double target, double lo, double hi) {
    auto spec = experiment_spec(o);
    spec.osnr_grid_db = {lo};
    if (o.samples.size() != 1) {
        throw std::invalid_argument("exactly one --samples value is required");
    }
    const auto format = single_format(o);
    const auto result = ampcdf::required_osnr(format, o.samples.front(), target, lo, hi, spec);

    nlohmann::ordered_json evaluated = nlohmann::ordered_json::array();
    for (const auto& row : result.evaluated) {
        evaluated.push_back({{"osnr_db", row.osnr_db}, {"correct", row.correct}, {"accuracy", row.accuracy}});
    }
    std::ostringstream ss;
    if (o.csv) {
        ss << "format,k_samples,target,required_osnr_db\n";
        ss << fmt::format("{},{},{:.4f},{}\n", ampcdf::format_name(format), o.samples.front(), target,
                          result.osnr_db ? fmt::format("{:.2f}", *result.osnr_db) : "not achieved");
    } else {
        nlohmann::ordered_json j = {
            {"format", ampcdf::format_name(format)},
            {"k_samples", o.samples.front()},
            {"target_accuracy", target},
            {"search_range_db", {lo, hi}},
            {"required_osnr_db", result.osnr_db ? nlohmann::ordered_json(*result.osnr_db)
                                                : nlohmann::ordered_json("not achieved")},
            {"full_scan", result.full_scan},
            {"evaluated", evaluated},
            {"spec", ampcdf::spec_to_json(spec)},
            {"geometry", ampcdf::geometry_id(spec.bank.geometry)},
        };
        ss << j.dump(2) << '\n';
    }
    emit(o, ss.str());
    return 0;
}

int cmd_classify(const CommonOptions& o, const std::string& input) {
    const auto block = ampcdf::read_samples(input);
    const auto bank = ampcdf::build_reference_bank(single_osnr(o), o.baud, bank_options(o));
    const auto mode = distance_mode(o);
    const auto result = ampcdf::classify(block, bank, mode);
    if (result.clipped > 0) {
        std::cerr << fmt::format("warning: {} of {} normalized amplitudes exceed the grid maximum {}\n",
                                 result.clipped, result.k_samples, bank.grid().max());
    }
    std::ostringstream ss;
    if (o.csv) {
        ss << "format,distance\n";
        for (auto f : ampcdf::kFormats) {
            ss << fmt::format("{},{:.17g}\n", ampcdf::format_name(f), result.distances[f]);
        }
    } else {
        ss << ampcdf::to_json(result, bank, mode).dump(2) << '\n';
    }
    emit(o, ss.str());
    return 0;
}

int cmd_reference_cdf(const CommonOptions& o) {
    const auto format = single_format(o);
    const auto options = bank_options(o);
    const double snr = ampcdf::osnr_to_snr(single_osnr(o), o.baud, o.ref_bandwidth);
    const auto cdf = options.method == ampcdf::BankMethod::analytic
                         ? ampcdf::reference_cdf_analytic(format, snr, options.grid, options.geometry)
                         : ampcdf::reference_cdf_mc(format, snr, options.n_ref,
                                                    ampcdf::mix_seed(o.seed, static_cast<std::uint64_t>(
                                                                                 ampcdf::format_index(format))),
                                                    options.grid, options.geometry);
    std::ostringstream ss;
    ampcdf::write_cdf_csv(ss, cdf);
    emit(o, ss.str());
    return 0;
}

int cmd_gen(const CommonOptions& o) {
    if (o.out.empty()) {
        throw std::invalid_argument("gen requires --out <path.csv|path.iq>");
    }
    if (o.samples.size() != 1) {
        throw std::invalid_argument("exactly one --samples value is required");
    }
    const auto format = single_format(o);
    const ampcdf::ChannelConfig config{
        .osnr_db = single_osnr(o),
        .symbol_rate_baud = o.baud,
        .ref_bandwidth_hz = o.ref_bandwidth,
        .freq_offset_hz = o.freq_offset,
        .linewidth_hz = o.linewidth,
        .amplitude_scale = o.scale,
        .seed = o.seed,
    };
    ampcdf::GeometryOptions geometry;
    geometry.qam8 = o.qam8 == "rect" ? ampcdf::Qam8Geometry::rectangular : ampcdf::Qam8Geometry::circular;
    const auto block = ampcdf::simulate_block(format, o.samples.front(), config, geometry);
    ampcdf::write_samples(o.out, block.samples);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Amplitude-CDF modulation classifier for coherent receivers"};
    app.require_subcommand(1);
    app.set_version_flag("--version", ampcdf::kVersion);

    CommonOptions o;

    auto* sweep_osnr = app.add_subcommand("sweep-osnr", "Accuracy vs OSNR");
    add_common(*sweep_osnr, o);
    add_trial_options(*sweep_osnr, o);
    sweep_osnr->add_option("--format", o.formats, "Formats (default: all)");
    sweep_osnr->add_option("--osnr", o.osnr, "OSNR grid in dB")->required();
    sweep_osnr->add_option("--samples", o.samples, "Samples per block")->default_val(std::vector<std::size_t>{10000});

    auto* sweep_samples = app.add_subcommand("sweep-samples", "Accuracy vs number of samples");
    add_common(*sweep_samples, o);
    add_trial_options(*sweep_samples, o);
    sweep_samples->add_option("--format", o.formats, "Formats (default: all)");
    sweep_samples->add_option("--osnr", o.osnr, "One OSNR, or one per --format")->required();
    sweep_samples->add_option("--samples", o.samples, "Sample counts")->required();

    double target = 1.0;
    double osnr_min = 0.0;
    double osnr_max = 30.0;
    auto* required = app.add_subcommand("required-osnr", "Smallest OSNR reaching a target accuracy");
    add_common(*required, o);
    add_trial_options(*required, o);
    required->add_option("--format", o.formats, "Format")->required();
    required->add_option("--samples", o.samples, "Samples per block")->default_val(std::vector<std::size_t>{10000});
    required->add_option("--target", target, "Target accuracy in (0, 1]")->capture_default_str();
    required->add_option("--osnr-min", osnr_min, "Search range start (dB)")->capture_default_str();
    required->add_option("--osnr-max", osnr_max, "Search range end (dB)")->capture_default_str();

    std::string input;
    auto* classify = app.add_subcommand("classify", "Classify a capture file (.csv or .iq)");
    add_common(*classify, o);
    classify->add_option("input", input, "Sample file")->required();
    classify->add_option("--osnr", o.osnr, "Known OSNR in dB")->required();

    auto* reference = app.add_subcommand("reference-cdf", "Emit a reference CDF as z,F CSV");
    add_common(*reference, o);
    reference->add_option("--format", o.formats, "Format")->required();
    reference->add_option("--osnr", o.osnr, "OSNR in dB")->required();

    auto* gen = app.add_subcommand("gen", "Write a simulated sample block");
    add_common(*gen, o);
    add_trial_options(*gen, o);
    gen->add_option("--format", o.formats, "Format")->required();
    gen->add_option("--osnr", o.osnr, "OSNR in dB")->required();
    gen->add_option("--samples", o.samples, "Number of samples")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalidArgs;
    }

    try {
        if (sweep_osnr->parsed()) {
            return cmd_sweep(o, false);
        }
        if (sweep_samples->parsed()) {
            return cmd_sweep(o, true);
        }
        if (required->parsed()) {
            return cmd_required_osnr(o, target, osnr_min, osnr_max);
        }
        if (classify->parsed()) {
            return cmd_classify(o, input);
        }
        if (reference->parsed()) {
            return cmd_reference_cdf(o);
        }
        if (gen->parsed()) {
            return cmd_gen(o);
        }
    } catch (const ampcdf::DataFormatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDataFormat;
    } catch (const ampcdf::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDataFormat;
    } catch (const ampcdf::DegenerateInputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDataFormat;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalidArgs;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kExitInvalidArgs;
}
