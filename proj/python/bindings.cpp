#include <sstream>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ampcdf/cdf.hpp"
#include "ampcdf/channel.hpp"
#include "ampcdf/classifier.hpp"
#include "ampcdf/constellation.hpp"
#include "ampcdf/errors.hpp"
#include "ampcdf/experiment.hpp"
#include "ampcdf/modulation.hpp"
#include "ampcdf/version.hpp"

namespace py = pybind11;
using namespace ampcdf;

namespace {

using ComplexArray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;
using RealArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<cdouble> to_samples(const ComplexArray& a) {
    if (a.ndim() != 1) {
        throw std::invalid_argument("samples must be a 1-D complex array");
    }
    return {a.data(), a.data() + a.size()};
}

template <class T>
py::array_t<T> to_array(std::span<const T> v) {
    py::array_t<T> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

GeometryOptions geometry_from(const std::string& qam8) {
    if (qam8 == "circular") {
        return {Qam8Geometry::circular};
    }
    if (qam8 == "rect" || qam8 == "rectangular") {
        return {Qam8Geometry::rectangular};
    }
    throw std::invalid_argument("qam8 geometry must be 'circular' or 'rect'");
}

BankMethod bank_from(const std::string& name) {
    if (name == "analytic") {
        return BankMethod::analytic;
    }
    if (name == "mc" || name == "monte_carlo") {
        return BankMethod::monte_carlo;
    }
    throw std::invalid_argument("bank must be 'analytic' or 'mc'");
}

DistanceMode distance_from(const std::string& name) {
    if (name == "grid") {
        return DistanceMode::grid;
    }
    if (name == "samples" || name == "sample_points") {
        return DistanceMode::sample_points;
    }
    throw std::invalid_argument("distance must be 'grid' or 'samples'");
}

py::dict distances_dict(const FormatMap<double>& d) {
    py::dict out;
    for (auto f : kFormats) {
        out[py::cast(f)] = d[f];
    }
    return out;
}

} // namespace

PYBIND11_MODULE(_ampcdf, m) {
    m.doc() = "Amplitude-CDF modulation format classifier";
    m.attr("__version__") = std::string(kVersion);

    py::register_exception<DataFormatError>(m, "DataFormatError", PyExc_ValueError);
    py::register_exception<DegenerateInputError>(m, "DegenerateInputError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    py::enum_<ModulationFormat>(m, "Format")
        .value("QAM4", ModulationFormat::qam4)
        .value("QAM8", ModulationFormat::qam8)
        .value("QAM16", ModulationFormat::qam16)
        .value("QAM32", ModulationFormat::qam32)
        .value("QAM64", ModulationFormat::qam64);

    m.def("formats", [] { return std::vector<ModulationFormat>(kFormats.begin(), kFormats.end()); });
    m.def("parse_format", [](const std::string& text) {
        const auto f = parse_format(text);
        if (!f) {
            throw std::invalid_argument("unknown format: " + text);
        }
        return *f;
    });
    m.def("format_name", [](ModulationFormat f) { return std::string(format_name(f)); });

    m.def(
        "constellation_points",
        [](ModulationFormat f, const std::string& qam8) {
            return to_array(constellation_points(f, geometry_from(qam8)).points());
        },
        py::arg("format"), py::arg("qam8") = "circular");

    m.def("osnr_to_snr", &osnr_to_snr, py::arg("osnr_db"), py::arg("symbol_rate_baud"),
          py::arg("ref_bandwidth_hz") = kDefaultRefBandwidthHz);

    m.def(
        "simulate_block",
        [](ModulationFormat f, std::size_t k, double osnr_db, double symbol_rate_baud, double freq_offset_hz,
           double linewidth_hz, double amplitude_scale, std::uint64_t seed, const std::string& qam8) {
            const ChannelConfig cfg{
                .osnr_db = osnr_db,
                .symbol_rate_baud = symbol_rate_baud,
                .freq_offset_hz = freq_offset_hz,
                .linewidth_hz = linewidth_hz,
                .amplitude_scale = amplitude_scale,
                .seed = seed,
            };
            const auto block = simulate_block(f, k, cfg, geometry_from(qam8));
            return to_array<cdouble>(block.samples);
        },
        py::arg("format"), py::arg("k"), py::arg("osnr_db"), py::arg("symbol_rate_baud") = 32e9,
        py::arg("freq_offset_hz") = 0.0, py::arg("linewidth_hz") = 0.0, py::arg("amplitude_scale") = 1.0,
        py::arg("seed") = 0, py::arg("qam8") = "circular");

    m.def(
        "normalized_amplitudes",
        [](const ComplexArray& samples) {
            const auto v = normalized_amplitudes(to_samples(samples));
            return to_array<double>(v);
        },
        py::arg("samples"));

    py::class_<EmpiricalCdf>(m, "EmpiricalCdf")
        .def_property_readonly("z", [](const EmpiricalCdf& c) { return to_array<double>(c.grid().points()); })
        .def_property_readonly("values", [](const EmpiricalCdf& c) { return to_array(c.values()); })
        .def_property_readonly("sample_count", &EmpiricalCdf::sample_count)
        .def_property_readonly("clipped", &EmpiricalCdf::clipped)
        .def("__len__", &EmpiricalCdf::size);

    m.def(
        "empirical_cdf",
        [](const RealArray& amplitudes, std::size_t grid_points, double grid_max) {
            return empirical_cdf(std::span<const double>(amplitudes.data(), amplitudes.size()),
                                 AmplitudeGrid(grid_points, grid_max));
        },
        py::arg("amplitudes"), py::arg("grid_points") = AmplitudeGrid::kDefaultCount,
        py::arg("grid_max") = AmplitudeGrid::kDefaultMax);

    m.def(
        "reference_cdf_analytic",
        [](ModulationFormat f, double snr_db, const std::string& qam8) {
            return reference_cdf_analytic(f, snr_db, AmplitudeGrid{}, geometry_from(qam8));
        },
        py::arg("format"), py::arg("snr_db"), py::arg("qam8") = "circular");

    m.def(
        "reference_cdf_mc",
        [](ModulationFormat f, double snr_db, std::size_t n_ref, std::uint64_t seed, const std::string& qam8) {
            py::gil_scoped_release release;
            return reference_cdf_mc(f, snr_db, n_ref, seed, AmplitudeGrid{}, geometry_from(qam8));
        },
        py::arg("format"), py::arg("snr_db"), py::arg("n_ref") = 100'000, py::arg("seed") = 1,
        py::arg("qam8") = "circular");

    m.def("cdf_distance", &cdf_distance, py::arg("received"), py::arg("reference"));

    py::class_<ReferenceBank>(m, "ReferenceBank")
        .def_readonly("osnr_db", &ReferenceBank::osnr_db)
        .def_readonly("snr_db", &ReferenceBank::snr_db)
        .def_readonly("symbol_rate_baud", &ReferenceBank::symbol_rate_baud)
        .def("__getitem__", [](const ReferenceBank& b, ModulationFormat f) { return b.entries[f]; });

    m.def(
        "build_reference_bank",
        [](double osnr_db, double symbol_rate_baud, const std::string& bank, std::size_t n_ref, std::uint64_t seed,
           const std::string& qam8) {
            BankOptions options;
            options.method = bank_from(bank);
            options.n_ref = n_ref;
            options.seed = seed;
            options.geometry = geometry_from(qam8);
            py::gil_scoped_release release;
            return build_reference_bank(osnr_db, symbol_rate_baud, options);
        },
        py::arg("osnr_db"), py::arg("symbol_rate_baud") = 32e9, py::arg("bank") = "analytic",
        py::arg("n_ref") = 100'000, py::arg("seed") = 1, py::arg("qam8") = "circular");

    py::class_<ClassificationResult>(m, "ClassificationResult")
        .def_readonly("decision", &ClassificationResult::decision)
        .def_property_readonly("distances",
                               [](const ClassificationResult& r) { return distances_dict(r.distances); })
        .def_readonly("margin", &ClassificationResult::margin)
        .def_readonly("k_samples", &ClassificationResult::k_samples)
        .def_readonly("clipped", &ClassificationResult::clipped)
        .def("__eq__", [](const ClassificationResult& a, const ClassificationResult& b) { return a == b; });

    m.def(
        "classify",
        [](const ComplexArray& samples, const ReferenceBank& bank, const std::string& distance) {
            return classify(to_samples(samples), bank, distance_from(distance));
        },
        py::arg("samples"), py::arg("bank"), py::arg("distance") = "grid");

    m.def(
        "classification_json",
        [](const ClassificationResult& r, const ReferenceBank& bank, const std::string& distance) {
            return to_json(r, bank, distance_from(distance)).dump(2);
        },
        py::arg("result"), py::arg("bank"), py::arg("distance") = "grid");

    py::class_<SweepRow>(m, "SweepRow")
        .def_readonly("format", &SweepRow::format)
        .def_readonly("osnr_db", &SweepRow::osnr_db)
        .def_readonly("k_samples", &SweepRow::k_samples)
        .def_readonly("trials", &SweepRow::trials)
        .def_readonly("correct", &SweepRow::correct)
        .def_readonly("accuracy", &SweepRow::accuracy)
        .def_readonly("mean_margin", &SweepRow::mean_margin)
        .def_property_readonly("decisions", [](const SweepRow& r) {
            py::dict out;
            for (auto f : kFormats) {
                out[py::cast(f)] = r.decisions[f];
            }
            return out;
        });

    const auto make_spec = [](std::vector<ModulationFormat> formats, std::vector<double> osnr_db,
                              std::vector<std::size_t> samples, std::size_t trials, bool paired, double baud,
                              std::uint64_t seed, const std::string& bank, std::size_t n_ref, double mismatch,
                              const std::string& distance, unsigned threads) {
        ExperimentSpec spec;
        if (!formats.empty()) {
            spec.formats = std::move(formats);
        }
        spec.osnr_grid_db = std::move(osnr_db);
        spec.sample_counts = std::move(samples);
        spec.trials = trials;
        spec.paired_osnr = paired;
        spec.symbol_rate_baud = baud;
        spec.master_seed = seed;
        spec.bank.method = bank_from(bank);
        spec.bank.n_ref = n_ref;
        spec.osnr_mismatch_db = mismatch;
        spec.distance = distance_from(distance);
        spec.threads = threads;
        return spec;
    };

    m.def(
        "run_sweep",
        [make_spec](std::vector<ModulationFormat> formats, std::vector<double> osnr_db,
                    std::vector<std::size_t> samples, std::size_t trials, bool paired, double baud,
                    std::uint64_t seed, const std::string& bank, std::size_t n_ref, double mismatch,
                    const std::string& distance, unsigned threads) {
            const auto spec = make_spec(std::move(formats), std::move(osnr_db), std::move(samples), trials, paired,
                                        baud, seed, bank, n_ref, mismatch, distance, threads);
            SweepResult result;
            {
                py::gil_scoped_release release;
                result = run_sweep(spec);
            }
            std::ostringstream csv;
            write_sweep_csv(csv, result);
            return py::make_tuple(result.rows, csv.str());
        },
        py::arg("formats") = std::vector<ModulationFormat>{}, py::arg("osnr_db"),
        py::arg("samples") = std::vector<std::size_t>{10'000}, py::arg("trials") = 500, py::arg("paired") = false,
        py::arg("symbol_rate_baud") = 32e9, py::arg("seed") = 1, py::arg("bank") = "analytic",
        py::arg("n_ref") = 100'000, py::arg("osnr_mismatch_db") = 0.0, py::arg("distance") = "grid",
        py::arg("threads") = 0,
        "Returns (rows, csv_text).");

    m.def(
        "required_osnr",
        [make_spec](ModulationFormat format, std::size_t k, double target, double osnr_min, double osnr_max,
                    std::size_t trials, double baud, std::uint64_t seed, unsigned threads) -> py::object {
            const auto spec = make_spec({format}, {}, {k}, trials, false, baud, seed, "analytic", 100'000, 0.0,
                                        "grid", threads);
            RequiredOsnrResult res;
            {
                py::gil_scoped_release release;
                res = required_osnr(format, k, target, osnr_min, osnr_max, spec);
            }
            return res.osnr_db ? py::cast(*res.osnr_db) : py::none();
        },
        py::arg("format"), py::arg("k") = 10'000, py::arg("target") = 1.0, py::arg("osnr_min") = 0.0,
        py::arg("osnr_max") = 30.0, py::arg("trials") = 500, py::arg("symbol_rate_baud") = 32e9,
        py::arg("seed") = 1, py::arg("threads") = 0,
        "Smallest OSNR (0.5 dB grid) from which accuracy stays at or above target, or None.");
}
