#include "ampcdf/sample_io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "ampcdf/errors.hpp"

namespace ampcdf {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

double parse_field(std::string_view text, std::size_t line) {
    text = trim(text);
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        throw DataFormatError(fmt::format("line {}: cannot parse number '{}'", line, text), line);
    }
    return value;
}

std::uint64_t to_little(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::big) {
        v = __builtin_bswap64(v);
    }
    return v;
}

} // namespace

SampleFileKind sample_file_kind(const std::filesystem::path& path) {
    const auto ext = path.extension().string();
    if (ext == ".csv") {
        return SampleFileKind::csv;
    }
    if (ext == ".iq") {
        return SampleFileKind::iq;
    }
    throw std::invalid_argument(fmt::format("unsupported sample file extension '{}' (use .csv or .iq)", ext));
}

SampleBlock read_samples(const std::filesystem::path& path) {
    const auto kind = sample_file_kind(path);
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(fmt::format("cannot open '{}'", path.string()));
    }
    return kind == SampleFileKind::csv ? read_samples_csv(in) : read_samples_iq(in);
}

SampleBlock read_samples_csv(std::istream& in) {
    SampleBlock block;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto row = trim(line);
        if (row.empty()) {
            continue;
        }
        if (!header_seen) {
            if (row != "i,q") {
                throw DataFormatError(fmt::format("line {}: expected header 'i,q'", line_no), line_no);
            }
            header_seen = true;
            continue;
        }
        const auto comma = row.find(',');
        if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
            throw DataFormatError(fmt::format("line {}: expected two comma-separated fields", line_no), line_no);
        }
        const double i = parse_field(row.substr(0, comma), line_no);
        const double q = parse_field(row.substr(comma + 1), line_no);
        block.samples.emplace_back(i, q);
    }
    if (!header_seen) {
        throw DataFormatError("empty sample file", line_no);
    }
    if (block.samples.empty()) {
        throw DataFormatError(fmt::format("line {}: no samples after header", line_no), line_no);
    }
    return block;
}

SampleBlock read_samples_iq(std::istream& in) {
    SampleBlock block;
    std::size_t offset = 0;
    char bytes[16];
    while (true) {
        in.read(bytes, sizeof bytes);
        const auto got = static_cast<std::size_t>(in.gcount());
        if (got == 0) {
            break;
        }
        if (got != sizeof bytes) {
            throw DataFormatError(
                fmt::format("byte offset {}: truncated sample ({} of 16 bytes)", offset, got), offset);
        }
        std::uint64_t words[2];
        std::memcpy(words, bytes, sizeof bytes);
        const double i = std::bit_cast<double>(to_little(words[0]));
        const double q = std::bit_cast<double>(to_little(words[1]));
        block.samples.emplace_back(i, q);
        offset += got;
    }
    if (block.samples.empty()) {
        throw DataFormatError("empty sample file", 0);
    }
    return block;
}

void write_samples(const std::filesystem::path& path, std::span<const cdouble> samples) {
    const auto kind = sample_file_kind(path);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError(fmt::format("cannot write '{}'", path.string()));
    }
    if (kind == SampleFileKind::csv) {
        write_samples_csv(out, samples);
    } else {
        write_samples_iq(out, samples);
    }
}

void write_samples_csv(std::ostream& out, std::span<const cdouble> samples) {
    out << "i,q\n";
    for (const auto& s : samples) {
        fmt::print(out, "{:.17g},{:.17g}\n", s.real(), s.imag());
    }
}

void write_samples_iq(std::ostream& out, std::span<const cdouble> samples) {
    for (const auto& s : samples) {
        const std::uint64_t words[2] = {to_little(std::bit_cast<std::uint64_t>(s.real())),
                                        to_little(std::bit_cast<std::uint64_t>(s.imag()))};
        out.write(reinterpret_cast<const char*>(words), sizeof words);
    }
}

} // namespace ampcdf
