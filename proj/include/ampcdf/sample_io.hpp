#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "ampcdf/channel.hpp"

namespace ampcdf {

enum class SampleFileKind {
    csv, ///< header `i,q`, one sample per row
    iq,  ///< little-endian float64 pairs, I then Q
};

/// Kind from the file extension (`.csv` or `.iq`); throws std::invalid_argument otherwise.
SampleFileKind sample_file_kind(const std::filesystem::path& path);

/// Throws DataFormatError (with line or byte offset) on malformed or empty
/// input and IoError when the file cannot be opened.
SampleBlock read_samples(const std::filesystem::path& path);
SampleBlock read_samples_csv(std::istream& in);
SampleBlock read_samples_iq(std::istream& in);

void write_samples(const std::filesystem::path& path, std::span<const cdouble> samples);
void write_samples_csv(std::ostream& out, std::span<const cdouble> samples);
void write_samples_iq(std::ostream& out, std::span<const cdouble> samples);

} // namespace ampcdf
