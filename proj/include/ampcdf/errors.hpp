#pragma once

#include <stdexcept>
#include <string>

namespace ampcdf {

/// Input has no usable amplitude information (e.g. every sample is zero).
class DegenerateInputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A file could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A sample file could not be parsed. `location` is a line number for CSV
/// input and a byte offset for binary input.
class DataFormatError : public std::runtime_error {
public:
    DataFormatError(const std::string& what, std::size_t location)
        : std::runtime_error(what), location_(location) {}

    std::size_t location() const noexcept { return location_; }

private:
    std::size_t location_;
};

} // namespace ampcdf
