#include "ampcdf/modulation.hpp"

#include <algorithm>
#include <cctype>

namespace ampcdf {

std::string_view format_name(ModulationFormat f) noexcept {
    switch (f) {
    case ModulationFormat::qam4: return "QAM4";
    case ModulationFormat::qam8: return "QAM8";
    case ModulationFormat::qam16: return "QAM16";
    case ModulationFormat::qam32: return "QAM32";
    case ModulationFormat::qam64: return "QAM64";
    }
    return "?";
}

std::optional<ModulationFormat> parse_format(std::string_view text) {
    std::string digits;
    std::string letters;
    for (char c : text) {
        const auto u = static_cast<unsigned char>(c);
        if (std::isdigit(u)) {
            digits.push_back(c);
        } else if (std::isalpha(u)) {
            letters.push_back(static_cast<char>(std::tolower(u)));
        } else if (c != '-' && c != '_') {
            return std::nullopt;
        }
    }
    if (digits.empty() || !(letters.empty() || letters == "qam")) {
        return std::nullopt;
    }
    for (auto f : kFormats) {
        if (std::to_string(constellation_order(f)) == digits) {
            return f;
        }
    }
    return std::nullopt;
}

} // namespace ampcdf
