#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>

namespace ampcdf {

/// Candidate M-QAM formats. Underlying value is the candidate index m (1-based).
enum class ModulationFormat : int {
    qam4 = 1,
    qam8 = 2,
    qam16 = 3,
    qam32 = 4,
    qam64 = 5,
};

/// The closed candidate set, in ascending order of constellation size.
inline constexpr std::array kFormats = {
    ModulationFormat::qam4, ModulationFormat::qam8, ModulationFormat::qam16,
    ModulationFormat::qam32, ModulationFormat::qam64,
};

inline constexpr std::size_t kFormatCount = kFormats.size();

constexpr int format_index(ModulationFormat f) noexcept { return static_cast<int>(f); }

/// Zero-based slot of a format inside kFormats.
constexpr std::size_t format_slot(ModulationFormat f) noexcept {
    return static_cast<std::size_t>(format_index(f) - 1);
}

constexpr int constellation_order(ModulationFormat f) noexcept {
    switch (f) {
    case ModulationFormat::qam4: return 4;
    case ModulationFormat::qam8: return 8;
    case ModulationFormat::qam16: return 16;
    case ModulationFormat::qam32: return 32;
    case ModulationFormat::qam64: return 64;
    }
    return 0;
}

std::string_view format_name(ModulationFormat f) noexcept;

/// Accepts "QAM16", "qam16", "16qam", "16-QAM" and the bare order "16".
std::optional<ModulationFormat> parse_format(std::string_view text);

/// Fixed-size map keyed by ModulationFormat.
template <typename T>
struct FormatMap {
    std::array<T, kFormatCount> values{};

    T& operator[](ModulationFormat f) { return values[format_slot(f)]; }
    const T& operator[](ModulationFormat f) const { return values[format_slot(f)]; }

    bool operator==(const FormatMap&) const = default;
};

/// Builds a FormatMap by calling `fn(format)` for every candidate, in order.
template <typename Fn>
auto make_format_map(Fn&& fn) {
    using T = std::invoke_result_t<Fn&, ModulationFormat>;
    return [&]<std::size_t... I>(std::index_sequence<I...>) {
        return FormatMap<T>{{fn(kFormats[I])...}};
    }(std::make_index_sequence<kFormatCount>{});
}

} // namespace ampcdf
