#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace viscowave {

enum class Errc {
    NonPositiveMass,
    NonPositiveRate,
    MassExceedsOne,
    NonPositiveT0,
    BadIndex,
    LengthMismatch,
    HistoryUnderfilled,
    InfeasibleConstants,
    NonPositiveEnergy,
    WindowTooShort,
    SameClassAtEndpoints,
    InvalidConfig,
    Blowup,
};

[[nodiscard]] constexpr std::string_view to_string(Errc c) noexcept {
    switch (c) {
        case Errc::NonPositiveMass: return "NonPositiveMass";
        case Errc::NonPositiveRate: return "NonPositiveRate";
        case Errc::MassExceedsOne: return "MassExceedsOne";
        case Errc::NonPositiveT0: return "NonPositiveT0";
        case Errc::BadIndex: return "BadIndex";
        case Errc::LengthMismatch: return "LengthMismatch";
        case Errc::HistoryUnderfilled: return "HistoryUnderfilled";
        case Errc::InfeasibleConstants: return "InfeasibleConstants";
        case Errc::NonPositiveEnergy: return "NonPositiveEnergy";
        case Errc::WindowTooShort: return "WindowTooShort";
        case Errc::SameClassAtEndpoints: return "SameClassAtEndpoints";
        case Errc::InvalidConfig: return "InvalidConfig";
        case Errc::Blowup: return "Blowup";
    }
    return "Unknown";
}

/// Base exception for every failure the library reports. The code lets
/// callers (and tests) dispatch without parsing messages.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

    [[nodiscard]] Errc code() const noexcept { return code_; }
    /// The message without the code prefix.
    [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

private:
    Errc code_;
    std::string detail_;
};

}  // namespace viscowave
