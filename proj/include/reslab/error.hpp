#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace reslab {

enum class ErrorCode {
    InvalidArgument,
    RaggedInput,
    NonMonotone,
    ZeroExposure,
    EmptyColumn,
    InsufficientData,
    NotIdentifiable,
    NoConvergence,
    SeriesTooShort,
    DegenerateHazard,
    MissingForecast,
    ZeroDenominator,
    SaturatedModel,
    NonPositiveFitted,
    TooFewDiagonals,
    Io,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for every failure the toolkit reports.
/// `code()` is stable and is what the CLI puts in its error JSON.
class ReserveError : public std::runtime_error {
public:
    ReserveError(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace reslab
