#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tranchelab {

enum class ErrorCode {
    InvalidParameter,
    DuplicateCountryCode,
    NonFiniteInput,
    EmptyPanel,
    TooFewCountries,
    NotSymmetric,
    DegenerateMargins,
    InvalidYear,
    PdOutOfRange,
    NoDefaults,
    EmptyInput,
    MissingFlags,
    UnknownScheme,
    WeightMismatch,
    InvalidSubordination,
    EmptyPlan,
    MalformedCsv,
    UnknownCountryCode,
    DuplicateCell,
    UsageError,
};

std::string_view to_string(ErrorCode code);

// All library failures surface as this exception; `code()` is stable for
// programmatic dispatch, `what()` carries the human-readable detail.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace tranchelab
