#pragma once

#include <stdexcept>
#include <string>

namespace nbinv {

// Error taxonomy shared by the C++ core and the C API (codes match nbinv.h).
enum class ErrorCode : int {
    Ok = 0,
    Parse = 1,
    Io = 2,
    Config = 3,
    DimensionMismatch = 4,
    DegreeMismatch = 5,
    GridMismatch = 6,
    NotConvergent = 7,
    Overflow = 8,
    NotSupported = 9,
    NoInvolution = 10,
    NotHermitian = 11,
    NotInvertible = 12,
    ZeroScalarPart = 13,
    SingularToWorkingPrecision = 14,
    DiagonalNotInvertible = 15,
    PivotNotUnit = 16,
    NotInvertibleInAmbient = 17,
    MaskViolation = 18,
    ApproximationStalled = 19,
    PropertyFailed = 20,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace nbinv
