#pragma once

#include <stdexcept>
#include <string>

namespace jointradius {

enum class ErrorCode {
    DimensionMismatch,
    UnsupportedExact,
    CapExceeded,
    ZeroVector,
    SlotMismatch,
    ShapeMismatch,
    ShrinkNotAllowed,
    InvalidExponent,
    InvalidK,
    NotEndomorphism,
    DimensionTooLarge,
    EmptySample,
    NoWitnessKnown,
    InvalidSpace,
    ParseError,
    IoError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace jointradius
