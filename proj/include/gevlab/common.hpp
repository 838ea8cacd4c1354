#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace gevlab {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

enum class ErrorCode {
    InvalidArgument,
    Domain,
    NonConvergent,
    Truncation,
    InsufficientDecay,
    NoiseFloor,
    Assumption,
    Parse,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

// Serial is the reference path; Parallel distributes independent rows over OpenMP threads.
enum class Exec { Serial, Parallel };

}  // namespace gevlab
