#pragma once

#include <stdexcept>
#include <string>

namespace pharm {

/// Error categories shared by the C++ core and the C boundary.
enum class ErrorCode : int {
    InvalidArgument = 1,
    Domain = 2,
    Regime = 3,
    Bracket = 4,
    Convergence = 5,
    Io = 6,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const char* what) {
    if (!cond) throw Error(code, what);
}

} // namespace pharm
