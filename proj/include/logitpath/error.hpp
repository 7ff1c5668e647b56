#pragma once

#include <stdexcept>
#include <string>

namespace logitpath {

// Each kind maps onto one CLI exit code (see tools/logitpath.cpp).
enum class ErrorKind {
    parse = 2,
    dimension = 3,
    tolerance = 4,
    non_ancestral = 5,
    taylor_unsupported = 6,
    empty_sweep = 7,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace logitpath
