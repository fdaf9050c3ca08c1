#pragma once

#include <stdexcept>
#include <string>

namespace chaintx {

// Precondition or configuration violation detected before any numerics run.
class InvalidArgument : public std::invalid_argument {
public:
    explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

// Iteration limits, non-unitary propagators, sector leakage.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidArgument(what);
}

} // namespace chaintx
