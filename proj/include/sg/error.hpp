#pragma once

#include <stdexcept>
#include <string>

namespace sg {

// Error taxonomy maps onto CLI exit codes: Usage -> 2, everything else -> 1.
enum class ErrorKind { Parse, Validate, Domain, Budget, Usage };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string msg)
        : std::runtime_error(std::move(msg)), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
    throw Error(kind, msg);
}

} // namespace sg
