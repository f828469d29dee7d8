#pragma once

#include <stdexcept>
#include <string>

namespace svp {

// Error categories; the CLI maps these onto exit codes
// (InvalidInput -> 2, Precondition -> 3, ResourceCap -> 4, Internal -> 1).
enum class ErrorKind {
    InvalidInput,   // malformed data: bad shapes, out-of-domain arguments
    Precondition,   // mathematically valid input outside an operation's domain
    ResourceCap,    // a configured enumeration or size cap would be exceeded
    Internal        // an internal consistency check failed
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace svp
