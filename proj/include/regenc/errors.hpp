#pragma once

#include <stdexcept>
#include <string>

namespace regenc {

// Base of everything the library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input: letters outside an alphabet, bad JSON shapes.
struct InputError : Error {
    using Error::Error;
};

// A documented precondition or internal invariant does not hold.
struct ContractError : Error {
    using Error::Error;
};

// Unknown selector or inconsistent configuration.
struct ConfigError : Error {
    using Error::Error;
};

// A scan, step or length budget ran out before the answer was found.
struct ResourceError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

} // namespace regenc
