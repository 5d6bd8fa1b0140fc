#pragma once

#include <stdexcept>
#include <string>

namespace toda {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidParameter : Error {
    using Error::Error;
};
struct DimensionMismatch : Error {
    using Error::Error;
};
// a diagonal matrix element <i|G|i> (or det u) vanished where a ratio is needed
struct SingularElement : Error {
    using Error::Error;
};
struct IntegrationFailure : Error {
    IntegrationFailure(const std::string& what, double where) : Error(what), location(where) {}
    double location;
};
struct ConfigError : Error {
    using Error::Error;
};

} // namespace toda
