#pragma once

#include <stdexcept>
#include <string>

namespace huffcomm {

/// Raised when sequence lengths or block shapes do not agree.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a numeric argument lies outside the admissible domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised for parameter combinations the codebook or frame layout cannot support.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical stage of the receiver could not produce a usable result.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace huffcomm
