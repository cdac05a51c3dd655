#pragma once

#include <stdexcept>
#include <string>

namespace confdist {

// Argument outside the mathematical domain of a function (p outside (0,1), r < 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Model or configuration parameters that cannot describe a valid object.
class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical procedure failed: unbracketed root, diverging normalizer, non-finite value.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace confdist
