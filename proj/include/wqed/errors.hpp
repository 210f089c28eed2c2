// errors.hpp — exception types shared by every wqed module

#pragma once

#include <stdexcept>
#include <string>

namespace wqed {

// Invalid model parameters or configuration (CLI exit code 2).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// An operation was called outside its domain, e.g. an energy outside the band.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A solver or quadrature failed to reach its target (CLI exit code 3).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace wqed
