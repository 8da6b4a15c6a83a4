#pragma once

#include <stdexcept>
#include <string>

namespace ellipse_lab {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The requested accuracy could not be certified at the available precision.
class PrecisionError : public Error {
public:
    using Error::Error;
};

class InvalidBracketError : public Error {
public:
    using Error::Error;
};

class NonConvergenceError : public Error {
public:
    using Error::Error;
};

/// Linear system is singular (duplicate abscissae, dependent rows, ...).
class SingularError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

class ConventionMismatchError : public Error {
public:
    using Error::Error;
};

/// No sign change of the collocation determinant near the seed.
class NoSignChangeError : public Error {
public:
    using Error::Error;
};

class CertificationError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace ellipse_lab
