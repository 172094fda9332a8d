#pragma once

/// @file errors.hpp
/// Exception hierarchy. Every solver failure derives from barwave::Error so
/// callers can catch one type; the CLI maps the concrete types onto exit codes.

#include <stdexcept>
#include <string>

namespace barwave {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid input: nonpositive length, damper outside the bar, NaN, ...
class DomainError : public Error {
public:
    using Error::Error;
};

/// Leading or trailing characteristic coefficient vanishes (some h_i = +-1).
class CriticalCoefficient : public Error {
public:
    using Error::Error;
};

class ConvergenceFailure : public Error {
public:
    using Error::Error;
};

/// Green's function evaluated on (or numerically at) a pole.
class PoleProximity : public Error {
public:
    using Error::Error;
};

/// Non-simple nonzero eigenvalue; the eigenmode expansion does not cover it.
class MultiplicityError : public Error {
public:
    using Error::Error;
};

/// Modal expansion requested in a critical regime.
class ExpansionInvalid : public Error {
public:
    using Error::Error;
};

/// Double pole at s = 0 outside the h2 = 1/h1, h3 = -(h1+h2)/2 family.
class UnsupportedDoublePole : public Error {
public:
    using Error::Error;
};

/// Critical regime with no available solution (e.g. h2 = 1 with an internal damper).
class UnsupportedRegime : public Error {
public:
    using Error::Error;
};

/// Some h_i = -1: the solution ceases to exist once a wavefront reaches that damper.
class SuperInstability : public UnsupportedRegime {
public:
    using UnsupportedRegime::UnsupportedRegime;
};

class MeshError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace barwave
