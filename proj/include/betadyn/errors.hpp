#pragma once

#include <stdexcept>
#include <string>

namespace betadyn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A point or parameter outside the domain of an operation (e.g. x outside [0,1)).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Digit outside the alphabet or a word that is not admissible for the base.
class InvalidWord : public Error {
public:
    using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Projected work exceeds the configured budget.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

/// Finite data does not cover the requested range (short rate tables, depth caps).
class RangeError : public Error {
public:
    using Error::Error;
};

/// A root-finding bracket that does not contain a sign change.
class BracketError : public Error {
public:
    using Error::Error;
};

}  // namespace betadyn
