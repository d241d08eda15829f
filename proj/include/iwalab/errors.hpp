#pragma once

#include <stdexcept>
#include <string>

namespace iwalab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ContextMismatch : public Error {
public:
    ContextMismatch() : Error("operands live in different p-adic contexts") {}
};

class NotAUnit : public Error {
public:
    using Error::Error;
};

class ZeroPolynomial : public Error {
public:
    ZeroPolynomial() : Error("zero polynomial") {}
};

class NotDistinguished : public Error {
public:
    using Error::Error;
};

class InsufficientDegreeCap : public Error {
public:
    using Error::Error;
};

/// A quantity is indistinguishable from zero (or unbounded) at the working precision.
class PrecisionExhausted : public Error {
public:
    using Error::Error;
};

class BadLevels : public Error {
public:
    using Error::Error;
};

class NotTStable : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

/// A growth series violates the frozen-size rule.
class InconsistentSeries : public Error {
public:
    using Error::Error;
};

class NotAPBase : public Error {
public:
    using Error::Error;
};

/// Malformed input file, with a human readable position.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace iwalab
