#pragma once

#include <stdexcept>

namespace apdperm {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument violates an operation's domain (bad modulus, excluded parameter, ...).
class BadParams : public Error {
public:
    using Error::Error;
};

// gcd(a, m) != 1 where an inverse mod m was required.
class NotInvertible : public Error {
public:
    using Error::Error;
};

// A prime was required and the primality check failed.
class NotPrime : public Error {
public:
    using Error::Error;
};

// Index or value outside the permitted range.
class OutOfRange : public Error {
public:
    using Error::Error;
};

// Instance exceeds a hard size limit of the algorithm (e.g. factorial search).
class TooLarge : public Error {
public:
    using Error::Error;
};

// Input is valid but lies outside what the method can ever produce
// (e.g. moduli 2, 3, 5, 7, or a prime below a construction threshold).
class Unsupported : public Error {
public:
    using Error::Error;
};

// A construction that should succeed in-contract did not; surfaced, never masked.
class ConstructionFailed : public Error {
public:
    using Error::Error;
};

// A deterministic parameter scan exhausted its range.
class NotFound : public Error {
public:
    using Error::Error;
};

// A cached entry failed to parse or re-verify.
class CorruptEntry : public Error {
public:
    using Error::Error;
};

// A permutation that must be AP-destroying failed the exhaustive check.
class VerificationFailed : public Error {
public:
    using Error::Error;
};

// Malformed serialized input.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace apdperm
