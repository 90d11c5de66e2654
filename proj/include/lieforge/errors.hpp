#pragma once

#include <stdexcept>
#include <string>

namespace lieforge {

// Base of everything the library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad user input: malformed files, illegal parameters. The CLI maps these to exit code 2.
class InvalidInput : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

class InvalidParameters : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

class EvenN : public InvalidParameters {
public:
    explicit EvenN(int n)
        : InvalidParameters("n = " + std::to_string(n) + " is even; the Jacobi identity fails for even n") {}
};

class SizeExceeded : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

// A computed object failed a structural verification.
class VerificationFailure : public Error {
public:
    using Error::Error;
};

class ActionNotDerivation : public VerificationFailure {
public:
    using VerificationFailure::VerificationFailure;
};

class NonDiagonalizable : public VerificationFailure {
public:
    using VerificationFailure::VerificationFailure;
};

class NotACocycle : public VerificationFailure {
public:
    using VerificationFailure::VerificationFailure;
};

class PrimeExhaustion : public Error {
public:
    using Error::Error;
};

}  // namespace lieforge
