#pragma once

#include <stdexcept>
#include <string>

namespace ctlab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed text, unknown variables, out-of-range tokens, bad files.
class ParseError : public Error {
public:
    using Error::Error;
};

class SignatureMismatch : public Error {
public:
    using Error::Error;
};

// Raised instead of producing an answer when a size or node budget is hit.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

// Precondition violations of library operations.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

}  // namespace ctlab
