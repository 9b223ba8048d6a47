#pragma once

#include <stdexcept>
#include <string>

namespace ibea {

// Base of everything thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Key material or parameters outside their documented range, non-square
// input where a square image is required, and similar misuse.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Two images that were required to have equal dimensions do not.
class DimensionError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Unparseable on-disk data (PGM, wide-image text, key JSON).
class FormatError : public Error {
public:
    using Error::Error;
};

class MalformedHeaderError : public FormatError {
public:
    using FormatError::FormatError;
};

class UnsupportedMaxvalError : public FormatError {
public:
    using FormatError::FormatError;
};

class TruncatedPayloadError : public FormatError {
public:
    using FormatError::FormatError;
};

// A cryptanalysis stage observed something inconsistent with the cipher
// model (wrong difference-set size, non-bijective table, oracle failure).
// The message names the failing stage.
class AttackError : public Error {
public:
    using Error::Error;
};

// Pearson correlation requested over pairs with zero variance.
class UndefinedCorrelationError : public Error {
public:
    using Error::Error;
};

} // namespace ibea
