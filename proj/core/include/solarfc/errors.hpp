#pragma once

#include <stdexcept>
#include <string>

namespace solarfc {

// Base for all library errors; subcategories map onto CLI exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Problems with the input data itself (bad schema, bad values).
struct ValidationError : Error {
    using Error::Error;
};

struct FileNotFoundError : ValidationError {
    explicit FileNotFoundError(const std::string& path)
        : ValidationError("file not found: " + path) {}
};

struct SchemaMismatchError : ValidationError {
    using ValidationError::ValidationError;
};

struct EmptyDatasetError : ValidationError {
    using ValidationError::ValidationError;
};

struct AllRowsDroppedError : ValidationError {
    using ValidationError::ValidationError;
};

struct InsufficientDaysError : ValidationError {
    using ValidationError::ValidationError;
};

// Numerical / algorithmic failures.
struct TooFewPointsError : Error {
    using Error::Error;
};

struct DegenerateDataError : Error {
    using Error::Error;
};

struct ZeroVarianceError : Error {
    using Error::Error;
};

struct LengthMismatchError : Error {
    using Error::Error;
};

struct EmptyInputError : Error {
    using Error::Error;
};

struct EmptySelectionError : Error {
    using Error::Error;
};

struct DimensionMismatchError : Error {
    using Error::Error;
};

struct SingularKernelError : Error {
    using Error::Error;
};

struct ConstantColumnError : Error {
    using Error::Error;
};

struct OptimizerFailureError : Error {
    using Error::Error;
};

struct UnsupportedLevelError : Error {
    using Error::Error;
};

struct ArtifactCorruptError : Error {
    using Error::Error;
};

}  // namespace solarfc
