#pragma once

#include <stdexcept>
#include <string>

namespace aerots {

// Error classes map to CLI exit codes: ConfigError -> 2, DataError -> 3,
// MissingArtifactError -> 4. Everything else is a plain failure (1).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MissingArtifactError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyLogError : DataError {
    using DataError::DataError;
};

struct LogTooShortError : DataError {
    using DataError::DataError;
};

struct NoChannelsRetainedError : DataError {
    using DataError::DataError;
};

struct ChannelMismatchError : DataError {
    using DataError::DataError;
};

struct NonFiniteInputError : DataError {
    using DataError::DataError;
};

struct DegenerateLabelsError : DataError {
    using DataError::DataError;
};

struct WidthMismatchError : DataError {
    using DataError::DataError;
};

struct SingleClassError : DataError {
    using DataError::DataError;
};

struct TooFewLogsError : DataError {
    using DataError::DataError;
};

struct NoSplitsError : DataError {
    using DataError::DataError;
};

struct DegenerateDataError : DataError {
    using DataError::DataError;
};

}  // namespace aerots
