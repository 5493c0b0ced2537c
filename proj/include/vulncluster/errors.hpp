#pragma once

#include <stdexcept>
#include <string>

namespace vulncluster {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Unreadable paths, missing files.
struct IoError : Error {
    using Error::Error;
};

/// Malformed metric-vector strings or stage dumps.
struct ParseError : Error {
    using Error::Error;
};

/// Corpus-level inconsistencies, e.g. duplicate ticket ids.
struct CorpusError : Error {
    using Error::Error;
};

/// Missing or illegal metric values while computing a base score.
struct ScoringError : Error {
    using Error::Error;
};

/// Shape mismatches between matrices, vectors or aligned lists.
struct DimensionError : Error {
    using Error::Error;
};

/// Degenerate numeric inputs or failed convergence.
struct NumericError : Error {
    using Error::Error;
};

/// Invalid pipeline configuration.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace vulncluster
