#pragma once

#include <stdexcept>
#include <string>

namespace causal_atlas {

enum class ErrorCode {
    // input data problems (CLI exit code 3)
    DimensionMismatch,
    RateOutOfRange,
    InsufficientSamples,
    NonDiscreteColumn,
    ConstantColumn,
    DataContainsMissing,
    TestMismatch,
    InsufficientLength,
    SeriesTooShort,
    EmptyDataset,
    AllMissingColumn,
    AllColumnsConstant,
    MalformedCsv,
    InvalidArgument,
    // algorithm / runtime failures (exit code 4)
    NoConsistentExtension,
    SingularSubmatrix,
    SingularInstantaneousSystem,
    NonConvergence,
    Cancelled,
    CycleFromConstraints,
    ConflictingConstraints,
    UnknownAlgorithm,
    UnknownFormat,
    NotFound,
    InvalidPhase,
    Io,
};

const char* to_string(ErrorCode code);

/// True for codes caused by the caller's data rather than by the engine.
bool is_data_error(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace causal_atlas
