#include "causal_atlas/error.hpp"

namespace causal_atlas {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::RateOutOfRange: return "RateOutOfRange";
        case ErrorCode::InsufficientSamples: return "InsufficientSamples";
        case ErrorCode::NonDiscreteColumn: return "NonDiscreteColumn";
        case ErrorCode::ConstantColumn: return "ConstantColumn";
        case ErrorCode::DataContainsMissing: return "DataContainsMissing";
        case ErrorCode::TestMismatch: return "TestMismatch";
        case ErrorCode::InsufficientLength: return "InsufficientLength";
        case ErrorCode::SeriesTooShort: return "SeriesTooShort";
        case ErrorCode::EmptyDataset: return "EmptyDataset";
        case ErrorCode::AllMissingColumn: return "AllMissingColumn";
        case ErrorCode::AllColumnsConstant: return "AllColumnsConstant";
        case ErrorCode::MalformedCsv: return "MalformedCsv";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::NoConsistentExtension: return "NoConsistentExtension";
        case ErrorCode::SingularSubmatrix: return "SingularSubmatrix";
        case ErrorCode::SingularInstantaneousSystem: return "SingularInstantaneousSystem";
        case ErrorCode::NonConvergence: return "NonConvergence";
        case ErrorCode::Cancelled: return "Cancelled";
        case ErrorCode::CycleFromConstraints: return "CycleFromConstraints";
        case ErrorCode::ConflictingConstraints: return "ConflictingConstraints";
        case ErrorCode::UnknownAlgorithm: return "UnknownAlgorithm";
        case ErrorCode::UnknownFormat: return "UnknownFormat";
        case ErrorCode::NotFound: return "NotFound";
        case ErrorCode::InvalidPhase: return "InvalidPhase";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

bool is_data_error(ErrorCode code) {
    switch (code) {
        case ErrorCode::DimensionMismatch:
        case ErrorCode::RateOutOfRange:
        case ErrorCode::InsufficientSamples:
        case ErrorCode::NonDiscreteColumn:
        case ErrorCode::ConstantColumn:
        case ErrorCode::DataContainsMissing:
        case ErrorCode::TestMismatch:
        case ErrorCode::InsufficientLength:
        case ErrorCode::SeriesTooShort:
        case ErrorCode::EmptyDataset:
        case ErrorCode::AllMissingColumn:
        case ErrorCode::AllColumnsConstant:
        case ErrorCode::MalformedCsv:
        case ErrorCode::InvalidArgument:
            return true;
        default:
            return false;
    }
}

}  // namespace causal_atlas
