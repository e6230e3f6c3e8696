#include "elastic/errors.hpp"

namespace elastic {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::AdvanceOnRealClock: return "AdvanceOnRealClock";
        case ErrorCode::InvalidDuration: return "InvalidDuration";
        case ErrorCode::NoSuchBucket: return "NoSuchBucket";
        case ErrorCode::BucketExists: return "BucketExists";
        case ErrorCode::EmptyKey: return "EmptyKey";
        case ErrorCode::NoSuchKey: return "NoSuchKey";
        case ErrorCode::NoSuchQueue: return "NoSuchQueue";
        case ErrorCode::QueueExists: return "QueueExists";
        case ErrorCode::EmptyBody: return "EmptyBody";
        case ErrorCode::InvalidBatchSize: return "InvalidBatchSize";
        case ErrorCode::StaleReceipt: return "StaleReceipt";
        case ErrorCode::InvalidCount: return "InvalidCount";
        case ErrorCode::EmptyImage: return "EmptyImage";
        case ErrorCode::MalformedBody: return "MalformedBody";
        case ErrorCode::EmptyBatch: return "EmptyBatch";
        case ErrorCode::DuplicateName: return "DuplicateName";
        case ErrorCode::BatchTooLarge: return "BatchTooLarge";
        case ErrorCode::MalformedResponse: return "MalformedResponse";
        case ErrorCode::UnknownJob: return "UnknownJob";
        case ErrorCode::EmptySamples: return "EmptySamples";
        case ErrorCode::JobNotCompleted: return "JobNotCompleted";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::ScenarioDidNotConverge: return "ScenarioDidNotConverge";
    }
    return "Unknown";
}

}  // namespace elastic
