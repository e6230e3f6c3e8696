#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace elastic {

enum class ErrorCode {
    AdvanceOnRealClock,
    InvalidDuration,
    NoSuchBucket,
    BucketExists,
    EmptyKey,
    NoSuchKey,
    NoSuchQueue,
    QueueExists,
    EmptyBody,
    InvalidBatchSize,
    StaleReceipt,
    InvalidCount,
    EmptyImage,
    MalformedBody,
    EmptyBatch,
    DuplicateName,
    BatchTooLarge,
    MalformedResponse,
    UnknownJob,
    EmptySamples,
    JobNotCompleted,
    InvalidConfig,
    ScenarioDidNotConverge,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure surfaced by the library carries one of the codes above so
// callers (HTTP layer, CLI, bindings) can map it without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

    explicit Error(ErrorCode code)
        : std::runtime_error(std::string(to_string(code))), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace elastic
