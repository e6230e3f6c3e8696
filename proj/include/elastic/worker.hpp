#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stop_token>
#include <string>
#include <vector>

#include "elastic/blobstore.hpp"
#include "elastic/clock.hpp"
#include "elastic/fabric.hpp"
#include "elastic/workqueue.hpp"

namespace elastic {

inline constexpr std::uint64_t kFnvOffsetBasis = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

/// 64-bit FNV-1a; the seed is xor-ed into the offset basis, so seed 0 is
/// the standard hash.
std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes, std::uint64_t seed = 0) noexcept;

/// The shipped 1000-entry table: "hair_spray" at index 0, then
/// label_001 .. label_999.
const std::vector<std::string>& default_label_table();

class Classifier {
public:
    virtual ~Classifier() = default;
    /// Throws EmptyImage on an empty input.
    virtual std::string classify(std::span<const std::uint8_t> bytes) const = 0;
};

// Deterministic stand-in for the image model: label_table[fnv1a64 % size].
class StubClassifier final : public Classifier {
public:
    explicit StubClassifier(std::vector<std::string> label_table = default_label_table(), std::uint64_t hash_seed = 0);

    std::string classify(std::span<const std::uint8_t> bytes) const override;

    const std::vector<std::string>& label_table() const noexcept { return labels_; }
    std::uint64_t hash_seed() const noexcept { return seed_; }

private:
    std::vector<std::string> labels_;
    std::uint64_t seed_;
};

struct WorkerConfig {
    Duration poll_interval = 60'000_ms;
    int receive_batch = 1;
    Duration visibility_timeout = 120'000_ms;

    void validate() const;
};

struct WorkerDeps {
    BlobStore* store = nullptr;
    WorkQueue* queue = nullptr;
    const Classifier* classifier = nullptr;
    std::string request_queue = "requests";
    std::string response_queue = "responses";
};

enum class ProcessStatus {
    Processed,
    MalformedBody,   // request deleted, nothing written
    MissingImage,    // input object gone: request deleted, error response sent
    EmptyImage,      // zero-length input: request deleted, error response sent
};

std::string_view to_string(ProcessStatus s) noexcept;

struct ProcessOutcome {
    ProcessStatus status = ProcessStatus::Processed;
    std::optional<ResultRecord> result;
    std::string job;
    // Result object already existed, so fetch and classify were skipped.
    bool reused_existing = false;
    // The final delete lost a race with redelivery; work was duplicated.
    bool stale_receipt = false;
};

/// Fetch, classify, store `<job>/<image>.json`, publish the response, then
/// delete the request. Steps before the delete are safe to repeat.
ProcessOutcome process_message(const ReceivedMessage& msg, const WorkerDeps& deps);

/// True if a result for this request body is already in the output bucket.
bool result_exists(const std::string& request_body, const WorkerDeps& deps);

// One app-tier worker bound to an instance. poll() does idle bookkeeping on
// the fabric; run() is the live polling loop.
class Worker {
public:
    using WarningSink = std::function<void(const std::string&)>;

    Worker(std::string instance_id, WorkerConfig config, WorkerDeps deps, const Clock& clock,
           Fabric* fabric = nullptr);

    std::vector<ReceivedMessage> poll();
    ProcessOutcome process(const ReceivedMessage& msg);

    /// One poll plus processing of everything it returned.
    std::size_t run_once();

    /// Loops until stop is requested. Sleeps poll_interval after an empty
    /// poll; polls again straight away after a non-empty one.
    void run(std::stop_token stop);

    void set_warning_sink(WarningSink sink) { warn_ = std::move(sink); }
    const std::vector<ResultRecord>& results() const noexcept { return results_; }
    const std::string& instance_id() const noexcept { return instance_id_; }
    const WorkerConfig& config() const noexcept { return config_; }

private:
    std::string instance_id_;
    WorkerConfig config_;
    WorkerDeps deps_;
    const Clock* clock_;
    Fabric* fabric_;
    WarningSink warn_;
    std::vector<ResultRecord> results_;
};

}  // namespace elastic
