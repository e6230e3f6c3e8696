#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "elastic/blobstore.hpp"
#include "elastic/clock.hpp"
#include "elastic/workqueue.hpp"

namespace elastic {

inline constexpr int kDefaultMaxBatch = 50;

struct ImageUpload {
    std::string name;
    Bytes bytes;
};

enum class JobState { Pending, Completed };

std::string_view to_string(JobState s) noexcept;

struct Job {
    std::string job_id;
    std::vector<std::string> image_names;  // submission order
    Timestamp submitted_at;
    std::map<std::string, std::string> results;  // image -> label
    std::optional<Timestamp> completed_at;

    bool completed() const { return completed_at.has_value(); }
};

struct JobStatus {
    JobState state = JobState::Pending;
    std::vector<ResultRecord> results;  // submission order, recorded ones only
    std::optional<Duration> response_time;

    /// One `image, label` line per result.
    std::string render() const;
};

struct CollectStats {
    std::uint64_t recorded = 0;
    std::uint64_t duplicates = 0;
    std::uint64_t malformed = 0;
    std::uint64_t unknown_job = 0;
};

// The web tier: accepts batches, fans them out as one stored object plus
// one request message per image, and folds response messages back into
// per-job results.
class Gateway {
public:
    Gateway(BlobStore& store, WorkQueue& queue, const Clock& clock, int max_batch = kDefaultMaxBatch,
            std::optional<std::uint64_t> id_seed = std::nullopt);

    std::string submit_job(const std::vector<ImageUpload>& images);

    /// Drains the response queue. Returns how many results were new.
    std::size_t collect_responses();

    JobStatus job_status(const std::string& job_id) const;
    Job job(const std::string& job_id) const;
    std::vector<std::string> job_ids() const;
    /// completed_at - submitted_at for every completed job, in completion order.
    std::vector<Duration> response_times() const;
    CollectStats collect_stats() const;
    int max_batch() const noexcept { return max_batch_; }

private:
    std::string next_job_id();

    BlobStore* store_;
    WorkQueue* queue_;
    const Clock* clock_;
    int max_batch_;
    mutable std::mutex mu_;
    std::mutex collect_mu_;
    std::mt19937_64 id_rng_;
    std::map<std::string, Job> jobs_;
    std::vector<std::string> completion_order_;
    CollectStats stats_;
};

}  // namespace elastic
