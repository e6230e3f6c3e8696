#include "elastic/gateway.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "elastic/messages.hpp"

namespace elastic {

std::string_view to_string(JobState s) noexcept {
    return s == JobState::Completed ? "completed" : "pending";
}

std::string JobStatus::render() const {
    std::string out;
    for (const auto& r : results) {
        out += r.render();
        out += '\n';
    }
    return out;
}

Gateway::Gateway(BlobStore& store, WorkQueue& queue, const Clock& clock, int max_batch,
                 std::optional<std::uint64_t> id_seed)
    : store_(&store), queue_(&queue), clock_(&clock), max_batch_(max_batch) {
    if (max_batch_ < 1) throw Error(ErrorCode::InvalidConfig, "max_batch must be >= 1");
    if (id_seed) {
        id_rng_.seed(*id_seed);
    } else {
        std::random_device rd;
        id_rng_.seed((static_cast<std::uint64_t>(rd()) << 32) ^ rd());
    }
}

std::string Gateway::next_job_id() {
    // RFC 4122 version-4 layout.
    std::uint64_t hi = id_rng_();
    std::uint64_t lo = id_rng_();
    hi = (hi & 0xFFFFFFFFFFFF0FFFULL) | 0x0000000000004000ULL;
    lo = (lo & 0x3FFFFFFFFFFFFFFFULL) | 0x8000000000000000ULL;
    char buf[37];
    std::snprintf(buf, sizeof buf, "%08llx-%04llx-%04llx-%04llx-%012llx",
                  static_cast<unsigned long long>(hi >> 32), static_cast<unsigned long long>((hi >> 16) & 0xFFFF),
                  static_cast<unsigned long long>(hi & 0xFFFF), static_cast<unsigned long long>(lo >> 48),
                  static_cast<unsigned long long>(lo & 0xFFFFFFFFFFFFULL));
    return buf;
}

std::string Gateway::submit_job(const std::vector<ImageUpload>& images) {
    if (images.empty()) throw Error(ErrorCode::EmptyBatch);
    if (static_cast<int>(images.size()) > max_batch_) {
        throw Error(ErrorCode::BatchTooLarge,
                    std::to_string(images.size()) + " images, limit " + std::to_string(max_batch_));
    }
    std::set<std::string> seen;
    for (const auto& img : images) {
        if (img.name.empty()) throw Error(ErrorCode::EmptyKey, "image name");
        if (!seen.insert(img.name).second) throw Error(ErrorCode::DuplicateName, img.name);
    }

    Job job;
    {
        std::lock_guard lock(mu_);
        do {
            job.job_id = next_job_id();
        } while (jobs_.contains(job.job_id));
        job.submitted_at = clock_->now();
        for (const auto& img : images) job.image_names.push_back(img.name);
        // Registered before any message goes out so a fast worker's
        // response never meets an unknown job.
        jobs_.emplace(job.job_id, job);
    }
    for (const auto& img : images) {
        store_->put(std::string(kInputBucket), input_key(job.job_id, img.name), img.bytes);
        queue_->send(std::string(kRequestQueue),
                     RequestBody{std::string(kInputBucket), img.name, job.job_id}.to_json());
    }
    return job.job_id;
}

std::size_t Gateway::collect_responses() {
    std::lock_guard collect_lock(collect_mu_);
    std::size_t recorded = 0;
    for (;;) {
        auto batch = queue_->receive(std::string(kResponseQueue), kMaxReceiveBatch);
        if (batch.empty()) break;
        for (const auto& msg : batch) {
            auto resp = ResponseBody::parse(msg.body);
            {
                std::lock_guard lock(mu_);
                auto it = resp ? jobs_.find(resp->job) : jobs_.end();
                if (!resp) {
                    ++stats_.malformed;
                } else if (it == jobs_.end()) {
                    ++stats_.unknown_job;
                } else {
                    Job& job = it->second;
                    bool known_image = std::find(job.image_names.begin(), job.image_names.end(), resp->image) !=
                                       job.image_names.end();
                    if (!known_image) {
                        ++stats_.malformed;
                    } else if (job.results.emplace(resp->image, resp->label).second) {
                        ++stats_.recorded;
                        ++recorded;
                        if (job.results.size() == job.image_names.size()) {
                            job.completed_at = clock_->now();
                            completion_order_.push_back(job.job_id);
                        }
                    } else {
                        ++stats_.duplicates;
                    }
                }
            }
            try {
                queue_->remove(std::string(kResponseQueue), msg.receipt_handle);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::StaleReceipt) throw;
            }
        }
    }
    return recorded;
}

JobStatus Gateway::job_status(const std::string& job_id) const {
    std::lock_guard lock(mu_);
    auto it = jobs_.find(job_id);
    if (it == jobs_.end()) throw Error(ErrorCode::UnknownJob, job_id);
    const Job& job = it->second;
    JobStatus st;
    st.state = job.completed() ? JobState::Completed : JobState::Pending;
    for (const auto& name : job.image_names) {
        auto r = job.results.find(name);
        if (r != job.results.end()) st.results.push_back({name, r->second});
    }
    if (job.completed_at) st.response_time = *job.completed_at - job.submitted_at;
    return st;
}

Job Gateway::job(const std::string& job_id) const {
    std::lock_guard lock(mu_);
    auto it = jobs_.find(job_id);
    if (it == jobs_.end()) throw Error(ErrorCode::UnknownJob, job_id);
    return it->second;
}

std::vector<std::string> Gateway::job_ids() const {
    std::lock_guard lock(mu_);
    std::vector<std::string> ids;
    for (const auto& [id, job] : jobs_) ids.push_back(id);
    return ids;
}

std::vector<Duration> Gateway::response_times() const {
    std::lock_guard lock(mu_);
    std::vector<Duration> out;
    for (const auto& id : completion_order_) {
        const Job& job = jobs_.at(id);
        out.push_back(*job.completed_at - job.submitted_at);
    }
    return out;
}

CollectStats Gateway::collect_stats() const {
    std::lock_guard lock(mu_);
    return stats_;
}

}  // namespace elastic
