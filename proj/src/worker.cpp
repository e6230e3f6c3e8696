#include "elastic/worker.hpp"

#include <cstdio>

#include "elastic/messages.hpp"
#include "interruptible_sleep.hpp"

namespace elastic {

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes, std::uint64_t seed) noexcept {
    std::uint64_t h = kFnvOffsetBasis ^ seed;
    for (std::uint8_t b : bytes) {
        h ^= b;
        h *= kFnvPrime;
    }
    return h;
}

const std::vector<std::string>& default_label_table() {
    static const std::vector<std::string> table = [] {
        std::vector<std::string> t;
        t.reserve(1000);
        t.emplace_back("hair_spray");
        for (int i = 1; i < 1000; ++i) {
            char buf[16];
            std::snprintf(buf, sizeof buf, "label_%03d", i);
            t.emplace_back(buf);
        }
        return t;
    }();
    return table;
}

StubClassifier::StubClassifier(std::vector<std::string> label_table, std::uint64_t hash_seed)
    : labels_(std::move(label_table)), seed_(hash_seed) {
    if (labels_.empty()) throw Error(ErrorCode::InvalidConfig, "label table is empty");
}

std::string StubClassifier::classify(std::span<const std::uint8_t> bytes) const {
    if (bytes.empty()) throw Error(ErrorCode::EmptyImage);
    return labels_[fnv1a64(bytes, seed_) % labels_.size()];
}

void WorkerConfig::validate() const {
    if (receive_batch < 1 || receive_batch > kMaxReceiveBatch) {
        throw Error(ErrorCode::InvalidConfig, "receive_batch must be in [1, 10]");
    }
    if (visibility_timeout.ms() <= 0) throw Error(ErrorCode::InvalidConfig, "visibility_timeout must be > 0");
}

std::string_view to_string(ProcessStatus s) noexcept {
    switch (s) {
        case ProcessStatus::Processed: return "processed";
        case ProcessStatus::MalformedBody: return "malformed_body";
        case ProcessStatus::MissingImage: return "missing_image";
        case ProcessStatus::EmptyImage: return "empty_image";
    }
    return "unknown";
}

namespace {

// Returns true if the delete landed; false when the receipt went stale.
bool delete_request(const ReceivedMessage& msg, const WorkerDeps& deps) {
    try {
        deps.queue->remove(deps.request_queue, msg.receipt_handle);
        return true;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::StaleReceipt) throw;
        return false;
    }
}

std::optional<std::string> stored_label(const RequestBody& req, const WorkerDeps& deps) {
    try {
        Bytes bytes = deps.store->get(std::string(kOutputBucket), output_key(req.job, req.key));
        auto doc = OutputDocument::parse(to_string(bytes));
        if (doc && doc->image == req.key) return doc->label;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoSuchKey) throw;
    }
    return std::nullopt;
}

}  // namespace

bool result_exists(const std::string& request_body, const WorkerDeps& deps) {
    auto req = RequestBody::parse(request_body);
    return req && stored_label(*req, deps).has_value();
}

ProcessOutcome process_message(const ReceivedMessage& msg, const WorkerDeps& deps) {
    ProcessOutcome out;
    auto req = RequestBody::parse(msg.body);
    if (!req) {
        out.status = ProcessStatus::MalformedBody;
        out.stale_receipt = !delete_request(msg, deps);
        return out;
    }
    out.job = req->job;

    std::string label;
    if (auto existing = stored_label(*req, deps)) {
        label = *existing;
        out.reused_existing = true;
    } else {
        try {
            Bytes image = deps.store->get(req->bucket, input_key(req->job, req->key));
            label = deps.classifier->classify(image);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NoSuchKey && e.code() != ErrorCode::NoSuchBucket &&
                e.code() != ErrorCode::EmptyImage) {
                throw;
            }
            // The job still gets an answer for this image, flagged as an
            // error, so it can complete.
            out.status = e.code() == ErrorCode::EmptyImage ? ProcessStatus::EmptyImage : ProcessStatus::MissingImage;
            std::string error_label = std::string("error:") + std::string(elastic::to_string(e.code()));
            deps.queue->send(deps.response_queue, ResponseBody{req->job, req->key, error_label}.to_json());
            out.stale_receipt = !delete_request(msg, deps);
            return out;
        }
    }

    deps.store->put(std::string(kOutputBucket), output_key(req->job, req->key),
                    to_bytes(OutputDocument{req->key, label}.to_json()));
    deps.queue->send(deps.response_queue, ResponseBody{req->job, req->key, label}.to_json());
    out.stale_receipt = !delete_request(msg, deps);
    out.result = ResultRecord{req->key, label};
    return out;
}

Worker::Worker(std::string instance_id, WorkerConfig config, WorkerDeps deps, const Clock& clock, Fabric* fabric)
    : instance_id_(std::move(instance_id)), config_(config), deps_(std::move(deps)), clock_(&clock), fabric_(fabric) {
    config_.validate();
}

std::vector<ReceivedMessage> Worker::poll() {
    auto batch = deps_.queue->receive(deps_.request_queue, config_.receive_batch, config_.visibility_timeout);
    if (fabric_) {
        if (batch.empty()) {
            fabric_->mark_idle(instance_id_, clock_->now());
        } else {
            fabric_->mark_busy(instance_id_);
        }
    }
    return batch;
}

ProcessOutcome Worker::process(const ReceivedMessage& msg) {
    ProcessOutcome out = process_message(msg, deps_);
    if (warn_) {
        if (out.status != ProcessStatus::Processed) {
            warn_(instance_id_ + ": " + std::string(to_string(out.status)) + " for " + msg.message_id);
        }
        if (out.stale_receipt) warn_(instance_id_ + ": stale receipt deleting " + msg.message_id);
    }
    if (out.result) results_.push_back(*out.result);
    return out;
}

std::size_t Worker::run_once() {
    auto batch = poll();
    for (const auto& msg : batch) process(msg);
    return batch.size();
}

void Worker::run(std::stop_token stop) {
    while (!stop.stop_requested()) {
        std::size_t n = 0;
        try {
            n = run_once();
        } catch (const std::exception& e) {
            // The loop outlives any single message; redelivery retries it.
            if (warn_) warn_(instance_id_ + ": " + e.what());
        }
        if (n > 0) continue;
        detail::interruptible_sleep(stop, config_.poll_interval);
    }
}

}  // namespace elastic
