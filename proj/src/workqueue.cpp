#include "elastic/workqueue.hpp"

#include <cstdio>

namespace elastic {

namespace {

bool visible(const QueueMessage& m, Timestamp now) {
    return !m.visibility_deadline || *m.visibility_deadline <= now;
}

std::string format_id(char prefix, std::uint64_t n) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%c-%012llu", prefix, static_cast<unsigned long long>(n));
    return buf;
}

}  // namespace

WorkQueue::WorkQueue(const Clock& clock, Duration default_visibility_timeout)
    : clock_(&clock), default_visibility_timeout_(default_visibility_timeout) {}

WorkQueue::WorkQueue(WorkQueue&& other) noexcept
    : clock_(other.clock_),
      default_visibility_timeout_(other.default_visibility_timeout_),
      queues_(std::move(other.queues_)),
      next_receipt_(other.next_receipt_) {}

WorkQueue WorkQueue::bootstrap(const Clock& clock, Duration default_visibility_timeout) {
    WorkQueue q(clock, default_visibility_timeout);
    q.create_queue(std::string(kRequestQueue));
    q.create_queue(std::string(kResponseQueue));
    return q;
}

void WorkQueue::create_queue(const std::string& name) {
    std::lock_guard lock(mu_);
    if (queues_.contains(name)) throw Error(ErrorCode::QueueExists, name);
    queues_.emplace(name, Queue{});
}

bool WorkQueue::has_queue(const std::string& name) const {
    std::lock_guard lock(mu_);
    return queues_.contains(name);
}

WorkQueue::Queue& WorkQueue::queue_or_throw(const std::string& name) {
    auto it = queues_.find(name);
    if (it == queues_.end()) throw Error(ErrorCode::NoSuchQueue, name);
    return it->second;
}

const WorkQueue::Queue& WorkQueue::queue_or_throw(const std::string& name) const {
    auto it = queues_.find(name);
    if (it == queues_.end()) throw Error(ErrorCode::NoSuchQueue, name);
    return it->second;
}

std::string WorkQueue::send(const std::string& queue, const std::string& body) {
    std::lock_guard lock(mu_);
    Queue& q = queue_or_throw(queue);
    if (body.empty()) throw Error(ErrorCode::EmptyBody, queue);
    std::uint64_t seq = q.next_seq++;
    QueueMessage m;
    m.message_id = queue + "/" + format_id('m', seq);
    m.body = body;
    m.enqueued_at = clock_->now();
    q.messages.emplace(seq, m);
    ++q.stats.sent;
    return m.message_id;
}

std::vector<ReceivedMessage> WorkQueue::receive(const std::string& queue, int max_messages,
                                                std::optional<Duration> visibility_timeout) {
    std::lock_guard lock(mu_);
    Queue& q = queue_or_throw(queue);
    if (max_messages < 1 || max_messages > kMaxReceiveBatch) {
        throw Error(ErrorCode::InvalidBatchSize, std::to_string(max_messages));
    }
    Timestamp now = clock_->now();
    Timestamp deadline = now + visibility_timeout.value_or(default_visibility_timeout_);
    std::vector<ReceivedMessage> out;
    for (auto& [seq, m] : q.messages) {
        if (static_cast<int>(out.size()) == max_messages) break;
        if (!visible(m, now)) continue;
        if (m.receipt_handle) q.by_receipt.erase(*m.receipt_handle);
        std::string handle = format_id('r', next_receipt_++);
        m.receipt_handle = handle;
        m.visibility_deadline = deadline;
        ++m.receive_count;
        q.by_receipt.emplace(handle, seq);
        ++q.stats.receives;
        if (m.receive_count > 1) ++q.stats.redeliveries;
        out.push_back(ReceivedMessage{handle, m.body, m.receive_count, m.message_id, deadline});
    }
    return out;
}

void WorkQueue::remove(const std::string& queue, const std::string& receipt_handle) {
    std::lock_guard lock(mu_);
    Queue& q = queue_or_throw(queue);
    auto it = q.by_receipt.find(receipt_handle);
    if (it == q.by_receipt.end()) {
        ++q.stats.stale_deletes;
        throw Error(ErrorCode::StaleReceipt, receipt_handle);
    }
    q.messages.erase(it->second);
    q.by_receipt.erase(it);
    ++q.stats.deleted;
}

std::size_t WorkQueue::approximate_depth(const std::string& queue) const {
    std::lock_guard lock(mu_);
    const Queue& q = queue_or_throw(queue);
    Timestamp now = clock_->now();
    std::size_t n = 0;
    for (const auto& [seq, m] : q.messages) n += visible(m, now) ? 1 : 0;
    return n;
}

std::size_t WorkQueue::in_flight(const std::string& queue) const {
    std::lock_guard lock(mu_);
    const Queue& q = queue_or_throw(queue);
    Timestamp now = clock_->now();
    std::size_t n = 0;
    for (const auto& [seq, m] : q.messages) n += visible(m, now) ? 0 : 1;
    return n;
}

std::size_t WorkQueue::live_messages(const std::string& queue) const {
    std::lock_guard lock(mu_);
    return queue_or_throw(queue).messages.size();
}

std::optional<Timestamp> WorkQueue::next_visibility_deadline(const std::string& queue) const {
    std::lock_guard lock(mu_);
    const Queue& q = queue_or_throw(queue);
    Timestamp now = clock_->now();
    std::optional<Timestamp> best;
    for (const auto& [seq, m] : q.messages) {
        if (visible(m, now)) continue;
        if (!best || *m.visibility_deadline < *best) best = m.visibility_deadline;
    }
    return best;
}

QueueStats WorkQueue::stats(const std::string& queue) const {
    std::lock_guard lock(mu_);
    return queue_or_throw(queue).stats;
}

}  // namespace elastic
