#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "elastic/clock.hpp"

namespace elastic {

inline constexpr std::string_view kRequestQueue = "requests";
inline constexpr std::string_view kResponseQueue = "responses";
inline constexpr Duration kDefaultVisibilityTimeout = 120_s;
inline constexpr int kMaxReceiveBatch = 10;

struct QueueMessage {
    std::string message_id;
    std::string body;
    Timestamp enqueued_at;
    int receive_count = 0;
    std::optional<Timestamp> visibility_deadline;
    std::optional<std::string> receipt_handle;
};

/// What a receiver gets back; the handle is only good until the
/// visibility deadline passes and someone else receives the message.
struct ReceivedMessage {
    std::string receipt_handle;
    std::string body;
    int receive_count = 0;
    std::string message_id;
    Timestamp visibility_deadline;
};

struct QueueStats {
    std::uint64_t sent = 0;
    std::uint64_t deleted = 0;
    std::uint64_t receives = 0;
    // Receives that handed out a message a second (or later) time.
    std::uint64_t redeliveries = 0;
    std::uint64_t stale_deletes = 0;
};

// SQS-style queues with visibility timeouts and at-least-once delivery.
// Visibility expiry is evaluated lazily against the injected clock, so no
// background thread is involved. Visible messages are handed out in
// enqueue order.
class WorkQueue {
public:
    explicit WorkQueue(const Clock& clock, Duration default_visibility_timeout = kDefaultVisibilityTimeout);

    /// Queue service with `requests` and `responses` already created.
    static WorkQueue bootstrap(const Clock& clock, Duration default_visibility_timeout = kDefaultVisibilityTimeout);

    WorkQueue(WorkQueue&& other) noexcept;

    void create_queue(const std::string& name);
    bool has_queue(const std::string& name) const;

    std::string send(const std::string& queue, const std::string& body);

    std::vector<ReceivedMessage> receive(const std::string& queue, int max_messages,
                                         std::optional<Duration> visibility_timeout = std::nullopt);

    /// Removes the message the handle was issued for. Throws StaleReceipt if
    /// the handle is unknown or has been superseded by a later receive.
    void remove(const std::string& queue, const std::string& receipt_handle);

    /// Currently visible messages; in-flight ones are excluded.
    std::size_t approximate_depth(const std::string& queue) const;
    std::size_t in_flight(const std::string& queue) const;
    /// Visible plus in-flight.
    std::size_t live_messages(const std::string& queue) const;
    /// Earliest visibility deadline among in-flight messages.
    std::optional<Timestamp> next_visibility_deadline(const std::string& queue) const;

    QueueStats stats(const std::string& queue) const;
    Duration default_visibility_timeout() const noexcept { return default_visibility_timeout_; }

private:
    struct Queue {
        // Keyed by enqueue sequence, which is delivery order.
        std::map<std::uint64_t, QueueMessage> messages;
        std::unordered_map<std::string, std::uint64_t> by_receipt;
        std::uint64_t next_seq = 0;
        QueueStats stats;
    };

    Queue& queue_or_throw(const std::string& name);
    const Queue& queue_or_throw(const std::string& name) const;

    const Clock* clock_;
    Duration default_visibility_timeout_;
    mutable std::mutex mu_;
    std::map<std::string, Queue, std::less<>> queues_;
    std::uint64_t next_receipt_ = 0;
};

}  // namespace elastic
