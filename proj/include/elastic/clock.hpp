#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "elastic/errors.hpp"

namespace elastic {

/// Non-negative span of time in milliseconds.
class Duration {
public:
    constexpr Duration() = default;
    constexpr explicit Duration(std::int64_t ms) : ms_(ms < 0 ? 0 : ms) {}

    static Duration checked(std::int64_t ms) {
        if (ms < 0) throw Error(ErrorCode::InvalidDuration, std::to_string(ms));
        return Duration(ms);
    }

    constexpr std::int64_t ms() const noexcept { return ms_; }

    friend constexpr Duration operator+(Duration a, Duration b) noexcept { return Duration(a.ms_ + b.ms_); }
    // Saturates at zero.
    friend constexpr Duration operator-(Duration a, Duration b) noexcept { return Duration(a.ms_ - b.ms_); }
    friend constexpr Duration operator*(Duration a, std::int64_t k) noexcept { return Duration(a.ms_ * k); }
    friend constexpr auto operator<=>(Duration, Duration) = default;

private:
    std::int64_t ms_ = 0;
};

constexpr Duration operator""_ms(unsigned long long v) { return Duration(static_cast<std::int64_t>(v)); }
constexpr Duration operator""_s(unsigned long long v) { return Duration(static_cast<std::int64_t>(v) * 1000); }

/// Milliseconds since the owning clock's epoch.
class Timestamp {
public:
    constexpr Timestamp() = default;
    constexpr explicit Timestamp(std::int64_t ms) : ms_(ms) {}

    constexpr std::int64_t ms() const noexcept { return ms_; }

    friend constexpr Timestamp operator+(Timestamp t, Duration d) noexcept { return Timestamp(t.ms_ + d.ms()); }
    // Elapsed time; clamps to zero when b is after a.
    friend constexpr Duration operator-(Timestamp a, Timestamp b) noexcept { return Duration(a.ms_ - b.ms_); }
    friend constexpr auto operator<=>(Timestamp, Timestamp) = default;

private:
    std::int64_t ms_ = 0;
};

using TimerId = std::uint64_t;

// A clock runs either against the host's monotonic clock or against a
// virtual time line that only moves on advance(). Everything time-dependent
// in the pipeline reads through this so the same code drives the live
// service and the simulator.
class Clock {
public:
    enum class Mode { Real, Simulated };

    static Clock real();
    static Clock simulated(Timestamp start = Timestamp(0));

    Clock(Clock&& other) noexcept;
    Clock& operator=(Clock&&) = delete;
    Clock(const Clock&) = delete;
    Clock& operator=(const Clock&) = delete;

    Mode mode() const noexcept { return mode_; }
    bool is_simulated() const noexcept { return mode_ == Mode::Simulated; }

    Timestamp now() const;

    /// Registers a timer on a simulated clock. Timers whose deadline is
    /// already due fire on the next advance (including advance(0)).
    TimerId add_timer(Timestamp deadline);
    void cancel_timer(TimerId id);
    std::size_t pending_timers() const;

    /// Moves simulated time forward by d and returns the ids of every timer
    /// whose deadline is now due, ordered by (deadline, registration order).
    std::vector<TimerId> advance(Duration d);
    std::vector<TimerId> advance_to(Timestamp t);

private:
    explicit Clock(Mode mode, Timestamp start);

    Mode mode_;
    std::chrono::steady_clock::time_point epoch_;
    mutable std::mutex mu_;
    Timestamp current_;
    TimerId next_timer_ = 1;
    // (deadline, registration id) -> id; registration ids are monotone so the
    // key order is exactly the firing order.
    std::map<std::pair<std::int64_t, TimerId>, TimerId> timers_;
    std::map<TimerId, std::int64_t> deadline_of_;
};

/// One classification result, rendered as `image_name, label`.
struct ResultRecord {
    std::string image_name;
    std::string label;

    std::string render() const { return image_name + ", " + label; }

    friend bool operator==(const ResultRecord&, const ResultRecord&) = default;
};

}  // namespace elastic
