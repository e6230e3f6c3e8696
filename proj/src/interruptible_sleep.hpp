#pragma once

#include <chrono>
#include <condition_variable>
#include <mutex>
#include <stop_token>

#include "elastic/clock.hpp"

namespace elastic::detail {

// Sleeps for d or until stop is requested, whichever comes first.
inline void interruptible_sleep(const std::stop_token& stop, Duration d) {
    std::mutex mu;
    std::condition_variable cv;
    std::stop_callback wake(stop, [&] {
        std::lock_guard lock(mu);
        cv.notify_all();
    });
    std::unique_lock lock(mu);
    cv.wait_for(lock, std::chrono::milliseconds(d.ms()), [&] { return stop.stop_requested(); });
}

}  // namespace elastic::detail
