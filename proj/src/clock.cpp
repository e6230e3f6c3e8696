#include "elastic/clock.hpp"

namespace elastic {

Clock::Clock(Mode mode, Timestamp start)
    : mode_(mode), epoch_(std::chrono::steady_clock::now()), current_(start) {}

Clock::Clock(Clock&& other) noexcept
    : mode_(other.mode_),
      epoch_(other.epoch_),
      current_(other.current_),
      next_timer_(other.next_timer_),
      timers_(std::move(other.timers_)),
      deadline_of_(std::move(other.deadline_of_)) {}

Clock Clock::real() { return Clock(Mode::Real, Timestamp(0)); }

Clock Clock::simulated(Timestamp start) { return Clock(Mode::Simulated, start); }

Timestamp Clock::now() const {
    if (mode_ == Mode::Real) {
        auto elapsed = std::chrono::steady_clock::now() - epoch_;
        return Timestamp(std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count());
    }
    std::lock_guard lock(mu_);
    return current_;
}

TimerId Clock::add_timer(Timestamp deadline) {
    if (mode_ == Mode::Real) throw Error(ErrorCode::AdvanceOnRealClock, "timers need a simulated clock");
    std::lock_guard lock(mu_);
    TimerId id = next_timer_++;
    timers_.emplace(std::make_pair(deadline.ms(), id), id);
    deadline_of_.emplace(id, deadline.ms());
    return id;
}

void Clock::cancel_timer(TimerId id) {
    std::lock_guard lock(mu_);
    auto it = deadline_of_.find(id);
    if (it == deadline_of_.end()) return;
    timers_.erase(std::make_pair(it->second, id));
    deadline_of_.erase(it);
}

std::size_t Clock::pending_timers() const {
    std::lock_guard lock(mu_);
    return timers_.size();
}

std::vector<TimerId> Clock::advance(Duration d) {
    if (mode_ == Mode::Real) throw Error(ErrorCode::AdvanceOnRealClock);
    Timestamp target;
    {
        std::lock_guard lock(mu_);
        target = current_ + d;
    }
    return advance_to(target);
}

std::vector<TimerId> Clock::advance_to(Timestamp t) {
    if (mode_ == Mode::Real) throw Error(ErrorCode::AdvanceOnRealClock);
    std::lock_guard lock(mu_);
    if (t > current_) current_ = t;
    std::vector<TimerId> fired;
    while (!timers_.empty() && timers_.begin()->first.first <= current_.ms()) {
        TimerId id = timers_.begin()->second;
        fired.push_back(id);
        deadline_of_.erase(id);
        timers_.erase(timers_.begin());
    }
    return fired;
}

}  // namespace elastic
