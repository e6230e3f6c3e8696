#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "elastic/clock.hpp"

namespace elastic {

enum class InstanceState { Pending, Booting, Running, Terminating, Terminated };

std::string_view to_string(InstanceState s) noexcept;

/// Lifecycle edges the fabric is allowed to take.
bool is_legal_transition(InstanceState from, InstanceState to) noexcept;

struct BootModel {
    Duration pending_delay = 30'000_ms;
    Duration boot_mean = 71'530_ms;
    Duration boot_jitter = 0_ms;
    std::uint64_t seed = 0;
};

struct InstanceMetadata {
    std::string instance_type = "t2.small";
    std::string region = "us-east-1";
};

struct Instance {
    std::string instance_id;
    InstanceState state = InstanceState::Pending;
    Timestamp launched_at;
    Duration pending_delay;
    Duration boot_duration;
    std::optional<Timestamp> running_since;
    std::optional<Timestamp> idle_since;
    InstanceMetadata metadata;

    Timestamp boot_started_at() const { return launched_at + pending_delay; }
    Timestamp ready_at() const { return launched_at + pending_delay + boot_duration; }
};

struct Transition {
    std::string instance_id;
    InstanceState from;
    InstanceState to;

    friend bool operator==(const Transition&, const Transition&) = default;
};

struct IdleCandidate {
    std::string instance_id;
    Timestamp idle_since;
};

// The app-tier instance pool. Instances are plain records driven through
// Pending -> Booting -> Running -> Terminating -> Terminated by tick(); what
// a Running instance actually executes is up to the caller (a worker thread
// in live mode, modeled service time in the simulator).
class Fabric {
public:
    Fabric(const Clock& clock, BootModel model = {});

    std::vector<std::string> launch(int count);
    /// Launch with an explicit model; a different seed reseeds the sampler.
    std::vector<std::string> launch(int count, const BootModel& model);

    std::vector<Transition> tick(Timestamp now);

    /// Non-terminal instances move to Terminating; anything else is ignored.
    void terminate(const std::vector<std::string>& ids);

    /// Pending + Booting + Running.
    int count_active() const;
    int count_in(InstanceState s) const;
    int total_launched() const;

    /// Boot time for every instance that reached Running, measured from the
    /// end of the pending delay.
    std::vector<Duration> boot_time_samples() const;

    void mark_idle(const std::string& id, Timestamp since);
    void mark_busy(const std::string& id);
    std::vector<IdleCandidate> idle_candidates() const;

    std::optional<Instance> find(const std::string& id) const;
    std::vector<Instance> snapshot() const;

    /// Earliest future time at which tick() would change something.
    std::optional<Timestamp> next_transition_time() const;

    const BootModel& boot_model() const noexcept { return model_; }

private:
    Duration sample_boot();
    Instance* find_locked(const std::string& id);

    const Clock* clock_;
    BootModel model_;
    std::mt19937_64 rng_;
    mutable std::mutex mu_;
    std::vector<Instance> instances_;  // launch order
    std::uint64_t next_id_ = 0;
};

}  // namespace elastic
