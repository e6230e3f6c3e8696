#pragma once

#include <functional>
#include <mutex>
#include <string>
#include <variant>
#include <vector>

#include "elastic/clock.hpp"
#include "elastic/fabric.hpp"
#include "elastic/workqueue.hpp"

namespace elastic {

struct ScalingPolicy {
    int max_app_instances = 17;
    Duration control_period = 5'000_ms;
    Duration idle_timeout = 60'000_ms;
    BootModel boot_model;

    /// Throws InvalidConfig on a cap below one or a zero control period.
    void validate() const;
};

struct LaunchN {
    int n = 0;
    friend bool operator==(const LaunchN&, const LaunchN&) = default;
};

struct TerminateIds {
    std::vector<std::string> ids;
    friend bool operator==(const TerminateIds&, const TerminateIds&) = default;
};

struct NoOp {
    friend bool operator==(const NoOp&, const NoOp&) = default;
};

using ScalingAction = std::variant<LaunchN, TerminateIds, NoOp>;

struct ScalingDecision {
    ScalingAction action = NoOp{};
    int observed_depth = 0;
    int observed_active = 0;
    Timestamp decided_at;

    bool is_noop() const { return std::holds_alternative<NoOp>(action); }

    /// One JSON object, e.g. {"t":0,"depth":20,"active":0,"action":"launch","n":17}.
    std::string to_json_line() const;
};

/// min(depth, cap): instances track the backlog up to the cap.
int desired_app_instances(int depth, const ScalingPolicy& policy);

ScalingDecision reconcile(int active, int desired, const std::vector<IdleCandidate>& idle_candidates,
                          Timestamp now, const ScalingPolicy& policy);

// The periodic reconciliation loop body. One Controller per deployment;
// control_step() is not re-entrant.
class Controller {
public:
    using DecisionSink = std::function<void(const ScalingDecision&)>;

    Controller(WorkQueue& queue, Fabric& fabric, ScalingPolicy policy, std::string queue_name = "requests");

    /// Observe queue depth and fleet size, decide, and apply to the fabric.
    ScalingDecision control_step(Timestamp now);

    void set_sink(DecisionSink sink) { sink_ = std::move(sink); }
    /// Launch and terminate decisions; no-ops only reach the sink.
    std::vector<ScalingDecision> decision_log() const;
    std::size_t steps() const;
    int peak_active() const;
    const ScalingPolicy& policy() const noexcept { return policy_; }

private:
    WorkQueue* queue_;
    Fabric* fabric_;
    ScalingPolicy policy_;
    std::string queue_name_;
    DecisionSink sink_;
    mutable std::mutex mu_;
    std::vector<ScalingDecision> log_;
    int peak_active_ = 0;
    std::size_t steps_ = 0;
};

}  // namespace elastic
