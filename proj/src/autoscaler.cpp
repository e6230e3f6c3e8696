#include "elastic/autoscaler.hpp"

#include <algorithm>

#include <json.hpp>

namespace elastic {

void ScalingPolicy::validate() const {
    if (max_app_instances < 1) throw Error(ErrorCode::InvalidConfig, "max_app_instances must be >= 1");
    if (control_period.ms() <= 0) throw Error(ErrorCode::InvalidConfig, "control_period must be > 0");
}

std::string ScalingDecision::to_json_line() const {
    nlohmann::ordered_json j;
    j["t"] = decided_at.ms();
    j["depth"] = observed_depth;
    j["active"] = observed_active;
    std::visit(
        [&](const auto& a) {
            using A = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<A, LaunchN>) {
                j["action"] = "launch";
                j["n"] = a.n;
            } else if constexpr (std::is_same_v<A, TerminateIds>) {
                j["action"] = "terminate";
                j["ids"] = a.ids;
            } else {
                j["action"] = "noop";
            }
        },
        action);
    return j.dump();
}

int desired_app_instances(int depth, const ScalingPolicy& policy) {
    return std::clamp(depth, 0, policy.max_app_instances);
}

ScalingDecision reconcile(int active, int desired, const std::vector<IdleCandidate>& idle_candidates,
                          Timestamp now, const ScalingPolicy& policy) {
    ScalingDecision d;
    d.observed_active = active;
    d.decided_at = now;
    if (desired > active) {
        d.action = LaunchN{desired - active};
        return d;
    }
    if (desired < active) {
        std::vector<IdleCandidate> eligible;
        for (const auto& c : idle_candidates) {
            if (now - c.idle_since >= policy.idle_timeout && c.idle_since <= now) eligible.push_back(c);
        }
        std::stable_sort(eligible.begin(), eligible.end(),
                         [](const IdleCandidate& a, const IdleCandidate& b) { return a.idle_since < b.idle_since; });
        auto surplus = static_cast<std::size_t>(active - desired);
        if (eligible.size() > surplus) eligible.resize(surplus);
        if (!eligible.empty()) {
            TerminateIds t;
            for (auto& c : eligible) t.ids.push_back(std::move(c.instance_id));
            d.action = std::move(t);
        }
    }
    return d;
}

Controller::Controller(WorkQueue& queue, Fabric& fabric, ScalingPolicy policy, std::string queue_name)
    : queue_(&queue), fabric_(&fabric), policy_(std::move(policy)), queue_name_(std::move(queue_name)) {
    policy_.validate();
}

ScalingDecision Controller::control_step(Timestamp now) {
    int depth = static_cast<int>(queue_->approximate_depth(queue_name_));
    int active = fabric_->count_active();
    int desired = desired_app_instances(depth, policy_);
    ScalingDecision d = reconcile(active, desired, fabric_->idle_candidates(), now, policy_);
    d.observed_depth = depth;

    if (const auto* launch = std::get_if<LaunchN>(&d.action)) {
        fabric_->launch(launch->n, policy_.boot_model);
    } else if (const auto* term = std::get_if<TerminateIds>(&d.action)) {
        fabric_->terminate(term->ids);
    }

    {
        std::lock_guard lock(mu_);
        ++steps_;
        if (!d.is_noop()) log_.push_back(d);
        peak_active_ = std::max(peak_active_, fabric_->count_active());
    }
    if (sink_) sink_(d);
    return d;
}

std::vector<ScalingDecision> Controller::decision_log() const {
    std::lock_guard lock(mu_);
    return log_;
}

std::size_t Controller::steps() const {
    std::lock_guard lock(mu_);
    return steps_;
}

int Controller::peak_active() const {
    std::lock_guard lock(mu_);
    return peak_active_;
}

}  // namespace elastic
