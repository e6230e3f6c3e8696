#include "elastic/fabric.hpp"

#include <algorithm>
#include <cstdio>

namespace elastic {

std::string_view to_string(InstanceState s) noexcept {
    switch (s) {
        case InstanceState::Pending: return "pending";
        case InstanceState::Booting: return "booting";
        case InstanceState::Running: return "running";
        case InstanceState::Terminating: return "terminating";
        case InstanceState::Terminated: return "terminated";
    }
    return "unknown";
}

bool is_legal_transition(InstanceState from, InstanceState to) noexcept {
    using S = InstanceState;
    switch (from) {
        case S::Pending: return to == S::Booting || to == S::Terminating;
        case S::Booting: return to == S::Running || to == S::Terminating;
        case S::Running: return to == S::Terminating;
        case S::Terminating: return to == S::Terminated;
        case S::Terminated: return false;
    }
    return false;
}

Fabric::Fabric(const Clock& clock, BootModel model) : clock_(&clock), model_(model), rng_(model.seed) {}

Duration Fabric::sample_boot() {
    std::int64_t jitter = model_.boot_jitter.ms();
    if (jitter == 0) return model_.boot_mean;
    // Plain modulo on the raw engine output keeps the sequence identical
    // across standard libraries; distribution objects are not portable.
    std::uint64_t span = static_cast<std::uint64_t>(2 * jitter + 1);
    std::int64_t offset = static_cast<std::int64_t>(rng_() % span) - jitter;
    return Duration(model_.boot_mean.ms() + offset);
}

std::vector<std::string> Fabric::launch(int count) {
    if (count < 1) throw Error(ErrorCode::InvalidCount, std::to_string(count));
    std::lock_guard lock(mu_);
    Timestamp now = clock_->now();
    std::vector<std::string> ids;
    ids.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "i-%06llu", static_cast<unsigned long long>(next_id_++));
        Instance inst;
        inst.instance_id = buf;
        inst.launched_at = now;
        inst.pending_delay = model_.pending_delay;
        inst.boot_duration = sample_boot();
        instances_.push_back(inst);
        ids.push_back(inst.instance_id);
    }
    return ids;
}

std::vector<std::string> Fabric::launch(int count, const BootModel& model) {
    {
        std::lock_guard lock(mu_);
        if (model.seed != model_.seed) rng_.seed(model.seed);
        model_ = model;
    }
    return launch(count);
}

std::vector<Transition> Fabric::tick(Timestamp now) {
    std::lock_guard lock(mu_);
    std::vector<Transition> out;
    for (Instance& inst : instances_) {
        switch (inst.state) {
            case InstanceState::Pending:
                if (now < inst.boot_started_at()) break;
                inst.state = InstanceState::Booting;
                out.push_back({inst.instance_id, InstanceState::Pending, InstanceState::Booting});
                [[fallthrough]];
            case InstanceState::Booting:
                if (now < inst.ready_at()) break;
                inst.state = InstanceState::Running;
                inst.running_since = inst.ready_at();
                out.push_back({inst.instance_id, InstanceState::Booting, InstanceState::Running});
                break;
            case InstanceState::Terminating:
                inst.state = InstanceState::Terminated;
                inst.idle_since.reset();
                out.push_back({inst.instance_id, InstanceState::Terminating, InstanceState::Terminated});
                break;
            case InstanceState::Running:
            case InstanceState::Terminated:
                break;
        }
    }
    return out;
}

Instance* Fabric::find_locked(const std::string& id) {
    auto it = std::find_if(instances_.begin(), instances_.end(),
                           [&](const Instance& i) { return i.instance_id == id; });
    return it == instances_.end() ? nullptr : &*it;
}

void Fabric::terminate(const std::vector<std::string>& ids) {
    std::lock_guard lock(mu_);
    for (const auto& id : ids) {
        Instance* inst = find_locked(id);
        if (!inst) continue;
        if (inst->state == InstanceState::Terminating || inst->state == InstanceState::Terminated) continue;
        inst->state = InstanceState::Terminating;
    }
}

int Fabric::count_active() const {
    std::lock_guard lock(mu_);
    return static_cast<int>(std::count_if(instances_.begin(), instances_.end(), [](const Instance& i) {
        return i.state == InstanceState::Pending || i.state == InstanceState::Booting ||
               i.state == InstanceState::Running;
    }));
}

int Fabric::count_in(InstanceState s) const {
    std::lock_guard lock(mu_);
    return static_cast<int>(
        std::count_if(instances_.begin(), instances_.end(), [s](const Instance& i) { return i.state == s; }));
}

int Fabric::total_launched() const {
    std::lock_guard lock(mu_);
    return static_cast<int>(instances_.size());
}

std::vector<Duration> Fabric::boot_time_samples() const {
    std::lock_guard lock(mu_);
    std::vector<Duration> out;
    for (const Instance& i : instances_) {
        if (i.running_since) out.push_back(*i.running_since - i.boot_started_at());
    }
    return out;
}

void Fabric::mark_idle(const std::string& id, Timestamp since) {
    std::lock_guard lock(mu_);
    Instance* inst = find_locked(id);
    if (inst && inst->state == InstanceState::Running && !inst->idle_since) inst->idle_since = since;
}

void Fabric::mark_busy(const std::string& id) {
    std::lock_guard lock(mu_);
    if (Instance* inst = find_locked(id)) inst->idle_since.reset();
}

std::vector<IdleCandidate> Fabric::idle_candidates() const {
    std::lock_guard lock(mu_);
    std::vector<IdleCandidate> out;
    for (const Instance& i : instances_) {
        if (i.state == InstanceState::Running && i.idle_since) out.push_back({i.instance_id, *i.idle_since});
    }
    return out;
}

std::optional<Instance> Fabric::find(const std::string& id) const {
    std::lock_guard lock(mu_);
    auto it = std::find_if(instances_.begin(), instances_.end(),
                           [&](const Instance& i) { return i.instance_id == id; });
    if (it == instances_.end()) return std::nullopt;
    return *it;
}

std::vector<Instance> Fabric::snapshot() const {
    std::lock_guard lock(mu_);
    return instances_;
}

std::optional<Timestamp> Fabric::next_transition_time() const {
    std::lock_guard lock(mu_);
    std::optional<Timestamp> best;
    auto consider = [&](Timestamp t) {
        if (!best || t < *best) best = t;
    };
    for (const Instance& i : instances_) {
        switch (i.state) {
            case InstanceState::Pending: consider(i.boot_started_at()); break;
            case InstanceState::Booting: consider(i.ready_at()); break;
            case InstanceState::Terminating: consider(clock_->now()); break;
            default: break;
        }
    }
    return best;
}

}  // namespace elastic
