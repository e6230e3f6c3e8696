#include "elastic/service.hpp"

#include <vector>

#include "interruptible_sleep.hpp"

namespace elastic {

using detail::interruptible_sleep;

Service::Service(ServiceConfig config, ServiceOptions options)
    : config_(std::move(config)),
      options_(std::move(options)),
      clock_(Clock::real()),
      store_(BlobStore::bootstrap(clock_, options_.data_dir)),
      queue_(WorkQueue::bootstrap(clock_, config_.worker.visibility_timeout)),
      fabric_(clock_, config_.policy.boot_model),
      controller_(queue_, fabric_, config_.policy),
      classifier_(default_label_table(), config_.seed),
      gateway_(store_, queue_, clock_, config_.max_batch) {
    config_.validate();
    deps_.store = &store_;
    deps_.queue = &queue_;
    deps_.classifier = &classifier_;
    if (options_.decision_sink) controller_.set_sink(options_.decision_sink);
}

Service::~Service() { stop(); }

void Service::start() {
    if (started_) return;
    started_ = true;
    housekeeping_thread_ = std::jthread([this](std::stop_token st) { housekeeping_loop(st); });
    control_thread_ = std::jthread([this](std::stop_token st) { control_loop(st); });
}

void Service::stop() {
    if (!started_) return;
    control_thread_.request_stop();
    housekeeping_thread_.request_stop();
    if (control_thread_.joinable()) control_thread_.join();
    if (housekeeping_thread_.joinable()) housekeeping_thread_.join();
    std::map<std::string, WorkerSlot> slots;
    {
        std::lock_guard lock(workers_mu_);
        slots.swap(workers_);
    }
    for (auto& [id, slot] : slots) slot.thread.request_stop();
    slots.clear();  // joins
    started_ = false;
}

void Service::control_loop(std::stop_token stop) {
    while (!stop.stop_requested()) {
        try {
            controller_.control_step(clock_.now());
        } catch (const std::exception& e) {
            if (options_.warning_sink) options_.warning_sink(std::string("controller: ") + e.what());
        }
        interruptible_sleep(stop, config_.policy.control_period);
    }
}

void Service::housekeeping_once() {
    std::vector<WorkerSlot> retired;
    for (const Transition& tr : fabric_.tick(clock_.now())) {
        std::lock_guard lock(workers_mu_);
        if (tr.to == InstanceState::Running) {
            auto worker = std::make_unique<Worker>(tr.instance_id, config_.worker, deps_, clock_, &fabric_);
            if (options_.warning_sink) worker->set_warning_sink(options_.warning_sink);
            Worker* raw = worker.get();
            WorkerSlot slot{std::move(worker), std::jthread([raw](std::stop_token st) { raw->run(st); })};
            workers_.emplace(tr.instance_id, std::move(slot));
        } else if (tr.to == InstanceState::Terminated) {
            auto it = workers_.find(tr.instance_id);
            if (it != workers_.end()) {
                it->second.thread.request_stop();
                retired.push_back(std::move(it->second));
                workers_.erase(it);
            }
        }
    }
    // Joined outside the lock; a worker finishes its current message first.
    retired.clear();
    gateway_.collect_responses();
}

void Service::housekeeping_loop(std::stop_token stop) {
    while (!stop.stop_requested()) {
        try {
            housekeeping_once();
        } catch (const std::exception& e) {
            if (options_.warning_sink) options_.warning_sink(std::string("housekeeping: ") + e.what());
        }
        interruptible_sleep(stop, options_.housekeeping_period);
    }
}

JobStatus Service::job_status(const std::string& job_id) {
    gateway_.collect_responses();
    return gateway_.job_status(job_id);
}

MetricsReport Service::metrics() const {
    MetricsReport r;
    r.response_times = gateway_.response_times();
    if (!r.response_times.empty()) r.response_time = r.response_times.back();
    r.boot_samples = fabric_.boot_time_samples();
    if (!r.boot_samples.empty()) r.mean_boot_time = mean_boot_time(r.boot_samples);
    r.instances_launched = fabric_.total_launched();
    r.peak_active = controller_.peak_active();
    QueueStats qs = queue_.stats(std::string(kRequestQueue));
    r.messages_redelivered = qs.redeliveries;
    r.stale_deletes = qs.stale_deletes;
    r.output_objects = store_.object_count(std::string(kOutputBucket));
    r.finished_at = clock_.now();
    r.decision_log = controller_.decision_log();
    return r;
}

int Service::running_workers() const {
    std::lock_guard lock(workers_mu_);
    return static_cast<int>(workers_.size());
}

}  // namespace elastic
