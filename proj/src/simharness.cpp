#include "elastic/simharness.hpp"

#include <deque>
#include <fstream>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "config_json.hpp"

namespace elastic {

using nlohmann::ordered_json;

// ---------------------------------------------------------------- scenario

void Scenario::validate() const {
    if (n_images < 0) throw Error(ErrorCode::InvalidConfig, "n_images must be >= 0");
    if (image_size_bytes < 0) throw Error(ErrorCode::InvalidConfig, "image_size_bytes must be >= 0");
    if (n_images > 0 && service_time_per_image.ms() <= 0) {
        throw Error(ErrorCode::InvalidConfig, "service_time_per_image_ms must be > 0");
    }
    policy.validate();
    worker_config.validate();
    if (max_batch < 1) throw Error(ErrorCode::InvalidConfig, "max_batch must be >= 1");
}

std::string Scenario::to_json() const {
    ordered_json j;
    j["n_images"] = n_images;
    j["image_size_bytes"] = image_size_bytes;
    j["service_time_per_image_ms"] = service_time_per_image.ms();
    ServiceConfig cfg;
    cfg.policy = policy;
    cfg.worker = worker_config;
    cfg.max_batch = max_batch;
    cfg.seed = seed;
    detail::write_service_keys(j, cfg);
    j["horizon_ms"] = horizon.ms();
    return j.dump();
}

Scenario Scenario::from_json(std::string_view text) {
    ordered_json j = ordered_json::parse(text, nullptr, false);
    if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "scenario must be a JSON object");
    Scenario s;
    ServiceConfig cfg;
    cfg.policy = s.policy;
    cfg.worker = s.worker_config;
    cfg.max_batch = s.max_batch;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        if (key == "n_images") {
            s.n_images = static_cast<int>(detail::read_int(key, it.value()));
        } else if (key == "image_size_bytes") {
            s.image_size_bytes = detail::read_int(key, it.value());
        } else if (key == "service_time_per_image_ms") {
            s.service_time_per_image = detail::read_duration(key, it.value());
        } else if (key == "horizon_ms") {
            s.horizon = detail::read_duration(key, it.value());
        } else if (!detail::read_service_key(key, it.value(), cfg)) {
            throw Error(ErrorCode::InvalidConfig, "unknown scenario key '" + key + "'");
        }
    }
    s.policy = cfg.policy;
    s.worker_config = cfg.worker;
    s.max_batch = cfg.max_batch;
    s.seed = cfg.seed;
    s.validate();
    return s;
}

Scenario Scenario::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidConfig, "cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

// ----------------------------------------------------------------- metrics

std::string MetricsReport::to_json(int indent) const {
    ordered_json j;
    j["response_time_ms"] = response_time.ms();
    ordered_json rts = ordered_json::array();
    for (auto d : response_times) rts.push_back(d.ms());
    j["response_times_ms"] = rts;
    j["mean_boot_time_ms"] = mean_boot_time ? ordered_json(mean_boot_time->ms()) : ordered_json(nullptr);
    ordered_json boots = ordered_json::array();
    for (auto d : boot_samples) boots.push_back(d.ms());
    j["boot_samples_ms"] = boots;
    j["instances_launched"] = instances_launched;
    j["peak_active"] = peak_active;
    j["messages_redelivered"] = messages_redelivered;
    j["stale_deletes"] = stale_deletes;
    j["output_objects"] = output_objects;
    j["finished_at_ms"] = finished_at.ms();
    j["instance_type"] = instance_metadata.instance_type;
    j["region"] = instance_metadata.region;
    ordered_json log = ordered_json::array();
    for (const auto& d : decision_log) log.push_back(ordered_json::parse(d.to_json_line()));
    j["decision_log"] = log;
    if (results) {
        ordered_json rs = ordered_json::array();
        for (const auto& r : *results) rs.push_back({{"image", r.image_name}, {"label", r.label}});
        j["results"] = rs;
    }
    return j.dump(indent);
}

std::string MetricsReport::csv_header() {
    return "n_images,response_time_ms,mean_boot_time_ms,instances_launched,peak_active,messages_redelivered,"
           "output_objects";
}

std::string MetricsReport::csv_row(int n_images) const {
    std::ostringstream os;
    os << n_images << ',' << response_time.ms() << ',';
    if (mean_boot_time) os << mean_boot_time->ms();
    os << ',' << instances_launched << ',' << peak_active << ',' << messages_redelivered << ',' << output_objects;
    return os.str();
}

Duration analytic_response_time(int n, int cap, Duration boot_total, Duration service) {
    if (n < 1 || cap < 1) throw Error(ErrorCode::InvalidCount, "n and cap must be >= 1");
    std::int64_t parallel = std::min(n, cap);
    std::int64_t rounds = (n + parallel - 1) / parallel;
    return boot_total + service * rounds;
}

Duration mean_boot_time(std::span<const Duration> samples) {
    if (samples.empty()) throw Error(ErrorCode::EmptySamples);
    std::int64_t sum = 0;
    for (auto d : samples) sum += d.ms();
    auto n = static_cast<std::int64_t>(samples.size());
    return Duration((2 * sum + n) / (2 * n));
}

Duration record_response_time(const Job& job) {
    if (!job.completed_at) throw Error(ErrorCode::JobNotCompleted, job.job_id);
    return *job.completed_at - job.submitted_at;
}

Duration record_response_time(const Job& job, MetricsReport& report) {
    Duration d = record_response_time(job);
    report.response_times.push_back(d);
    return d;
}

Bytes synthetic_image(std::uint64_t seed, int index, std::int64_t size_bytes) {
    Bytes out(static_cast<std::size_t>(size_bytes));
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(index) + 1);
    for (std::size_t i = 0; i < out.size(); i += 8) {
        std::uint64_t word = rng();
        for (std::size_t b = 0; b < 8 && i + b < out.size(); ++b) {
            out[i + b] = static_cast<std::uint8_t>(word >> (8 * b));
        }
    }
    // JPEG SOI/EOI markers, when there is room for them.
    if (out.size() >= 4) {
        out[0] = 0xFF;
        out[1] = 0xD8;
        out[out.size() - 2] = 0xFF;
        out[out.size() - 1] = 0xD9;
    }
    return out;
}

// -------------------------------------------------------------- simulation

namespace {

// Equal-time events run fabric first, then the controller, then workers,
// then response collection; within a class, in scheduling order.
enum class Priority : int { Fabric = 0, Controller = 1, Worker = 2, Collect = 3 };

enum class EventKind { FabricTick, ControlStep, WorkerPoll, WorkerComplete, WakeParked, Collect };

struct Event {
    std::int64_t t;
    Priority priority;
    std::uint64_t seq;
    EventKind kind;
    std::string instance;

    bool operator>(const Event& o) const {
        if (t != o.t) return t > o.t;
        if (priority != o.priority) return priority > o.priority;
        return seq > o.seq;
    }
};

struct SimWorker {
    Worker worker;
    std::deque<ReceivedMessage> batch;
    bool busy = false;
    bool parked = false;
};

class Simulation {
public:
    explicit Simulation(const Scenario& s)
        : scenario_(s),
          clock_(Clock::simulated()),
          store_(BlobStore::bootstrap(clock_)),
          queue_(WorkQueue::bootstrap(clock_, s.worker_config.visibility_timeout)),
          fabric_(clock_, s.policy.boot_model),
          controller_(queue_, fabric_, s.policy),
          classifier_(default_label_table(), s.seed),
          gateway_(store_, queue_, clock_, s.max_batch, s.seed) {
        deps_.store = &store_;
        deps_.queue = &queue_;
        deps_.classifier = &classifier_;
    }

    MetricsReport run() {
        std::optional<std::string> job_id;
        if (scenario_.n_images > 0) {
            std::vector<ImageUpload> images;
            images.reserve(static_cast<std::size_t>(scenario_.n_images));
            for (int i = 0; i < scenario_.n_images; ++i) {
                images.push_back({"test_" + std::to_string(i) + ".JPEG",
                                  synthetic_image(scenario_.seed, i, scenario_.image_size_bytes)});
            }
            job_id = gateway_.submit_job(images);
        }
        job_id_ = job_id;

        schedule(0, Priority::Controller, EventKind::ControlStep);
        while (!events_.empty()) {
            Event e = events_.top();
            events_.pop();
            if (e.t > scenario_.horizon.ms()) {
                throw Error(ErrorCode::ScenarioDidNotConverge,
                            "still running at t=" + std::to_string(e.t) + " ms");
            }
            clock_.advance_to(Timestamp(e.t));
            dispatch(e);
            if (settled()) break;
        }
        return report();
    }

private:
    void schedule(std::int64_t t, Priority p, EventKind kind, std::string instance = {}) {
        events_.push(Event{t, p, next_seq_++, kind, std::move(instance)});
    }

    std::int64_t now() const { return clock_.now().ms(); }

    void schedule_fabric_tick() {
        auto next = fabric_.next_transition_time();
        if (!next) return;
        std::int64_t t = std::max(next->ms(), now());
        if (tick_times_.insert(t).second) schedule(t, Priority::Fabric, EventKind::FabricTick);
    }

    Duration service_for(const ReceivedMessage& msg) const {
        // A result already on record means the model never runs again.
        return result_exists(msg.body, deps_) ? Duration(0) : scenario_.service_time_per_image;
    }

    void dispatch(const Event& e) {
        switch (e.kind) {
            case EventKind::FabricTick: on_fabric_tick(); break;
            case EventKind::ControlStep: on_control_step(); break;
            case EventKind::WorkerPoll: on_worker_poll(e.instance); break;
            case EventKind::WorkerComplete: on_worker_complete(e.instance); break;
            case EventKind::WakeParked: on_wake(); break;
            case EventKind::Collect: gateway_.collect_responses(); break;
        }
    }

    void on_fabric_tick() {
        tick_times_.erase(now());
        for (const Transition& tr : fabric_.tick(clock_.now())) {
            if (tr.to == InstanceState::Running) {
                workers_.emplace(
                    tr.instance_id,
                    SimWorker{Worker(tr.instance_id, scenario_.worker_config, deps_, clock_, &fabric_), {}, false, false});
                schedule(now(), Priority::Worker, EventKind::WorkerPoll, tr.instance_id);
            } else if (tr.to == InstanceState::Terminated) {
                workers_.erase(tr.instance_id);
            }
        }
        schedule_fabric_tick();
    }

    void on_control_step() {
        ScalingDecision d = controller_.control_step(clock_.now());
        if (!d.is_noop()) schedule_fabric_tick();
        schedule(now() + scenario_.policy.control_period.ms(), Priority::Controller, EventKind::ControlStep);
    }

    void on_worker_poll(const std::string& id) {
        auto it = workers_.find(id);
        if (it == workers_.end()) return;
        SimWorker& w = it->second;
        auto inst = fabric_.find(id);
        if (!inst || inst->state != InstanceState::Running) return;
        if (w.busy) return;
        w.parked = false;

        auto batch = w.worker.poll();
        if (batch.empty()) {
            if (scenario_.worker_config.poll_interval.ms() > 0) {
                schedule(now() + scenario_.worker_config.poll_interval.ms(), Priority::Worker, EventKind::WorkerPoll,
                         id);
            } else {
                // Zero poll interval: sleep until something can become visible.
                w.parked = true;
            }
            return;
        }
        for (const auto& msg : batch) {
            if (wake_times_.insert(msg.visibility_deadline.ms()).second) {
                schedule(msg.visibility_deadline.ms(), Priority::Worker, EventKind::WakeParked);
            }
        }
        w.busy = true;
        w.batch.assign(batch.begin(), batch.end());
        schedule(now() + service_for(w.batch.front()).ms(), Priority::Worker, EventKind::WorkerComplete, id);
    }

    void on_worker_complete(const std::string& id) {
        SimWorker& w = workers_.at(id);
        ProcessOutcome out = w.worker.process(w.batch.front());
        w.batch.pop_front();
        if (out.result || out.status != ProcessStatus::MalformedBody) {
            schedule(now(), Priority::Collect, EventKind::Collect);
        }
        if (!w.batch.empty()) {
            schedule(now() + service_for(w.batch.front()).ms(), Priority::Worker, EventKind::WorkerComplete, id);
            return;
        }
        w.busy = false;
        schedule(now(), Priority::Worker, EventKind::WorkerPoll, id);
    }

    void on_wake() {
        wake_times_.erase(now());
        // Map order is launch order: instance ids are zero-padded counters.
        for (auto& [id, w] : workers_) {
            if (w.parked) {
                w.parked = false;
                schedule(now(), Priority::Worker, EventKind::WorkerPoll, id);
            }
        }
    }

    bool settled() const {
        if (job_id_ && !gateway_.job(*job_id_).completed()) return false;
        if (queue_.live_messages(std::string(kRequestQueue)) > 0) return false;
        if (queue_.live_messages(std::string(kResponseQueue)) > 0) return false;
        if (fabric_.count_active() > 0) return false;
        for (const auto& [id, w] : workers_) {
            if (w.busy) return false;
        }
        return true;
    }

    MetricsReport report() {
        MetricsReport r;
        if (job_id_) {
            Job job = gateway_.job(*job_id_);
            r.response_time = record_response_time(job, r);
            JobStatus st = gateway_.job_status(*job_id_);
            r.results = st.results;
        } else {
            r.results = std::vector<ResultRecord>{};
        }
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

    const Scenario& scenario_;
    Clock clock_;
    BlobStore store_;
    WorkQueue queue_;
    Fabric fabric_;
    Controller controller_;
    StubClassifier classifier_;
    Gateway gateway_;
    WorkerDeps deps_;
    std::optional<std::string> job_id_;
    std::map<std::string, SimWorker> workers_;
    std::priority_queue<Event, std::vector<Event>, std::greater<>> events_;
    std::uint64_t next_seq_ = 0;
    std::set<std::int64_t> tick_times_;
    std::set<std::int64_t> wake_times_;
};

}  // namespace

MetricsReport run_scenario(const Scenario& scenario) {
    scenario.validate();
    Simulation sim(scenario);
    return sim.run();
}

}  // namespace elastic
