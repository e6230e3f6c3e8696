#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "elastic/autoscaler.hpp"
#include "elastic/blobstore.hpp"
#include "elastic/clock.hpp"
#include "elastic/config.hpp"
#include "elastic/fabric.hpp"
#include "elastic/gateway.hpp"
#include "elastic/simharness.hpp"
#include "elastic/worker.hpp"
#include "elastic/workqueue.hpp"

namespace elastic {

struct ServiceOptions {
    // Mirror the blob store to this directory instead of memory only.
    std::optional<std::filesystem::path> data_dir;
    // Fabric tick and response collection cadence.
    Duration housekeeping_period = 10_ms;
    // Receives every controller decision (including no-ops).
    Controller::DecisionSink decision_sink;
    std::function<void(const std::string&)> warning_sink;
};

// The whole pipeline on a real clock: controller loop, fabric lifecycle,
// one worker thread per Running instance, and background collection.
class Service {
public:
    explicit Service(ServiceConfig config, ServiceOptions options = {});
    ~Service();

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    void start();
    void stop();
    bool running() const noexcept { return started_; }

    Gateway& gateway() noexcept { return gateway_; }
    BlobStore& store() noexcept { return store_; }
    WorkQueue& queue() noexcept { return queue_; }
    Fabric& fabric() noexcept { return fabric_; }
    Controller& controller() noexcept { return controller_; }
    const Clock& clock() const noexcept { return clock_; }
    const ServiceConfig& config() const noexcept { return config_; }

    /// Collects pending responses first, then reports.
    JobStatus job_status(const std::string& job_id);
    MetricsReport metrics() const;
    int running_workers() const;

private:
    void control_loop(std::stop_token stop);
    void housekeeping_loop(std::stop_token stop);
    void housekeeping_once();

    ServiceConfig config_;
    ServiceOptions options_;
    Clock clock_;
    BlobStore store_;
    WorkQueue queue_;
    Fabric fabric_;
    Controller controller_;
    StubClassifier classifier_;
    Gateway gateway_;
    WorkerDeps deps_;

    struct WorkerSlot {
        std::unique_ptr<Worker> worker;
        std::jthread thread;
    };
    mutable std::mutex workers_mu_;
    std::map<std::string, WorkerSlot> workers_;

    bool started_ = false;
    std::jthread control_thread_;
    std::jthread housekeeping_thread_;
};

}  // namespace elastic
