#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "elastic/autoscaler.hpp"
#include "elastic/config.hpp"
#include "elastic/gateway.hpp"
#include "elastic/worker.hpp"

namespace elastic {

/// Shape of one simulated batch upload. Scenario files are flat JSON: every
/// service config key plus "n_images", "image_size_bytes",
/// "service_time_per_image_ms" and optionally "horizon_ms".
struct Scenario {
    int n_images = 0;
    std::int64_t image_size_bytes = 80'000;
    Duration service_time_per_image = 1'000_ms;
    ScalingPolicy policy;
    WorkerConfig worker_config;
    std::uint64_t seed = 0;
    int max_batch = kDefaultMaxBatch;
    // Virtual time after which a run that has not settled is an error.
    Duration horizon = Duration(24LL * 3600 * 1000);

    void validate() const;

    std::string to_json() const;
    static Scenario from_json(std::string_view text);
    static Scenario load(const std::filesystem::path& path);
};

struct MetricsReport {
    Duration response_time;
    std::vector<Duration> response_times;
    std::optional<Duration> mean_boot_time;
    std::vector<Duration> boot_samples;
    int instances_launched = 0;
    int peak_active = 0;
    std::uint64_t messages_redelivered = 0;
    std::uint64_t stale_deletes = 0;
    std::size_t output_objects = 0;
    Timestamp finished_at;
    InstanceMetadata instance_metadata;
    std::vector<ScalingDecision> decision_log;
    std::optional<std::vector<ResultRecord>> results;

    /// Stable key order; equal reports serialize to identical bytes.
    std::string to_json(int indent = 2) const;

    static std::string csv_header();
    std::string csv_row(int n_images) const;
};

/// Runs submit -> autoscale -> boot -> process -> collect on a virtual clock.
/// Same scenario in, same report out.
MetricsReport run_scenario(const Scenario& scenario);

/// boot_total + ceil(n / min(n, cap)) * service: every instance launched at
/// t=0, zero poll latency, constant service time.
Duration analytic_response_time(int n, int cap, Duration boot_total, Duration service);

/// Arithmetic mean rounded half-up to the millisecond; EmptySamples on [].
Duration mean_boot_time(std::span<const Duration> samples);

/// completed_at - submitted_at; JobNotCompleted for a pending job.
Duration record_response_time(const Job& job);
/// Same, and appends the value to report.response_times.
Duration record_response_time(const Job& job, MetricsReport& report);

/// Deterministic pseudo-JPEG payload for image `index` of a scenario.
Bytes synthetic_image(std::uint64_t seed, int index, std::int64_t size_bytes);

}  // namespace elastic
