#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "elastic/autoscaler.hpp"
#include "elastic/worker.hpp"

namespace elastic {

// The service configuration file. Keys (all optional, defaults shown):
//   {"max_app_instances":17,"control_period_ms":5000,"idle_timeout_ms":60000,
//    "pending_delay_ms":30000,"boot_mean_ms":71530,"boot_jitter_ms":0,
//    "poll_interval_ms":60000,"visibility_timeout_ms":120000,"max_batch":50,
//    "seed":0}
struct ServiceConfig {
    ScalingPolicy policy;
    WorkerConfig worker;
    int max_batch = 50;
    std::uint64_t seed = 0;

    void validate() const;

    std::string to_json() const;
    /// Unknown keys and wrongly typed values raise InvalidConfig.
    static ServiceConfig from_json(std::string_view text);
    static ServiceConfig load(const std::filesystem::path& path);
};

}  // namespace elastic
