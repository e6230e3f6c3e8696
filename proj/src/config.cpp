#include "elastic/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "config_json.hpp"

namespace elastic {

void ServiceConfig::validate() const {
    policy.validate();
    worker.validate();
    if (worker.poll_interval.ms() < 0) throw Error(ErrorCode::InvalidConfig, "poll_interval_ms must be >= 0");
    if (max_batch < 1) throw Error(ErrorCode::InvalidConfig, "max_batch must be >= 1");
}

std::string ServiceConfig::to_json() const {
    nlohmann::ordered_json j;
    detail::write_service_keys(j, *this);
    return j.dump();
}

ServiceConfig ServiceConfig::from_json(std::string_view text) {
    nlohmann::ordered_json j = nlohmann::ordered_json::parse(text, nullptr, false);
    if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "config must be a JSON object");
    ServiceConfig cfg;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!detail::read_service_key(it.key(), it.value(), cfg)) {
            throw Error(ErrorCode::InvalidConfig, "unknown key '" + it.key() + "'");
        }
    }
    cfg.validate();
    return cfg;
}

ServiceConfig ServiceConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidConfig, "cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

namespace detail {

std::int64_t read_int(const std::string& key, const nlohmann::ordered_json& v) {
    if (!v.is_number_integer()) throw Error(ErrorCode::InvalidConfig, "'" + key + "' must be an integer");
    return v.get<std::int64_t>();
}

Duration read_duration(const std::string& key, const nlohmann::ordered_json& v) {
    std::int64_t ms = read_int(key, v);
    if (ms < 0) throw Error(ErrorCode::InvalidConfig, "'" + key + "' must be >= 0");
    return Duration(ms);
}

bool read_service_key(const std::string& key, const nlohmann::ordered_json& v, ServiceConfig& cfg) {
    if (key == "max_app_instances") {
        cfg.policy.max_app_instances = static_cast<int>(read_int(key, v));
    } else if (key == "control_period_ms") {
        cfg.policy.control_period = read_duration(key, v);
    } else if (key == "idle_timeout_ms") {
        cfg.policy.idle_timeout = read_duration(key, v);
    } else if (key == "pending_delay_ms") {
        cfg.policy.boot_model.pending_delay = read_duration(key, v);
    } else if (key == "boot_mean_ms") {
        cfg.policy.boot_model.boot_mean = read_duration(key, v);
    } else if (key == "boot_jitter_ms") {
        cfg.policy.boot_model.boot_jitter = read_duration(key, v);
    } else if (key == "poll_interval_ms") {
        cfg.worker.poll_interval = read_duration(key, v);
    } else if (key == "visibility_timeout_ms") {
        cfg.worker.visibility_timeout = read_duration(key, v);
    } else if (key == "receive_batch") {
        cfg.worker.receive_batch = static_cast<int>(read_int(key, v));
    } else if (key == "max_batch") {
        cfg.max_batch = static_cast<int>(read_int(key, v));
    } else if (key == "seed") {
        std::int64_t s = read_int(key, v);
        if (s < 0) throw Error(ErrorCode::InvalidConfig, "'seed' must be >= 0");
        cfg.seed = static_cast<std::uint64_t>(s);
        cfg.policy.boot_model.seed = cfg.seed;
    } else {
        return false;
    }
    return true;
}

void write_service_keys(nlohmann::ordered_json& j, const ServiceConfig& cfg) {
    j["max_app_instances"] = cfg.policy.max_app_instances;
    j["control_period_ms"] = cfg.policy.control_period.ms();
    j["idle_timeout_ms"] = cfg.policy.idle_timeout.ms();
    j["pending_delay_ms"] = cfg.policy.boot_model.pending_delay.ms();
    j["boot_mean_ms"] = cfg.policy.boot_model.boot_mean.ms();
    j["boot_jitter_ms"] = cfg.policy.boot_model.boot_jitter.ms();
    j["poll_interval_ms"] = cfg.worker.poll_interval.ms();
    j["visibility_timeout_ms"] = cfg.worker.visibility_timeout.ms();
    j["receive_batch"] = cfg.worker.receive_batch;
    j["max_batch"] = cfg.max_batch;
    j["seed"] = cfg.seed;
}

}  // namespace detail

}  // namespace elastic
