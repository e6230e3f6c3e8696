#pragma once

// Shared between the service config and scenario file readers.

#include <cstdint>
#include <string>

#include <json.hpp>

#include "elastic/config.hpp"

namespace elastic::detail {

std::int64_t read_int(const std::string& key, const nlohmann::ordered_json& v);
Duration read_duration(const std::string& key, const nlohmann::ordered_json& v);

/// Returns false if the key is not a service config key.
bool read_service_key(const std::string& key, const nlohmann::ordered_json& v, ServiceConfig& cfg);
void write_service_keys(nlohmann::ordered_json& j, const ServiceConfig& cfg);

}  // namespace elastic::detail
