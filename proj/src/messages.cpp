#include "elastic/messages.hpp"

#include <array>

#include <json.hpp>

namespace elastic {

namespace {

using nlohmann::ordered_json;

// Parses an object and pulls the named non-empty string fields, or nothing.
template <std::size_t N>
std::optional<std::array<std::string, N>> string_fields(std::string_view text, const char* const (&names)[N]) {
    auto j = ordered_json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (!j.is_object()) return std::nullopt;
    std::array<std::string, N> out;
    for (std::size_t i = 0; i < N; ++i) {
        auto it = j.find(names[i]);
        if (it == j.end() || !it->is_string()) return std::nullopt;
        out[i] = it->template get<std::string>();
        if (out[i].empty()) return std::nullopt;
    }
    return out;
}

}  // namespace

std::string RequestBody::to_json() const {
    ordered_json j;
    j["bucket"] = bucket;
    j["key"] = key;
    j["job"] = job;
    return j.dump();
}

std::optional<RequestBody> RequestBody::parse(std::string_view text) {
    static const char* const kNames[] = {"bucket", "key", "job"};
    auto f = string_fields(text, kNames);
    if (!f) return std::nullopt;
    return RequestBody{(*f)[0], (*f)[1], (*f)[2]};
}

std::string ResponseBody::to_json() const {
    ordered_json j;
    j["job"] = job;
    j["image"] = image;
    j["label"] = label;
    return j.dump();
}

std::optional<ResponseBody> ResponseBody::parse(std::string_view text) {
    static const char* const kNames[] = {"job", "image", "label"};
    auto f = string_fields(text, kNames);
    if (!f) return std::nullopt;
    return ResponseBody{(*f)[0], (*f)[1], (*f)[2]};
}

std::string OutputDocument::to_json() const {
    ordered_json j;
    j["image"] = image;
    j["label"] = label;
    return j.dump();
}

std::optional<OutputDocument> OutputDocument::parse(std::string_view text) {
    static const char* const kNames[] = {"image", "label"};
    auto f = string_fields(text, kNames);
    if (!f) return std::nullopt;
    return OutputDocument{(*f)[0], (*f)[1]};
}

}  // namespace elastic
