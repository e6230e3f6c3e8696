#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace elastic {

// Wire bodies carried on the request/response queues and stored in the
// output bucket. Field order is fixed.

struct RequestBody {
    std::string bucket;
    std::string key;  // bare image name; stored at <job>/<key>
    std::string job;

    std::string to_json() const;  // {"bucket":..,"key":..,"job":..}
    static std::optional<RequestBody> parse(std::string_view text);
};

struct ResponseBody {
    std::string job;
    std::string image;
    std::string label;

    std::string to_json() const;  // {"job":..,"image":..,"label":..}
    static std::optional<ResponseBody> parse(std::string_view text);
};

struct OutputDocument {
    std::string image;
    std::string label;

    std::string to_json() const;  // {"image":..,"label":..}
    static std::optional<OutputDocument> parse(std::string_view text);
};

inline std::string input_key(std::string_view job, std::string_view image) {
    return std::string(job) + "/" + std::string(image);
}

inline std::string output_key(std::string_view job, std::string_view image) {
    return std::string(job) + "/" + std::string(image) + ".json";
}

}  // namespace elastic
