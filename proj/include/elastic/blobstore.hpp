#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "elastic/clock.hpp"

namespace elastic {

using Bytes = std::vector<std::uint8_t>;

inline Bytes to_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }
inline std::string to_string(std::span<const std::uint8_t> b) { return std::string(b.begin(), b.end()); }

struct BlobObject {
    std::string key;
    Bytes bytes;
    std::size_t content_length = 0;
    Timestamp last_modified;
};

inline constexpr std::string_view kInputBucket = "input";
inline constexpr std::string_view kOutputBucket = "output";

/// Percent-encodes everything outside [A-Za-z0-9._~-] so a key maps to a
/// single file name.
std::string url_encode_key(std::string_view key);
std::string url_decode_key(std::string_view encoded);

// Bucketed object store with S3 put/get/list/delete semantics. Optionally
// mirrors every bucket to `<root>/<bucket>/<url-encoded-key>` and reloads
// that tree on construction.
class BlobStore {
public:
    explicit BlobStore(const Clock& clock, std::optional<std::filesystem::path> root = std::nullopt);

    /// Store with the `input` and `output` buckets already created.
    static BlobStore bootstrap(const Clock& clock, std::optional<std::filesystem::path> root = std::nullopt);

    BlobStore(BlobStore&& other) noexcept;

    void create_bucket(const std::string& name);
    bool has_bucket(const std::string& name) const;

    void put(const std::string& bucket, const std::string& key, Bytes bytes);
    Bytes get(const std::string& bucket, const std::string& key) const;
    /// Metadata without copying the payload.
    BlobObject head(const std::string& bucket, const std::string& key) const;
    bool exists(const std::string& bucket, const std::string& key) const;
    std::vector<std::string> list(const std::string& bucket, std::string_view prefix = {}) const;
    /// Idempotent; absent keys are not an error.
    void remove(const std::string& bucket, const std::string& key);
    std::size_t object_count(const std::string& bucket) const;

private:
    using Bucket = std::map<std::string, BlobObject, std::less<>>;

    const Bucket& bucket_or_throw(const std::string& name) const;
    Bucket& bucket_or_throw(const std::string& name);
    void load_from_disk();

    const Clock* clock_;
    std::optional<std::filesystem::path> root_;
    mutable std::shared_mutex mu_;
    std::map<std::string, Bucket, std::less<>> buckets_;
};

}  // namespace elastic
