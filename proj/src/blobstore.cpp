#include "elastic/blobstore.hpp"

#include <fstream>
#include <iterator>
#include <mutex>

namespace elastic {

namespace fs = std::filesystem;

std::string url_encode_key(std::string_view key) {
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string out;
    out.reserve(key.size());
    for (unsigned char c : key) {
        bool plain = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' ||
                     c == '_' || c == '.' || c == '~';
        if (plain) {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(kHex[c >> 4]);
            out.push_back(kHex[c & 0xF]);
        }
    }
    // "." and ".." are not usable as file names.
    if (out == "." || out == "..") {
        std::string escaped;
        for (std::size_t i = 0; i < out.size(); ++i) escaped += "%2E";
        return escaped;
    }
    return out;
}

std::string url_decode_key(std::string_view encoded) {
    auto hex = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        return -1;
    };
    std::string out;
    out.reserve(encoded.size());
    for (std::size_t i = 0; i < encoded.size(); ++i) {
        if (encoded[i] == '%' && i + 2 < encoded.size()) {
            int hi = hex(encoded[i + 1]);
            int lo = hex(encoded[i + 2]);
            if (hi >= 0 && lo >= 0) {
                out.push_back(static_cast<char>(hi * 16 + lo));
                i += 2;
                continue;
            }
        }
        out.push_back(encoded[i]);
    }
    return out;
}

BlobStore::BlobStore(const Clock& clock, std::optional<fs::path> root) : clock_(&clock), root_(std::move(root)) {
    if (root_) {
        fs::create_directories(*root_);
        load_from_disk();
    }
}

BlobStore::BlobStore(BlobStore&& other) noexcept
    : clock_(other.clock_), root_(std::move(other.root_)), buckets_(std::move(other.buckets_)) {}

BlobStore BlobStore::bootstrap(const Clock& clock, std::optional<fs::path> root) {
    BlobStore store(clock, std::move(root));
    for (auto name : {kInputBucket, kOutputBucket}) {
        if (!store.has_bucket(std::string(name))) store.create_bucket(std::string(name));
    }
    return store;
}

void BlobStore::load_from_disk() {
    for (const auto& dir : fs::directory_iterator(*root_)) {
        if (!dir.is_directory()) continue;
        Bucket bucket;
        for (const auto& file : fs::directory_iterator(dir.path())) {
            if (!file.is_regular_file() || file.path().filename().string().ends_with("%tmp")) continue;
            std::ifstream in(file.path(), std::ios::binary);
            Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
            std::string key = url_decode_key(file.path().filename().string());
            BlobObject obj{key, std::move(bytes), 0, clock_->now()};
            obj.content_length = obj.bytes.size();
            bucket.emplace(key, std::move(obj));
        }
        buckets_.emplace(url_decode_key(dir.path().filename().string()), std::move(bucket));
    }
}

void BlobStore::create_bucket(const std::string& name) {
    if (name.empty()) throw Error(ErrorCode::EmptyKey, "bucket name");
    std::unique_lock lock(mu_);
    if (buckets_.contains(name)) throw Error(ErrorCode::BucketExists, name);
    buckets_.emplace(name, Bucket{});
    if (root_) fs::create_directories(*root_ / url_encode_key(name));
}

bool BlobStore::has_bucket(const std::string& name) const {
    std::shared_lock lock(mu_);
    return buckets_.contains(name);
}

const BlobStore::Bucket& BlobStore::bucket_or_throw(const std::string& name) const {
    auto it = buckets_.find(name);
    if (it == buckets_.end()) throw Error(ErrorCode::NoSuchBucket, name);
    return it->second;
}

BlobStore::Bucket& BlobStore::bucket_or_throw(const std::string& name) {
    auto it = buckets_.find(name);
    if (it == buckets_.end()) throw Error(ErrorCode::NoSuchBucket, name);
    return it->second;
}

void BlobStore::put(const std::string& bucket, const std::string& key, Bytes bytes) {
    if (key.empty()) throw Error(ErrorCode::EmptyKey);
    std::unique_lock lock(mu_);
    Bucket& b = bucket_or_throw(bucket);
    if (root_) {
        // Write-then-rename keeps the on-disk object whole for readers.
        fs::path dir = *root_ / url_encode_key(bucket);
        fs::path target = dir / url_encode_key(key);
        // Encoded keys never contain "%t", so the temp name cannot collide.
        fs::path tmp = dir / (url_encode_key(key) + "%tmp");
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        }
        fs::rename(tmp, target);
    }
    BlobObject obj{key, std::move(bytes), 0, clock_->now()};
    obj.content_length = obj.bytes.size();
    b.insert_or_assign(key, std::move(obj));
}

Bytes BlobStore::get(const std::string& bucket, const std::string& key) const {
    std::shared_lock lock(mu_);
    const Bucket& b = bucket_or_throw(bucket);
    auto it = b.find(key);
    if (it == b.end()) throw Error(ErrorCode::NoSuchKey, bucket + "/" + key);
    return it->second.bytes;
}

BlobObject BlobStore::head(const std::string& bucket, const std::string& key) const {
    std::shared_lock lock(mu_);
    const Bucket& b = bucket_or_throw(bucket);
    auto it = b.find(key);
    if (it == b.end()) throw Error(ErrorCode::NoSuchKey, bucket + "/" + key);
    return BlobObject{it->second.key, {}, it->second.content_length, it->second.last_modified};
}

bool BlobStore::exists(const std::string& bucket, const std::string& key) const {
    std::shared_lock lock(mu_);
    return bucket_or_throw(bucket).contains(key);
}

std::vector<std::string> BlobStore::list(const std::string& bucket, std::string_view prefix) const {
    std::shared_lock lock(mu_);
    const Bucket& b = bucket_or_throw(bucket);
    std::vector<std::string> keys;
    for (auto it = b.lower_bound(prefix); it != b.end() && it->first.starts_with(prefix); ++it) {
        keys.push_back(it->first);
    }
    return keys;
}

void BlobStore::remove(const std::string& bucket, const std::string& key) {
    std::unique_lock lock(mu_);
    Bucket& b = bucket_or_throw(bucket);
    if (b.erase(key) > 0 && root_) {
        std::error_code ec;
        fs::remove(*root_ / url_encode_key(bucket) / url_encode_key(key), ec);
    }
}

std::size_t BlobStore::object_count(const std::string& bucket) const {
    std::shared_lock lock(mu_);
    return bucket_or_throw(bucket).size();
}

}  // namespace elastic
