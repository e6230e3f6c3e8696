#include "elastic/blobstore.hpp"

#include <unistd.h>

#include <filesystem>
#include <functional>
#include <random>
#include <thread>

#include <gtest/gtest.h>

namespace elastic {
namespace {

class BlobStoreTest : public ::testing::Test {
protected:
    Clock clock_ = Clock::simulated();
    BlobStore store_ = BlobStore::bootstrap(clock_);
};

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorCode::InvalidConfig;
}

TEST_F(BlobStoreTest, BootstrapCreatesInputAndOutput) {
    EXPECT_TRUE(store_.has_bucket("input"));
    EXPECT_TRUE(store_.has_bucket("output"));
    EXPECT_EQ(store_.object_count("input"), 0u);
}

TEST_F(BlobStoreTest, PutGetRoundTrip) {
    Bytes img(80'000, 0x5A);
    clock_.advance(42_ms);
    store_.put("input", "test_0.JPEG", img);
    EXPECT_EQ(store_.get("input", "test_0.JPEG"), img);
    BlobObject meta = store_.head("input", "test_0.JPEG");
    EXPECT_EQ(meta.content_length, 80'000u);
    EXPECT_EQ(meta.last_modified.ms(), 42);
}

TEST_F(BlobStoreTest, LastWriterWins) {
    store_.put("input", "k", to_bytes("A"));
    store_.put("input", "k", to_bytes("B"));
    EXPECT_EQ(to_string(store_.get("input", "k")), "B");
}

TEST_F(BlobStoreTest, Errors) {
    EXPECT_EQ(code_of([&] { store_.put("nonexistent", "k", to_bytes("b")); }), ErrorCode::NoSuchBucket);
    EXPECT_EQ(code_of([&] { store_.put("input", "", to_bytes("b")); }), ErrorCode::EmptyKey);
    EXPECT_EQ(code_of([&] { store_.get("input", "missing"); }), ErrorCode::NoSuchKey);
    EXPECT_EQ(code_of([&] { store_.list("nope"); }), ErrorCode::NoSuchBucket);
    EXPECT_EQ(code_of([&] { store_.remove("nope", "k"); }), ErrorCode::NoSuchBucket);
}

TEST_F(BlobStoreTest, ListByPrefixIsSorted) {
    for (const char* k : {"b1", "a2", "a1"}) store_.put("input", k, to_bytes("x"));
    EXPECT_EQ(store_.list("input", "a"), (std::vector<std::string>{"a1", "a2"}));
    EXPECT_EQ(store_.list("input", ""), (std::vector<std::string>{"a1", "a2", "b1"}));
    EXPECT_TRUE(store_.list("output", "").empty());
}

TEST_F(BlobStoreTest, DeleteIsIdempotent) {
    store_.put("input", "k", to_bytes("x"));
    store_.remove("input", "k");
    EXPECT_EQ(code_of([&] { store_.get("input", "k"); }), ErrorCode::NoSuchKey);
    EXPECT_NO_THROW(store_.remove("input", "k"));
    store_.put("input", "k", to_bytes("new"));
    EXPECT_EQ(to_string(store_.get("input", "k")), "new");
}

TEST_F(BlobStoreTest, RoundTripRandomPayloads) {
    std::mt19937_64 rng(7);
    std::vector<std::size_t> sizes = {0, 1, 2, 1023, 80'000, (1u << 20) + 17};
    for (int i = 0; i < 40; ++i) sizes.push_back(rng() % 5000);
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        Bytes b(sizes[i]);
        for (auto& x : b) x = static_cast<std::uint8_t>(rng());
        std::string key = "obj/" + std::to_string(i);
        store_.put("input", key, b);
        ASSERT_EQ(store_.get("input", key), b) << "size " << sizes[i];
        EXPECT_EQ(store_.head("input", key).content_length, b.size());
    }
}

TEST(BlobStoreConcurrency, DistinctKeysDoNotInterfere) {
    Clock clock = Clock::real();
    BlobStore store = BlobStore::bootstrap(clock);
    constexpr int kWriters = 16;
    constexpr int kKeysPerWriter = 200;
    std::vector<std::thread> threads;
    for (int w = 0; w < kWriters; ++w) {
        threads.emplace_back([&store, w] {
            for (int k = 0; k < kKeysPerWriter; ++k) {
                std::string key = std::to_string(w) + "/" + std::to_string(k);
                store.put("input", key, to_bytes(key + "#payload"));
            }
        });
    }
    for (auto& t : threads) t.join();
    EXPECT_EQ(store.object_count("input"), static_cast<std::size_t>(kWriters * kKeysPerWriter));
    for (int w = 0; w < kWriters; ++w) {
        for (int k = 0; k < kKeysPerWriter; ++k) {
            std::string key = std::to_string(w) + "/" + std::to_string(k);
            ASSERT_EQ(to_string(store.get("input", key)), key + "#payload");
        }
    }
}

TEST(BlobStoreDisk, PersistsAndReloads) {
    auto root = std::filesystem::temp_directory_path() / ("elastic-blob-" + std::to_string(::getpid()));
    std::filesystem::remove_all(root);
    Clock clock = Clock::simulated();
    {
        BlobStore store = BlobStore::bootstrap(clock, root);
        store.put("input", "job-1/test 0.JPEG", to_bytes("abc"));
        store.put("output", "job-1/test 0.JPEG.json", to_bytes("{}"));
        store.put("input", "gone", to_bytes("x"));
        store.remove("input", "gone");
    }
    EXPECT_TRUE(std::filesystem::exists(root / "input" / url_encode_key("job-1/test 0.JPEG")));
    BlobStore reloaded = BlobStore::bootstrap(clock, root);
    EXPECT_EQ(to_string(reloaded.get("input", "job-1/test 0.JPEG")), "abc");
    EXPECT_EQ(reloaded.list("input"), std::vector<std::string>{"job-1/test 0.JPEG"});
    EXPECT_EQ(reloaded.object_count("output"), 1u);
    std::filesystem::remove_all(root);
}

TEST(UrlEncodeTest, EncodesAndDecodes) {
    EXPECT_EQ(url_encode_key("a/b c"), "a%2Fb%20c");
    EXPECT_EQ(url_decode_key("a%2Fb%20c"), "a/b c");
    EXPECT_EQ(url_encode_key(".."), "%2E%2E");
    for (std::string k : {"plain.JPEG", "x/y/z", "%41", "ünï", "..", "."}) {
        EXPECT_EQ(url_decode_key(url_encode_key(k)), k);
    }
}

}  // namespace
}  // namespace elastic
