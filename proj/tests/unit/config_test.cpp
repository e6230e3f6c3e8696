#include "elastic/config.hpp"

#include <gtest/gtest.h>

namespace elastic {
namespace {

TEST(ServiceConfigTest, DefaultsMatchTheDeployment) {
    ServiceConfig c = ServiceConfig::from_json("{}");
    EXPECT_EQ(c.policy.max_app_instances, 17);
    EXPECT_EQ(c.policy.control_period.ms(), 5'000);
    EXPECT_EQ(c.policy.idle_timeout.ms(), 60'000);
    EXPECT_EQ(c.policy.boot_model.pending_delay.ms(), 30'000);
    EXPECT_EQ(c.policy.boot_model.boot_mean.ms(), 71'530);
    EXPECT_EQ(c.worker.poll_interval.ms(), 60'000);
    EXPECT_EQ(c.worker.visibility_timeout.ms(), 120'000);
    EXPECT_EQ(c.max_batch, 50);
}

TEST(ServiceConfigTest, ParsesEveryKey) {
    ServiceConfig c = ServiceConfig::from_json(R"({"max_app_instances":4,"control_period_ms":50,
        "idle_timeout_ms":100,"pending_delay_ms":1,"boot_mean_ms":2,"boot_jitter_ms":3,
        "poll_interval_ms":10,"visibility_timeout_ms":500,"receive_batch":2,"max_batch":7,"seed":9})");
    EXPECT_EQ(c.policy.max_app_instances, 4);
    EXPECT_EQ(c.policy.control_period.ms(), 50);
    EXPECT_EQ(c.policy.idle_timeout.ms(), 100);
    EXPECT_EQ(c.policy.boot_model.boot_jitter.ms(), 3);
    EXPECT_EQ(c.worker.receive_batch, 2);
    EXPECT_EQ(c.max_batch, 7);
    EXPECT_EQ(c.seed, 9u);
    EXPECT_EQ(c.policy.boot_model.seed, 9u);
    EXPECT_EQ(ServiceConfig::from_json(c.to_json()).to_json(), c.to_json());
}

TEST(ServiceConfigTest, RejectsBadInput) {
    for (const char* text : {R"({"max_app_instance":4})", R"({"control_period_ms":0})", R"({"seed":-1})",
                             R"({"poll_interval_ms":"10"})", R"({"receive_batch":11})", "not json", "[]",
                             R"({"idle_timeout_ms":-5})"}) {
        try {
            ServiceConfig::from_json(text);
            ADD_FAILURE() << text;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::InvalidConfig) << text;
        }
    }
    EXPECT_THROW(ServiceConfig::load("/nonexistent/config.json"), Error);
}

}  // namespace
}  // namespace elastic
