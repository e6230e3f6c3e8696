// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "elastic/simharness.hpp"
#include "live_pipeline.hpp"
#include "queue_model.hpp"

using namespace elastic;
using namespace std::chrono_literals;
using Steady = std::chrono::steady_clock;

namespace {

struct Verdict {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& why) {
        if (!cond && ok) {
            ok = false;
            detail = why;
        }
    }
};

double elapsed_ms(Steady::time_point since) {
    return std::chrono::duration<double, std::milli>(Steady::now() - since).count();
}

Scenario calibrated(int n) {
    Scenario s;
    s.n_images = n;
    s.service_time_per_image = 64'310_ms;
    s.worker_config.poll_interval = 0_ms;
    s.policy.max_app_instances = 17;
    s.policy.control_period = 5'000_ms;
    s.policy.boot_model = BootModel{30'000_ms, 71'530_ms, 0_ms, 0};
    return s;
}

Verdict scaling_table() {
    Verdict v;
    auto start = Steady::now();
    ScalingPolicy p;
    p.max_app_instances = 17;
    for (int d = 0; d <= 30; ++d) {
        int want = d < 17 ? d : 17;
        v.require(desired_app_instances(d, p) == want, "desired(" + std::to_string(d) + ")");
        Scenario s = calibrated(d);
        s.max_batch = 64;
        int peak = run_scenario(s).peak_active;
        v.require(peak == want, "peak_active at depth " + std::to_string(d) + " = " + std::to_string(peak));
    }
    double ms = elapsed_ms(start);
    v.require(ms < 1000.0, "took " + std::to_string(ms) + " ms");
    if (v.ok) v.detail = "d=0..30 exact, " + std::to_string(static_cast<int>(ms)) + " ms";
    return v;
}

Verdict boot_time() {
    Verdict v;
    auto start = Steady::now();
    Clock clock = Clock::simulated();
    WorkQueue queue = WorkQueue::bootstrap(clock);
    Fabric fabric(clock, BootModel{30'000_ms, 71'530_ms, 0_ms, 0});
    ScalingPolicy p;
    p.boot_model = fabric.boot_model();
    Controller controller(queue, fabric, p);
    for (int i = 0; i < 17; ++i) queue.send("requests", "m" + std::to_string(i));
    controller.control_step(clock.now());
    v.require(fabric.total_launched() == 17, "launched " + std::to_string(fabric.total_launched()));
    // Step virtual time to every scheduled transition.
    while (auto next = fabric.next_transition_time()) {
        clock.advance_to(*next);
        fabric.tick(clock.now());
    }
    for (const auto& inst : fabric.snapshot()) {
        v.require(inst.state == InstanceState::Running, inst.instance_id + " not running");
        v.require(inst.running_since && (*inst.running_since - inst.launched_at).ms() == 101'530,
                  inst.instance_id + " running at wrong time");
    }
    auto samples = fabric.boot_time_samples();
    v.require(samples.size() == 17, "sample count");
    if (!samples.empty()) v.require(mean_boot_time(samples).ms() == 71'530, "fabric mean boot");

    MetricsReport r = run_scenario(calibrated(20));
    v.require(r.instances_launched == 17, "scenario launched " + std::to_string(r.instances_launched));
    v.require(r.mean_boot_time && r.mean_boot_time->ms() == 71'530, "scenario mean boot");
    double ms = elapsed_ms(start);
    v.require(ms < 1000.0, "took " + std::to_string(ms) + " ms");
    if (v.ok) v.detail = "mean 71530 ms, running at launch+101530 ms";
    return v;
}

Verdict response_time() {
    Verdict v;
    auto start = Steady::now();
    Scenario s = calibrated(20);
    MetricsReport r = run_scenario(s);
    std::int64_t got = r.response_time.ms();
    std::int64_t tol = 2 * s.policy.control_period.ms();
    std::int64_t analytic = analytic_response_time(20, 17, 101'530_ms, 64'310_ms).ms();
    v.require(tol == 10'000, "tolerance");
    v.require(std::llabs(got - 230'150) <= tol, "response " + std::to_string(got) + " vs 230150");
    v.require(std::llabs(got - analytic) <= tol, "response " + std::to_string(got) + " vs analytic");
    double ms = elapsed_ms(start);
    v.require(ms < 1000.0, "took " + std::to_string(ms) + " ms");
    if (v.ok) v.detail = "response " + std::to_string(got) + " ms, analytic " + std::to_string(analytic) + " ms";
    return v;
}

Verdict queue_conformance() {
    Verdict v;
    auto start = Steady::now();
    constexpr std::uint64_t kSequences = 10'000;
    std::uint64_t ops = 0, stale = 0, redelivered = 0;
    for (std::uint64_t seed = 0; seed < kSequences; ++seed) {
        auto r = testing::run_queue_conformance(seed, 80);
        v.require(r.ok, r.failure);
        if (!r.ok) break;
        ops += r.operations;
        stale += r.stale_checked;
        redelivered += r.redeliveries;
    }
    v.require(stale > 0, "no stale receipts exercised");
    v.require(redelivered > 0, "no redeliveries exercised");
    double ms = elapsed_ms(start);
    v.require(ms < 30'000.0, "took " + std::to_string(ms) + " ms");
    if (v.ok) {
        v.detail = std::to_string(kSequences) + " sequences, " + std::to_string(ops) + " ops, " +
                   std::to_string(static_cast<int>(ms)) + " ms";
    }
    return v;
}

// Criteria 5 and 7 share one live deployment: 7 observes scale-in after the
// job from 5 completes.
std::pair<Verdict, Verdict> live_mode() {
    Verdict e2e, scale_in;
    ServiceConfig cfg = testing::fast_config();
    cfg.worker.poll_interval = 10_ms;
    cfg.policy.boot_model = BootModel{0_ms, 0_ms, 0_ms, 0};
    cfg.seed = 0;
    cfg.policy.idle_timeout = 100_ms;
    cfg.policy.control_period = 50_ms;
    testing::LiveStack stack(cfg);
    auto client = stack.client();

    auto names = testing::fixture_names(20);
    auto start = Steady::now();
    auto res = testing::post_images(client, names);
    if (!res || res->status != 201) {
        e2e.require(false, "POST /jobs failed");
        scale_in.require(false, "no job");
        return {e2e, scale_in};
    }
    std::string id = nlohmann::json::parse(res->body)["job_id"];
    auto done = testing::wait_for_job(client, id, 5s);
    double took = elapsed_ms(start);
    auto completed_at = Steady::now();
    e2e.require(done.has_value(), "not completed within 5 s");
    if (done) {
        auto golden = testing::golden_label_map();
        const auto& results = (*done)["results"];
        e2e.require(results.size() == 20, "result lines: " + std::to_string(results.size()));
        for (const auto& r : results) {
            std::string image = r["image"], label = r["label"];
            e2e.require(golden.count(image) && golden.at(image) == label, image + " labelled " + label);
        }
        e2e.require(stack.service.store().object_count("output") == 20,
                    "output objects: " + std::to_string(stack.service.store().object_count("output")));
    }
    e2e.require(took <= 5000.0, "took " + std::to_string(took) + " ms");
    if (e2e.ok) e2e.detail = "20 results in " + std::to_string(static_cast<int>(took)) + " ms";

    if (!done) {
        scale_in.require(false, "criterion 5 job did not complete");
        return {e2e, scale_in};
    }
    while (stack.service.fabric().count_active() > 0 && elapsed_ms(completed_at) < 1500.0) {
        std::this_thread::sleep_for(2ms);
    }
    double drain = elapsed_ms(completed_at);
    int active = stack.service.fabric().count_active();
    scale_in.require(active == 0, "active still " + std::to_string(active));
    scale_in.require(drain <= 1000.0, "reached 0 after " + std::to_string(drain) + " ms");
    if (scale_in.ok) scale_in.detail = "active 0 after " + std::to_string(static_cast<int>(drain)) + " ms";
    return {e2e, scale_in};
}

Verdict redelivery() {
    Verdict v;
    Scenario clean = calibrated(20);
    Scenario noisy = clean;
    noisy.worker_config.visibility_timeout = 30'000_ms;  // below the 64 310 ms service time
    MetricsReport a = run_scenario(clean);
    MetricsReport b = run_scenario(noisy);
    v.require(b.messages_redelivered > 0, "no redelivery happened");
    v.require(a.results && b.results && *a.results == *b.results, "results differ");
    v.require(b.output_objects == 20, "output objects " + std::to_string(b.output_objects));
    v.require(a.output_objects == 20, "baseline output objects " + std::to_string(a.output_objects));
    if (v.ok) v.detail = std::to_string(b.messages_redelivered) + " redeliveries, results identical";
    return v;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Verdict determinism() {
    Verdict v;
    std::filesystem::path scenario = ELASTIC_SCENARIO_FILE;
    auto tmp = std::filesystem::temp_directory_path() / ("elastic-accept-" + std::to_string(::getpid()));
    std::filesystem::create_directories(tmp);
    std::string outs[2];
    for (int i = 0; i < 2; ++i) {
        auto out = tmp / ("report" + std::to_string(i) + ".json");
        std::string cmd = std::string("\"") + ELASTIC_CLI_PATH + "\" simulate --scenario \"" + scenario.string() +
                          "\" --out \"" + out.string() + "\"";
        int rc = std::system(cmd.c_str());
        v.require(rc == 0, "simulate exited with " + std::to_string(rc));
        outs[i] = slurp(out);
    }
    std::filesystem::remove_all(tmp);
    v.require(!outs[0].empty(), "empty report");
    v.require(outs[0] == outs[1], "reports differ");
    if (v.ok) v.detail = std::to_string(outs[0].size()) + " identical bytes";
    return v;
}

}  // namespace

int main() {
    int failures = 0;
    auto report = [&](int n, const std::string& name, const std::function<Verdict()>& fn) {
        Verdict v;
        try {
            v = fn();
        } catch (const std::exception& e) {
            v.ok = false;
            v.detail = std::string("exception: ") + e.what();
        }
        if (!v.ok) ++failures;
        std::cout << (v.ok ? "PASS" : "FAIL") << " criterion " << n << " " << name << ": " << v.detail << std::endl;
    };

    report(1, "scaling-rule table", scaling_table);
    report(2, "boot-time reproduction", boot_time);
    report(3, "calibrated response time", response_time);
    report(4, "queue conformance", queue_conformance);

    std::pair<Verdict, Verdict> live;
    try {
        live = live_mode();
    } catch (const std::exception& e) {
        live.first = {false, std::string("exception: ") + e.what()};
        live.second = live.first;
    }
    report(5, "live end-to-end", [&] { return live.first; });
    report(6, "idempotence under redelivery", redelivery);
    report(7, "scale-in convergence", [&] { return live.second; });
    report(8, "simulate determinism", determinism);

    std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
    return failures == 0 ? 0 : 1;
}
