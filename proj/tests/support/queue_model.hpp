#pragma once

// Reference state machine for visibility-timeout queues, used to check
// WorkQueue under random operation sequences. Deliberately naive: a flat
// vector scanned in send order, no indexes shared with the implementation.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "elastic/clock.hpp"
#include "elastic/errors.hpp"
#include "elastic/workqueue.hpp"

namespace elastic::testing {

struct ModelRecord {
    std::string body;
    std::int64_t deadline = -1;  // -1: never received
    int receive_count = 0;
    int current_serial = -1;     // serial of the handle that may delete it
    bool deleted = false;
};

class QueueModel {
public:
    void send(std::string body) { records_.push_back({std::move(body)}); }

    struct Delivery {
        std::size_t record;
        int serial;
        int receive_count;
    };

    std::vector<Delivery> receive(std::int64_t now, int max, std::int64_t vis) {
        std::vector<Delivery> out;
        for (std::size_t i = 0; i < records_.size() && static_cast<int>(out.size()) < max; ++i) {
            auto& r = records_[i];
            if (r.deleted || r.deadline > now) continue;
            r.deadline = now + vis;
            ++r.receive_count;
            r.current_serial = next_serial_++;
            out.push_back({i, r.current_serial, r.receive_count});
        }
        return out;
    }

    /// True if the delete lands.
    bool remove(std::size_t record, int serial) {
        auto& r = records_[record];
        if (r.deleted || r.current_serial != serial) return false;
        r.deleted = true;
        return true;
    }

    std::size_t depth(std::int64_t now) const {
        std::size_t n = 0;
        for (const auto& r : records_) n += (!r.deleted && r.deadline <= now) ? 1 : 0;
        return n;
    }

    std::size_t in_flight(std::int64_t now) const {
        std::size_t n = 0;
        for (const auto& r : records_) n += (!r.deleted && r.deadline > now) ? 1 : 0;
        return n;
    }

    std::size_t deleted() const {
        std::size_t n = 0;
        for (const auto& r : records_) n += r.deleted ? 1 : 0;
        return n;
    }

    const std::vector<ModelRecord>& records() const { return records_; }

private:
    std::vector<ModelRecord> records_;
    int next_serial_ = 0;
};

struct ConformanceResult {
    bool ok = true;
    std::string failure;
    std::uint64_t operations = 0;
    std::uint64_t stale_checked = 0;
    std::uint64_t redeliveries = 0;
};

// Runs one random operation sequence against a fresh WorkQueue and the model
// in lock step, then drains both. Checks body/count agreement, stale-receipt
// rejection, visibility exclusivity, depth conservation, no phantom
// deliveries and at-least-once delivery.
inline ConformanceResult run_queue_conformance(std::uint64_t seed, int steps) {
    ConformanceResult res;
    auto fail = [&](const std::string& why) {
        if (res.ok) {
            res.ok = false;
            std::ostringstream os;
            os << "seed " << seed << ": " << why;
            res.failure = os.str();
        }
    };

    std::mt19937_64 rng(seed);
    auto pick = [&](int lo, int hi) { return static_cast<int>(lo + rng() % static_cast<std::uint64_t>(hi - lo + 1)); };

    Clock clock = Clock::simulated();
    WorkQueue q = WorkQueue::bootstrap(clock);
    const std::string name = "requests";
    QueueModel model;

    struct Handle {
        std::string impl;
        std::size_t record;
        int serial;
    };
    std::vector<Handle> handles;
    std::map<std::string, std::size_t> body_to_record;
    std::vector<int> delivered;
    std::vector<std::int64_t> impl_lease;
    std::uint64_t sent = 0;

    auto check_counts = [&] {
        std::int64_t now = clock.now().ms();
        std::size_t depth = q.approximate_depth(name);
        std::size_t inflight = q.in_flight(name);
        if (depth != model.depth(now)) fail("depth mismatch");
        if (inflight != model.in_flight(now)) fail("in-flight mismatch");
        QueueStats st = q.stats(name);
        if (depth + inflight + st.deleted != st.sent) fail("conservation: visible + in-flight + deleted != sent");
        if (st.deleted > st.sent) fail("more deletes than sends");
    };

    auto do_receive = [&](int max, std::int64_t vis) {
        std::int64_t now = clock.now().ms();
        std::vector<bool> deleted_before(model.records().size());
        for (std::size_t i = 0; i < model.records().size(); ++i) deleted_before[i] = model.records()[i].deleted;
        auto got = q.receive(name, max, Duration(vis));
        auto want = model.receive(now, max, vis);
        if (got.size() != want.size()) {
            fail("receive size mismatch");
            return;
        }
        for (std::size_t i = 0; i < got.size(); ++i) {
            auto it = body_to_record.find(got[i].body);
            if (it == body_to_record.end()) {
                fail("phantom message: " + got[i].body);
                return;
            }
            if (it->second != want[i].record) fail("delivery order mismatch");
            if (got[i].receive_count != want[i].receive_count) fail("receive_count mismatch");
            // Exclusivity, judged from the leases the implementation itself reported.
            if (impl_lease[it->second] > now) fail("message handed out while its lease was live");
            if (deleted_before[it->second]) fail("deleted message delivered again");
            impl_lease[it->second] = got[i].visibility_deadline.ms();
            if (got[i].receive_count > 1) ++res.redeliveries;
            ++delivered[it->second];
            handles.push_back({got[i].receipt_handle, want[i].record, want[i].serial});
        }
    };

    for (int step = 0; step < steps && res.ok; ++step) {
        int op = pick(0, 9);
        ++res.operations;
        if (op <= 2) {
            std::string body = "body-" + std::to_string(sent++);
            body_to_record[body] = model.records().size();
            delivered.push_back(0);
            impl_lease.push_back(-1);
            q.send(name, body);
            model.send(body);
        } else if (op <= 5) {
            do_receive(pick(1, 3), pick(1, 50));
        } else if (op <= 7) {
            if (handles.empty()) continue;
            const Handle& h = handles[static_cast<std::size_t>(pick(0, static_cast<int>(handles.size()) - 1))];
            bool model_ok = model.remove(h.record, h.serial);
            bool impl_ok = true;
            try {
                q.remove(name, h.impl);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::StaleReceipt) throw;
                impl_ok = false;
            }
            if (!model_ok) ++res.stale_checked;
            if (model_ok != impl_ok) fail(model_ok ? "valid receipt rejected" : "stale receipt accepted");
        } else if (op == 8) {
            clock.advance(Duration(pick(0, 40)));
        } else {
            bool impl_ok = true;
            try {
                q.remove(name, "unknown-" + std::to_string(rng()));
            } catch (const Error&) {
                impl_ok = false;
            }
            if (impl_ok) fail("random handle accepted");
            ++res.stale_checked;
        }
        check_counts();
    }

    // Drain: every undeleted message must still be receivable.
    for (int round = 0; round < 10000 && res.ok; ++round) {
        clock.advance(Duration(1000));
        auto before = handles.size();
        do_receive(10, 1000);
        if (handles.size() == before) break;
        for (std::size_t i = before; i < handles.size(); ++i) {
            model.remove(handles[i].record, handles[i].serial);
            q.remove(name, handles[i].impl);
        }
        check_counts();
    }
    if (q.live_messages(name) != 0) fail("queue not drained");
    for (std::size_t i = 0; i < delivered.size(); ++i) {
        if (delivered[i] == 0) fail("message never delivered: body-" + std::to_string(i));
    }
    return res;
}

}  // namespace elastic::testing
