#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "elastic/autoscaler.hpp"
#include "elastic/blobstore.hpp"
#include "elastic/clock.hpp"
#include "elastic/fabric.hpp"
#include "elastic/simharness.hpp"
#include "elastic/worker.hpp"
#include "elastic/workqueue.hpp"

namespace py = pybind11;
using namespace elastic;

namespace {

std::span<const std::uint8_t> as_span(const py::bytes& b) {
    std::string_view sv = b;
    return {reinterpret_cast<const std::uint8_t*>(sv.data()), sv.size()};
}

py::bytes as_pybytes(const Bytes& b) { return py::bytes(reinterpret_cast<const char*>(b.data()), b.size()); }

py::dict decision_dict(const ScalingDecision& d) {
    py::dict out;
    out["t"] = d.decided_at.ms();
    out["depth"] = d.observed_depth;
    out["active"] = d.observed_active;
    if (const auto* l = std::get_if<LaunchN>(&d.action)) {
        out["action"] = "launch";
        out["n"] = l->n;
    } else if (const auto* t = std::get_if<TerminateIds>(&d.action)) {
        out["action"] = "terminate";
        out["ids"] = t->ids;
    } else {
        out["action"] = "noop";
    }
    return out;
}

std::vector<std::int64_t> to_ms(const std::vector<Duration>& ds) {
    std::vector<std::int64_t> out;
    for (auto d : ds) out.push_back(d.ms());
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Queue-driven elastic image-classification pipeline";

    // Raised for every library error; `.code` carries the error code name.
    PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> exc_type;
    exc_type.call_once_and_store_result(
        [&] { return py::object(py::exception<Error>(m, "ElasticError", PyExc_RuntimeError)); });
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            const py::object& type = exc_type.get_stored();
            py::object err = type(e.what());
            err.attr("code") = std::string(to_string(e.code()));
            PyErr_SetObject(type.ptr(), err.ptr());
        }
    });

    py::class_<Clock>(m, "Clock")
        .def_static("simulated", [](std::int64_t start_ms) { return Clock::simulated(Timestamp(start_ms)); },
                    py::arg("start_ms") = 0)
        .def_static("real", &Clock::real)
        .def_property_readonly("is_simulated", &Clock::is_simulated)
        .def("now_ms", [](const Clock& c) { return c.now().ms(); })
        .def("add_timer", [](Clock& c, std::int64_t deadline_ms) { return c.add_timer(Timestamp(deadline_ms)); })
        .def("cancel_timer", &Clock::cancel_timer)
        .def("advance", [](Clock& c, std::int64_t ms) { return c.advance(Duration::checked(ms)); })
        .def("advance_to", [](Clock& c, std::int64_t t) { return c.advance_to(Timestamp(t)); });

    py::class_<BlobStore>(m, "BlobStore")
        .def(py::init([](const Clock& c) { return BlobStore::bootstrap(c); }), py::keep_alive<1, 2>())
        .def("create_bucket", &BlobStore::create_bucket)
        .def("put", [](BlobStore& s, const std::string& b, const std::string& k, const py::bytes& data) {
            auto sp = as_span(data);
            s.put(b, k, Bytes(sp.begin(), sp.end()));
        })
        .def("get", [](const BlobStore& s, const std::string& b, const std::string& k) { return as_pybytes(s.get(b, k)); })
        .def("exists", &BlobStore::exists)
        .def("list", &BlobStore::list, py::arg("bucket"), py::arg("prefix") = "")
        .def("remove", &BlobStore::remove);

    py::class_<WorkQueue>(m, "WorkQueue")
        .def(py::init([](const Clock& c, std::int64_t vis_ms) { return WorkQueue::bootstrap(c, Duration::checked(vis_ms)); }),
             py::arg("clock"), py::arg("visibility_timeout_ms") = kDefaultVisibilityTimeout.ms(), py::keep_alive<1, 2>())
        .def("send", &WorkQueue::send)
        .def(
            "receive",
            [](WorkQueue& q, const std::string& name, int max, std::optional<std::int64_t> vis_ms) {
                std::optional<Duration> vis;
                if (vis_ms) vis = Duration::checked(*vis_ms);
                py::list out;
                for (const auto& msg : q.receive(name, max, vis)) {
                    py::dict d;
                    d["receipt_handle"] = msg.receipt_handle;
                    d["body"] = msg.body;
                    d["receive_count"] = msg.receive_count;
                    d["message_id"] = msg.message_id;
                    d["visibility_deadline_ms"] = msg.visibility_deadline.ms();
                    out.append(d);
                }
                return out;
            },
            py::arg("queue"), py::arg("max") = 1, py::arg("visibility_timeout_ms") = py::none())
        .def("remove", &WorkQueue::remove)
        .def("approximate_depth", &WorkQueue::approximate_depth)
        .def("in_flight", &WorkQueue::in_flight);

    py::class_<Fabric>(m, "Fabric")
        .def(py::init([](const Clock& c, std::int64_t pending, std::int64_t boot, std::int64_t jitter, std::uint64_t seed) {
                 return std::make_unique<Fabric>(
                     c, BootModel{Duration::checked(pending), Duration::checked(boot), Duration::checked(jitter), seed});
             }),
             py::arg("clock"), py::arg("pending_delay_ms") = 30'000, py::arg("boot_mean_ms") = 71'530,
             py::arg("boot_jitter_ms") = 0, py::arg("seed") = 0, py::keep_alive<1, 2>())
        .def("launch", py::overload_cast<int>(&Fabric::launch))
        .def("tick",
             [](Fabric& f, std::int64_t now_ms) {
                 std::vector<std::tuple<std::string, std::string, std::string>> out;
                 for (const auto& t : f.tick(Timestamp(now_ms))) {
                     out.emplace_back(t.instance_id, std::string(to_string(t.from)), std::string(to_string(t.to)));
                 }
                 return out;
             })
        .def("terminate", &Fabric::terminate)
        .def("count_active", &Fabric::count_active)
        .def("total_launched", &Fabric::total_launched)
        .def("state", [](const Fabric& f, const std::string& id) {
            auto inst = f.find(id);
            if (!inst) throw py::key_error(id);
            return std::string(to_string(inst->state));
        })
        .def("boot_time_samples_ms", [](const Fabric& f) { return to_ms(f.boot_time_samples()); });

    m.def("fnv1a64", [](const py::bytes& b, std::uint64_t seed) { return fnv1a64(as_span(b), seed); }, py::arg("data"),
          py::arg("seed") = 0);
    m.def(
        "classify",
        [](const py::bytes& b, std::uint64_t seed) { return StubClassifier(default_label_table(), seed).classify(as_span(b)); },
        py::arg("data"), py::arg("seed") = 0);
    m.def("default_label_table", &default_label_table);

    m.def(
        "desired_app_instances",
        [](int depth, int cap) {
            ScalingPolicy p;
            p.max_app_instances = cap;
            p.validate();
            return desired_app_instances(depth, p);
        },
        py::arg("depth"), py::arg("cap") = 17);
    m.def(
        "reconcile",
        [](int active, int desired, const std::vector<std::pair<std::string, std::int64_t>>& idle, std::int64_t now_ms,
           std::int64_t idle_timeout_ms) {
            ScalingPolicy p;
            p.idle_timeout = Duration::checked(idle_timeout_ms);
            std::vector<IdleCandidate> cands;
            for (const auto& [id, since] : idle) cands.push_back({id, Timestamp(since)});
            return decision_dict(reconcile(active, desired, cands, Timestamp(now_ms), p));
        },
        py::arg("active"), py::arg("desired"), py::arg("idle_candidates") = std::vector<std::pair<std::string, std::int64_t>>{},
        py::arg("now_ms") = 0, py::arg("idle_timeout_ms") = 60'000);

    m.def(
        "analytic_response_time",
        [](int n, int cap, std::int64_t boot_ms, std::int64_t service_ms) {
            return analytic_response_time(n, cap, Duration::checked(boot_ms), Duration::checked(service_ms)).ms();
        },
        py::arg("n"), py::arg("cap"), py::arg("boot_total_ms"), py::arg("service_ms"));
    m.def("mean_boot_time", [](const std::vector<std::int64_t>& samples) {
        std::vector<Duration> ds;
        for (auto s : samples) ds.push_back(Duration::checked(s));
        return mean_boot_time(ds).ms();
    });
    m.def(
        "run_scenario_json",
        [](const std::string& scenario_json, int indent) {
            Scenario s = Scenario::from_json(scenario_json);
            py::gil_scoped_release release;
            return run_scenario(s).to_json(indent);
        },
        py::arg("scenario_json"), py::arg("indent") = 2);
}
