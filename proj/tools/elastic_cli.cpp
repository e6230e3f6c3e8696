// elastic: operator CLI for the elastic classification pipeline.
//
//   elastic serve --config cfg.json [--port 8080]
//   elastic submit a.jpg b.jpg --endpoint http://127.0.0.1:8080 [--wait]
//   elastic status <job_id>
//   elastic simulate --scenario s.json [--out report.json] [--csv]
//   elastic metrics

#include <csignal>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include "elastic/config.hpp"
#include "elastic/http_api.hpp"
#include "elastic/service.hpp"
#include "elastic/simharness.hpp"

namespace {

using nlohmann::json;

elastic::HttpApi* g_api = nullptr;

void handle_signal(int) {
    if (g_api) g_api->stop();
}

int print_http_failure(const httplib::Result& res) {
    if (!res) {
        std::cerr << "request failed: " << httplib::to_string(res.error()) << "\n";
        return 2;
    }
    std::cerr << "HTTP " << res->status << ": " << res->body << "\n";
    return 1;
}

void print_results(const json& status) {
    for (const auto& r : status["results"]) {
        std::cout << r["image"].get<std::string>() << ", " << r["label"].get<std::string>() << "\n";
    }
}

int cmd_serve(const std::string& config_path, const std::string& host, int port, const std::string& data_dir,
              const std::string& decision_log) {
    elastic::ServiceConfig cfg = config_path.empty() ? elastic::ServiceConfig{} : elastic::ServiceConfig::load(config_path);
    elastic::ServiceOptions opts;
    if (!data_dir.empty()) opts.data_dir = data_dir;
    std::shared_ptr<std::ofstream> log;
    if (!decision_log.empty()) {
        log = std::make_shared<std::ofstream>(decision_log, std::ios::app);
        opts.decision_sink = [log](const elastic::ScalingDecision& d) {
            if (!d.is_noop()) *log << d.to_json_line() << "\n" << std::flush;
        };
    }
    opts.warning_sink = [](const std::string& msg) { std::cerr << "warn: " << msg << "\n"; };

    elastic::Service service(cfg, opts);
    elastic::HttpApi api(service);
    service.start();
    g_api = &api;
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    std::cerr << "serving on " << host << ":" << port << "\n";
    bool ok = api.listen(host, port);
    g_api = nullptr;
    service.stop();
    return ok ? 0 : 1;
}

int cmd_submit(const std::vector<std::string>& files, const std::string& endpoint, bool wait, int timeout_ms) {
    httplib::MultipartFormDataItems items;
    for (const auto& f : files) {
        std::ifstream in(f, std::ios::binary);
        if (!in) {
            std::cerr << "cannot read " << f << "\n";
            return 2;
        }
        std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        items.push_back({"file", content, std::filesystem::path(f).filename().string(), "application/octet-stream"});
    }
    httplib::Client cli(endpoint);
    auto res = cli.Post("/jobs", items);
    if (!res || res->status != 201) return print_http_failure(res);
    std::string job_id = json::parse(res->body)["job_id"].get<std::string>();
    std::cout << job_id << "\n";
    if (!wait) return 0;

    auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
    while (std::chrono::steady_clock::now() < deadline) {
        auto st = cli.Get("/jobs/" + job_id);
        if (!st || st->status != 200) return print_http_failure(st);
        json j = json::parse(st->body);
        if (j["state"] == "completed") {
            print_results(j);
            return 0;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
    std::cerr << "timed out waiting for " << job_id << "\n";
    return 3;
}

int cmd_status(const std::string& job_id, const std::string& endpoint, bool as_json) {
    httplib::Client cli(endpoint);
    auto res = cli.Get("/jobs/" + job_id);
    if (!res || res->status != 200) return print_http_failure(res);
    json j = json::parse(res->body);
    if (as_json) {
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "state: " << j["state"].get<std::string>();
    if (!j["response_time_ms"].is_null()) std::cout << " (" << j["response_time_ms"].get<long long>() << " ms)";
    std::cout << "\n";
    print_results(j);
    return 0;
}

int cmd_metrics(const std::string& endpoint) {
    httplib::Client cli(endpoint);
    auto res = cli.Get("/metrics");
    if (!res || res->status != 200) return print_http_failure(res);
    std::cout << nlohmann::ordered_json::parse(res->body).dump(2) << "\n";
    return 0;
}

// Accepts "N" or "A:B" (inclusive).
std::pair<int, int> parse_range(const std::string& s) {
    auto colon = s.find(':');
    if (colon == std::string::npos) return {std::stoi(s), std::stoi(s)};
    return {std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
}

int cmd_simulate(const std::vector<std::string>& scenarios, const std::string& out_path, bool csv,
                 const std::string& n_range) {
    std::ostringstream out;
    if (csv) out << elastic::MetricsReport::csv_header() << "\n";
    std::vector<std::string> reports;
    for (const auto& path : scenarios) {
        elastic::Scenario base = elastic::Scenario::load(path);
        auto [lo, hi] = n_range.empty() ? std::pair{base.n_images, base.n_images} : parse_range(n_range);
        for (int n = lo; n <= hi; ++n) {
            elastic::Scenario s = base;
            s.n_images = n;
            elastic::MetricsReport r = elastic::run_scenario(s);
            if (csv) {
                out << r.csv_row(n) << "\n";
            } else {
                reports.push_back(r.to_json());
            }
        }
    }
    if (!csv) {
        if (reports.size() == 1) {
            out << reports.front() << "\n";
        } else {
            out << "[\n";
            for (std::size_t i = 0; i < reports.size(); ++i) out << reports[i] << (i + 1 < reports.size() ? ",\n" : "\n");
            out << "]\n";
        }
    }
    if (out_path.empty()) {
        std::cout << out.str();
    } else {
        std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
        f << out.str();
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Elastic image-classification pipeline"};
    app.require_subcommand(1);

    std::string endpoint = "http://127.0.0.1:8080";

    auto* serve = app.add_subcommand("serve", "Run the service (REST API, controller, workers)");
    std::string config_path, host = "127.0.0.1", data_dir, decision_log;
    int port = 8080;
    serve->add_option("--config", config_path, "Service config JSON")->check(CLI::ExistingFile);
    serve->add_option("--host", host, "Bind address");
    serve->add_option("--port", port, "Bind port");
    serve->add_option("--data-dir", data_dir, "Persist buckets under this directory");
    serve->add_option("--decision-log", decision_log, "Append scaling decisions as JSON lines");

    auto* submit = app.add_subcommand("submit", "Upload images as one job");
    std::vector<std::string> files;
    bool wait = false;
    int timeout_ms = 600000;
    submit->add_option("files", files, "Image files")->required()->check(CLI::ExistingFile);
    submit->add_option("--endpoint", endpoint, "Service URL");
    submit->add_flag("--wait", wait, "Poll until the job completes and print results");
    submit->add_option("--timeout-ms", timeout_ms, "Give up waiting after this long");

    auto* status = app.add_subcommand("status", "Show a job's state and results");
    std::string job_id;
    bool as_json = false;
    status->add_option("job_id", job_id, "Job id")->required();
    status->add_option("--endpoint", endpoint, "Service URL");
    status->add_flag("--json", as_json, "Print the raw JSON body");

    auto* simulate = app.add_subcommand("simulate", "Run scenarios on the discrete-event simulator");
    std::vector<std::string> scenarios;
    std::string out_path, n_range;
    bool csv = false;
    simulate->add_option("--scenario", scenarios, "Scenario JSON (repeatable)")->required()->check(CLI::ExistingFile);
    simulate->add_option("--out", out_path, "Write the report here instead of stdout");
    simulate->add_flag("--csv", csv, "One CSV row per run");
    simulate->add_option("--n-images", n_range, "Override n_images; N or A:B sweeps");

    auto* metrics = app.add_subcommand("metrics", "Fetch the live metrics report");
    metrics->add_option("--endpoint", endpoint, "Service URL");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*serve) return cmd_serve(config_path, host, port, data_dir, decision_log);
        if (*submit) return cmd_submit(files, endpoint, wait, timeout_ms);
        if (*status) return cmd_status(job_id, endpoint, as_json);
        if (*simulate) return cmd_simulate(scenarios, out_path, csv, n_range);
        if (*metrics) return cmd_metrics(endpoint);
    } catch (const elastic::Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return 0;
}
