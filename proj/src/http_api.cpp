#include "elastic/http_api.hpp"

#include <httplib.h>
#include <json.hpp>

namespace elastic {

using nlohmann::ordered_json;

namespace {

void send_error(httplib::Response& res, const Error& e) {
    res.status = http_status_for(e.code());
    ordered_json j;
    j["error"] = std::string(to_string(e.code()));
    j["message"] = e.what();
    res.set_content(j.dump(), "application/json");
}

}  // namespace

int http_status_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::EmptyBatch:
        case ErrorCode::DuplicateName:
        case ErrorCode::EmptyKey: return 400;
        case ErrorCode::BatchTooLarge: return 413;
        case ErrorCode::UnknownJob: return 404;
        default: return 500;
    }
}

std::string job_status_json(const JobStatus& st) {
    ordered_json j;
    j["state"] = std::string(to_string(st.state));
    ordered_json results = ordered_json::array();
    for (const auto& r : st.results) results.push_back({{"image", r.image_name}, {"label", r.label}});
    j["results"] = results;
    j["response_time_ms"] = st.response_time ? ordered_json(st.response_time->ms()) : ordered_json(nullptr);
    return j.dump();
}

HttpApi::HttpApi(Service& service) : service_(&service), server_(std::make_unique<httplib::Server>()) {
    server_->Post("/jobs", [this](const httplib::Request& req, httplib::Response& res) {
        std::vector<ImageUpload> images;
        for (const auto& part : req.get_file_values("file")) {
            images.push_back({part.filename, Bytes(part.content.begin(), part.content.end())});
        }
        try {
            std::string id = service_->gateway().submit_job(images);
            res.status = 201;
            res.set_content(ordered_json{{"job_id", id}}.dump(), "application/json");
        } catch (const Error& e) {
            send_error(res, e);
        }
    });

    server_->Get(R"(/jobs/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
        try {
            res.set_content(job_status_json(service_->job_status(req.matches[1].str())), "application/json");
        } catch (const Error& e) {
            send_error(res, e);
        }
    });

    server_->Get("/metrics", [this](const httplib::Request&, httplib::Response& res) {
        res.set_content(service_->metrics().to_json(-1), "application/json");
    });
}

HttpApi::~HttpApi() { stop(); }

int HttpApi::listen_in_background(const std::string& host, int port) {
    int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
    if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return bound;
}

bool HttpApi::listen(const std::string& host, int port) { return server_->listen(host, port); }

void HttpApi::stop() {
    if (server_->is_running()) server_->stop();
    if (thread_.joinable()) thread_.join();
}

}  // namespace elastic
