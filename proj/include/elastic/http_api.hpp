#pragma once

#include <memory>
#include <string>
#include <thread>

#include "elastic/service.hpp"

namespace httplib {
class Server;
}

namespace elastic {

// REST front end over a Service:
//   POST /jobs       multipart, repeated "file" parts -> 201 {"job_id":...}
//   GET  /jobs/{id}  -> 200 {"state":..,"results":[..],"response_time_ms":N|null}
//   GET  /metrics    -> metrics report
class HttpApi {
public:
    explicit HttpApi(Service& service);
    ~HttpApi();

    HttpApi(const HttpApi&) = delete;
    HttpApi& operator=(const HttpApi&) = delete;

    /// Binds and serves on a background thread. Port 0 picks a free port.
    /// Returns the bound port; throws on bind failure.
    int listen_in_background(const std::string& host, int port);
    /// Serves on the calling thread until stop().
    bool listen(const std::string& host, int port);
    void stop();

private:
    Service* service_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
};

/// Body for GET /jobs/{id}.
std::string job_status_json(const JobStatus& st);

/// HTTP status for a library error code on the jobs endpoints.
int http_status_for(ErrorCode code);

}  // namespace elastic
