#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "regfind/service/store.hpp"

namespace regfind::service {

struct ApiResponse {
    int status = 200;
    Json body;
};

// Error body {code, message, details} with the matching status:
// 400 malformed, 404 not_found, 409 revision_conflict, 422 validation and
// engine errors, 500 integrity.
ApiResponse error_response(const std::exception& e);

// Route handlers over a session store, independent of any transport.
//   POST /trials                        body: config
//   GET  /trials/{id}
//   GET  /trials/{id}/recommendation
//   POST /trials/{id}/outcomes          body: {expected_revision, cohort, endpoint, outcomes[, regimen]}
//   POST /trials/{id}/whatif            body: {} | outcome batch | {"posts": [batch, ...]}
// Writes to one session are serialised.
class Api {
public:
    explicit Api(SessionStore& store) : store_(store) {}

    ApiResponse handle(const std::string& method, const std::string& path, const std::string& body);

    ApiResponse create_trial(const std::string& body);
    ApiResponse get_trial(const std::string& id);
    ApiResponse get_recommendation(const std::string& id);
    ApiResponse post_outcomes(const std::string& id, const std::string& body);
    ApiResponse whatif(const std::string& id, const std::string& body);

private:
    std::mutex& lock_for(const std::string& id);

    SessionStore& store_;
    std::mutex locks_guard_;
    std::map<std::string, std::unique_ptr<std::mutex>> locks_;
};

// Session read model returned by GET /trials/{id} and the write routes.
Json session_view(const TrialSession& session, const Recommendation& rec);

// Blocks serving `api` over HTTP until the process is stopped.
void serve(Api& api, const std::string& host, int port);

}  // namespace regfind::service
