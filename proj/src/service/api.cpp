#include "regfind/service/api.hpp"

#include <regex>

#include "httplib.h"

namespace regfind::service {
namespace {

ApiResponse ok(Json body, int status = 200) { return {status, std::move(body)}; }

ApiResponse error(int status, const std::string& code, const std::string& message, Json details = Json::object()) {
    return {status, {{"code", code}, {"message", message}, {"details", std::move(details)}}};
}

Json body_json(const std::string& body) {
    auto j = parse(body.empty() ? "{}" : body);
    if (!j.is_object()) throw MalformedInputError("request body must be a JSON object");
    return j;
}

}  // namespace

ApiResponse error_response(const std::exception& e) {
    if (auto* v = dynamic_cast<const ValidationError*>(&e)) return error(422, "validation", v->what(), {{"problems", v->problems()}});
    if (auto* c = dynamic_cast<const RevisionConflictError*>(&e))
        return error(409, "revision_conflict", c->what(), {{"expected", c->expected()}, {"actual", c->actual()}});
    if (dynamic_cast<const NotFoundError*>(&e)) return error(404, "not_found", e.what());
    if (dynamic_cast<const MalformedInputError*>(&e)) return error(400, "malformed", e.what());
    if (dynamic_cast<const DuplicateRecordError*>(&e)) return error(422, "duplicate_record", e.what());
    if (dynamic_cast<const UnknownPatientError*>(&e)) return error(422, "unknown_patient", e.what());
    if (dynamic_cast<const InvalidStateError*>(&e)) return error(422, "invalid_state", e.what());
    if (dynamic_cast<const DomainError*>(&e)) return error(422, "domain", e.what());
    if (dynamic_cast<const IntegrityError*>(&e)) return error(500, "integrity", e.what());
    return error(500, "internal", e.what());
}

Json session_view(const TrialSession& session, const Recommendation& rec) {
    return {
        {"id", session.id()},
        {"revision", session.revision()},
        {"config", to_json(session.config())},
        {"state", to_json(session.state())},
        {"recommendation", to_json(rec)},
    };
}

std::mutex& Api::lock_for(const std::string& id) {
    std::lock_guard guard(locks_guard_);
    auto& slot = locks_[id];
    if (!slot) slot = std::make_unique<std::mutex>();
    return *slot;
}

ApiResponse Api::create_trial(const std::string& body) {
    auto config = config_from_json(body_json(body));
    engine::validate(config);
    TrialSession session(store_.new_id(), std::move(config));
    std::lock_guard guard(lock_for(session.id()));
    store_.save(session);
    return ok(session_view(session, session.peek()), 201);
}

ApiResponse Api::get_trial(const std::string& id) {
    std::lock_guard guard(lock_for(id));
    const auto session = store_.load(id);
    return ok(session_view(session, session.peek()));
}

ApiResponse Api::get_recommendation(const std::string& id) {
    std::lock_guard guard(lock_for(id));
    auto session = store_.load(id);
    const auto before = session.audit().size();
    auto rec = session.recommendation();
    if (session.audit().size() != before) store_.save(session);
    auto out = to_json(rec);
    out["revision"] = session.revision();
    return ok(std::move(out));
}

ApiResponse Api::post_outcomes(const std::string& id, const std::string& body) {
    const auto j = body_json(body);
    if (!j.contains("expected_revision") || !j.at("expected_revision").is_number_integer())
        throw MalformedInputError("missing integer field 'expected_revision'");
    const auto batch = outcome_post_from_json(j);
    std::lock_guard guard(lock_for(id));
    auto session = store_.load(id);
    const auto rec = session.post(j.at("expected_revision").get<int>(), batch);
    store_.save(session);
    return ok(session_view(session, rec));
}

ApiResponse Api::whatif(const std::string& id, const std::string& body) {
    const auto j = body_json(body);
    std::vector<OutcomePost> hypothesis;
    if (j.contains("posts")) {
        if (!j.at("posts").is_array()) throw MalformedInputError("field 'posts' must be an array");
        for (const auto& p : j.at("posts")) hypothesis.push_back(outcome_post_from_json(p));
    } else if (!j.empty()) {
        hypothesis.push_back(outcome_post_from_json(j));
    }
    std::lock_guard guard(lock_for(id));
    const auto session = store_.load(id);
    auto out = to_json(session.whatif(hypothesis));
    out["revision"] = session.revision();
    return ok(std::move(out));
}

ApiResponse Api::handle(const std::string& method, const std::string& path, const std::string& body) {
    static const std::regex trial(R"(^/trials/([A-Za-z0-9_-]+)(/recommendation|/outcomes|/whatif)?/?$)");
    try {
        if (path == "/trials" || path == "/trials/") {
            if (method == "POST") return create_trial(body);
            return error(405, "method_not_allowed", method + " " + path);
        }
        std::smatch m;
        if (!std::regex_match(path, m, trial)) return error(404, "not_found", "no route " + path);
        const std::string id = m[1];
        const std::string sub = m[2];
        if (sub.empty() && method == "GET") return get_trial(id);
        if (sub == "/recommendation" && method == "GET") return get_recommendation(id);
        if (sub == "/outcomes" && method == "POST") return post_outcomes(id, body);
        if (sub == "/whatif" && method == "POST") return whatif(id, body);
        return error(405, "method_not_allowed", method + " " + path);
    } catch (const std::exception& e) {
        return error_response(e);
    }
}

void serve(Api& api, const std::string& host, int port) {
    httplib::Server server;
    auto route = [&api](const httplib::Request& req, httplib::Response& res) {
        const auto out = api.handle(req.method, req.path, req.body);
        res.status = out.status;
        res.set_content(out.body.dump(), "application/json");
    };
    server.Get(R"(/trials.*)", route);
    server.Post(R"(/trials.*)", route);
    if (!server.listen(host, port)) throw Error("cannot listen on " + host + ":" + std::to_string(port));
}

}  // namespace regfind::service
