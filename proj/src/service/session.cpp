#include "regfind/service/session.hpp"

#include <chrono>
#include <ctime>

namespace regfind::service {
namespace {

std::string now_iso() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[96];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1,
                  tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms));
    return buf;
}

const Json& member(const Json& j, const char* name) {
    if (!j.is_object() || !j.contains(name)) throw MalformedInputError(std::string("missing field '") + name + "'");
    return j.at(name);
}

template <class T>
T as(const Json& j, const char* name) {
    try {
        return member(j, name).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw MalformedInputError(std::string("field '") + name + "' has the wrong type");
    }
}

EventKind event_kind(const std::string& s) {
    for (auto k : {EventKind::allocate, EventKind::toxicity, EventKind::efficacy, EventKind::draw,
                   EventKind::terminate})
        if (to_string(k) == s) return k;
    throw MalformedInputError("unknown event kind '" + s + "'");
}

engine::TerminationReason reason_of(const std::string& s) {
    if (s == "safety") return engine::TerminationReason::safety;
    if (s == "futility") return engine::TerminationReason::futility;
    throw MalformedInputError("unknown termination reason '" + s + "'");
}

std::vector<engine::PatientEfficacy> efficacy_list(const Json& arr) {
    if (!arr.is_array()) throw MalformedInputError("efficacy outcomes must be an array");
    std::vector<engine::PatientEfficacy> out;
    for (const auto& o : arr) out.push_back({as<int>(o, "patient") - 1, as<bool>(o, "efficacy")});
    return out;
}

Json efficacy_json(const std::vector<engine::PatientEfficacy>& list) {
    Json arr = Json::array();
    for (const auto& o : list) arr.push_back({{"patient", o.patient + 1}, {"efficacy", o.efficacy}});
    return arr;
}

bool selectable(const engine::TrialState& s) {
    return !s.terminated() && !s.exhausted() && (s.cohorts().empty() || s.cohorts().back().toxicity_recorded());
}

}  // namespace

std::string to_string(EventKind kind) {
    switch (kind) {
        case EventKind::allocate: return "allocate";
        case EventKind::toxicity: return "toxicity";
        case EventKind::efficacy: return "efficacy";
        case EventKind::draw: return "draw";
        case EventKind::terminate: return "terminate";
    }
    return "";
}

std::string to_string(RecommendationStatus status) {
    switch (status) {
        case RecommendationStatus::allocate: return "allocate";
        case RecommendationStatus::awaiting_toxicity: return "awaiting_toxicity";
        case RecommendationStatus::awaiting_efficacy: return "awaiting_efficacy";
        case RecommendationStatus::complete: return "complete";
        case RecommendationStatus::terminated: return "terminated";
    }
    return "";
}

Json to_json(const AuditEvent& e) {
    Json j = {{"kind", to_string(e.kind)}, {"revision", e.revision}, {"timestamp", e.timestamp}};
    if (e.cohort >= 0) j["cohort"] = e.cohort + 1;
    switch (e.kind) {
        case EventKind::allocate: j["regimen"] = e.regimen + 1; break;
        case EventKind::toxicity: j["outcomes"] = e.toxicity; break;
        case EventKind::efficacy: j["outcomes"] = efficacy_json(e.efficacy); break;
        case EventKind::draw: j["draw"] = *e.draw; break;
        case EventKind::terminate: j["reason"] = engine::to_string(*e.reason); break;
    }
    return j;
}

AuditEvent event_from_json(const Json& j) {
    AuditEvent e;
    e.kind = event_kind(as<std::string>(j, "kind"));
    e.revision = as<int>(j, "revision");
    e.timestamp = as<std::string>(j, "timestamp");
    if (j.contains("cohort")) e.cohort = as<int>(j, "cohort") - 1;
    switch (e.kind) {
        case EventKind::allocate: e.regimen = as<int>(j, "regimen") - 1; break;
        case EventKind::toxicity: e.toxicity = as<std::vector<bool>>(j, "outcomes"); break;
        case EventKind::efficacy: e.efficacy = efficacy_list(member(j, "outcomes")); break;
        case EventKind::draw: e.draw = as<double>(j, "draw"); break;
        case EventKind::terminate: e.reason = reason_of(as<std::string>(j, "reason")); break;
    }
    return e;
}

OutcomePost outcome_post_from_json(const Json& j) {
    OutcomePost p;
    p.cohort = as<int>(j, "cohort") - 1;
    if (p.cohort < 0) throw MalformedInputError("cohort numbers start at 1");
    const auto endpoint = as<std::string>(j, "endpoint");
    if (endpoint == "toxicity") {
        p.endpoint = Endpoint::toxicity;
        p.toxicity = as<std::vector<bool>>(j, "outcomes");
    } else if (endpoint == "efficacy") {
        p.endpoint = Endpoint::efficacy;
        p.efficacy = efficacy_list(member(j, "outcomes"));
    } else {
        throw MalformedInputError("endpoint must be 'toxicity' or 'efficacy'");
    }
    if (j.contains("regimen") && !j.at("regimen").is_null()) p.regimen = as<int>(j, "regimen") - 1;
    return p;
}

Json to_json(const Recommendation& rec) {
    return {
        {"status", to_string(rec.status)},
        {"regimen", rec.regimen ? Json(*rec.regimen + 1) : Json(nullptr)},
        {"termination", rec.termination ? Json(engine::to_string(*rec.termination)) : Json(nullptr)},
        {"trace", rec.trace ? to_json(*rec.trace) : Json(nullptr)},
    };
}

TrialSession::TrialSession(std::string id, engine::TrialConfig config)
    : id_(std::move(id)), state_(std::move(config)) {}

double TrialSession::draw_for_next_cohort() const {
    if (pending_draw_) return *pending_draw_;
    // One independent stream per cohort keeps the draw reproducible from the
    // seed alone.
    Rng rng(stream_seed(config().rng_seed, state_.cohorts().size()));
    return uniform01(rng);
}

engine::DecisionTrace TrialSession::decide(double draw) const {
    return config().rule == engine::AllocationRule::we ? engine::select_next_cohort(state_)
                                                       : engine::select_next_cohort_with_draw(state_, draw);
}

void TrialSession::append(AuditEvent event) {
    event.revision = revision_;
    if (event.timestamp.empty()) event.timestamp = now_iso();
    switch (event.kind) {
        case EventKind::draw:
            if (!event.draw || *event.draw < 0.0 || *event.draw >= 1.0)
                throw IntegrityError("draw outside [0, 1)");
            pending_draw_ = event.draw;
            break;
        case EventKind::allocate: {
            auto trace = decide(draw_for_next_cohort());
            if (trace.termination || trace.chosen != event.regimen)
                throw IntegrityError("logged allocation of cohort " + std::to_string(event.cohort + 1) +
                                     " disagrees with the design");
            const int cohort = state_.allocate_cohort(event.regimen);
            if (cohort != event.cohort) throw IntegrityError("allocation log out of order");
            traces_.push_back(std::move(trace));
            pending_draw_.reset();
            break;
        }
        case EventKind::toxicity: state_.record_cohort_toxicity(event.cohort, event.toxicity); break;
        case EventKind::efficacy: state_.record_efficacy(event.cohort, event.efficacy); break;
        case EventKind::terminate: {
            auto trace = engine::select_next_cohort(state_);
            if (trace.termination != event.reason) throw IntegrityError("logged termination disagrees with the design");
            state_.terminate(*event.reason);
            traces_.push_back(std::move(trace));
            break;
        }
    }
    audit_.push_back(std::move(event));
}

void TrialSession::stop_if_due() {
    if (!selectable(state_)) return;
    const auto trace = engine::select_next_cohort(state_);
    if (!trace.termination) return;
    AuditEvent e;
    e.kind = EventKind::terminate;
    e.reason = trace.termination;
    append(std::move(e));
}

void TrialSession::apply(const OutcomePost& p) {
    const int allocated = static_cast<int>(state_.cohorts().size());
    if (p.endpoint == Endpoint::efficacy) {
        if (p.efficacy.empty()) throw MalformedInputError("no efficacy outcomes given");
        AuditEvent e;
        e.kind = EventKind::efficacy;
        e.cohort = p.cohort;
        e.efficacy = p.efficacy;
        append(std::move(e));
        return;
    }
    if (p.cohort > allocated)
        throw InvalidStateError("cohort " + std::to_string(p.cohort + 1) + " is not next in line");
    if (p.cohort == allocated) {
        const auto rec = recommendation();
        if (rec.status != RecommendationStatus::allocate)
            throw InvalidStateError("no cohort can be allocated now (" + to_string(rec.status) + ")");
        if (p.regimen && p.regimen != rec.regimen)
            throw InvalidStateError("the design recommends regimen " + std::to_string(*rec.regimen + 1));
        AuditEvent e;
        e.kind = EventKind::allocate;
        e.cohort = p.cohort;
        e.regimen = *rec.regimen;
        append(std::move(e));
    } else if (p.regimen && *p.regimen != state_.cohorts()[static_cast<std::size_t>(p.cohort)].regimen) {
        throw InvalidStateError("cohort " + std::to_string(p.cohort + 1) + " was allocated to another regimen");
    }
    AuditEvent e;
    e.kind = EventKind::toxicity;
    e.cohort = p.cohort;
    e.toxicity = p.toxicity;
    append(std::move(e));
}

Recommendation TrialSession::peek() const {
    Recommendation rec;
    if (state_.terminated()) {
        rec.status = RecommendationStatus::terminated;
        rec.termination = state_.termination();
        if (!traces_.empty()) rec.trace = traces_.back();
        return rec;
    }
    if (!state_.cohorts().empty() && !state_.cohorts().back().toxicity_recorded()) {
        rec.status = RecommendationStatus::awaiting_toxicity;
        rec.regimen = state_.cohorts().back().regimen;
        return rec;
    }
    if (state_.exhausted()) {
        if (state_.pending_efficacy() > 0) {
            rec.status = RecommendationStatus::awaiting_efficacy;
            return rec;
        }
        rec.status = RecommendationStatus::complete;
        rec.regimen = engine::final_recommendation(state_);
        return rec;
    }
    rec.trace = decide(draw_for_next_cohort());
    if (rec.trace->termination) {
        rec.status = RecommendationStatus::terminated;
        rec.termination = rec.trace->termination;
    } else {
        rec.regimen = rec.trace->chosen;
    }
    return rec;
}

Recommendation TrialSession::recommendation() {
    if (config().rule == engine::AllocationRule::we_randomized && selectable(state_) && !pending_draw_) {
        AuditEvent e;
        e.kind = EventKind::draw;
        e.cohort = static_cast<int>(state_.cohorts().size());
        e.draw = draw_for_next_cohort();
        append(std::move(e));
    }
    return peek();
}

Recommendation TrialSession::post(int expected_revision, const OutcomePost& outcomes) {
    if (expected_revision != revision_) throw RevisionConflictError(expected_revision, revision_);
    TrialSession next = *this;
    ++next.revision_;
    next.apply(outcomes);
    next.stop_if_due();
    *this = std::move(next);
    return peek();
}

Recommendation TrialSession::whatif(const std::vector<OutcomePost>& hypothesis) const {
    TrialSession copy = *this;
    for (const auto& p : hypothesis) {
        ++copy.revision_;
        copy.apply(p);
        copy.stop_if_due();
    }
    return copy.peek();
}

TrialSession TrialSession::replay(std::string id, engine::TrialConfig config, const std::vector<AuditEvent>& audit) {
    TrialSession session(std::move(id), std::move(config));
    for (const auto& e : audit) {
        if (e.revision < session.revision_) throw IntegrityError("audit revisions decrease");
        session.revision_ = e.revision;
        try {
            session.append(e);
        } catch (const IntegrityError&) {
            throw;
        } catch (const Error& err) {
            throw IntegrityError(std::string("audit event does not apply: ") + err.what());
        }
    }
    return session;
}

Json TrialSession::to_json() const {
    Json audit = Json::array();
    for (const auto& e : audit_) audit.push_back(service::to_json(e));
    return {
        {"id", id_},
        {"revision", revision_},
        {"config", service::to_json(config())},
        {"audit", audit},
        {"snapshot", service::to_json(state_)},
    };
}

TrialSession TrialSession::from_json(const Json& j) {
    std::vector<AuditEvent> audit;
    for (const auto& e : member(j, "audit")) audit.push_back(event_from_json(e));
    auto session = replay(as<std::string>(j, "id"), config_from_json(member(j, "config")), audit);
    if (session.revision_ != as<int>(j, "revision")) throw IntegrityError("stored revision does not match the audit log");
    if (service::to_json(session.state_) != member(j, "snapshot"))
        throw IntegrityError("stored snapshot does not match the replayed audit log");
    return session;
}

}  // namespace regfind::service
