#pragma once

#include <optional>
#include <string>
#include <vector>

#include "regfind/core/error.hpp"
#include "regfind/engine/decision.hpp"
#include "regfind/service/json_io.hpp"

namespace regfind::service {

class NotFoundError : public Error {
public:
    using Error::Error;
};

class RevisionConflictError : public Error {
public:
    RevisionConflictError(int expected, int actual)
        : Error("expected revision " + std::to_string(expected) + " but the session is at " + std::to_string(actual)),
          expected_(expected), actual_(actual) {}

    int expected() const noexcept { return expected_; }
    int actual() const noexcept { return actual_; }

private:
    int expected_;
    int actual_;
};

// A stored session whose audit log does not reproduce its snapshot.
class IntegrityError : public Error {
public:
    using Error::Error;
};

enum class EventKind { allocate, toxicity, efficacy, draw, terminate };

std::string to_string(EventKind kind);

struct AuditEvent {
    EventKind kind = EventKind::allocate;
    int revision = 0;       // session revision the event belongs to
    std::string timestamp;  // UTC, ISO 8601
    int cohort = -1;
    int regimen = -1;
    std::vector<bool> toxicity;
    std::vector<engine::PatientEfficacy> efficacy;
    std::optional<double> draw;
    std::optional<engine::TerminationReason> reason;
};

Json to_json(const AuditEvent& event);
AuditEvent event_from_json(const Json& j);

enum class Endpoint { toxicity, efficacy };

// One batch of outcomes for a cohort (0-based). A toxicity batch for the
// next, not yet allocated cohort allocates it at the current recommendation;
// `regimen`, when given, must match that recommendation.
struct OutcomePost {
    int cohort = 0;
    Endpoint endpoint = Endpoint::toxicity;
    std::vector<bool> toxicity;
    std::vector<engine::PatientEfficacy> efficacy;
    std::optional<int> regimen;
};

OutcomePost outcome_post_from_json(const Json& j);

enum class RecommendationStatus { allocate, awaiting_toxicity, awaiting_efficacy, complete, terminated };

std::string to_string(RecommendationStatus status);

struct Recommendation {
    RecommendationStatus status = RecommendationStatus::allocate;
    std::optional<int> regimen;  // next cohort, or the final pick once complete
    std::optional<engine::TerminationReason> termination;
    std::optional<engine::DecisionTrace> trace;
};

Json to_json(const Recommendation& rec);

// A live trial: configuration plus an append-only audit log. The state is
// always the replay of the log. Writes carry the revision they expect and
// bump it; randomisation draws are logged when first needed without a bump.
class TrialSession {
public:
    TrialSession(std::string id, engine::TrialConfig config);

    // Rebuilds a session from its log; throws IntegrityError if an event does
    // not apply or a logged allocation disagrees with the design.
    static TrialSession replay(std::string id, engine::TrialConfig config, const std::vector<AuditEvent>& audit);

    const std::string& id() const noexcept { return id_; }
    const engine::TrialConfig& config() const noexcept { return state_.config(); }
    const engine::TrialState& state() const noexcept { return state_; }
    int revision() const noexcept { return revision_; }
    const std::vector<AuditEvent>& audit() const noexcept { return audit_; }
    // Decision trace behind each allocation and the termination, in order.
    const std::vector<engine::DecisionTrace>& traces() const noexcept { return traces_; }

    // Current recommendation. For the randomised rule the draw of the next
    // cohort is made and logged on the first call.
    Recommendation recommendation();

    // Same without logging anything.
    Recommendation peek() const;

    // Applies a batch; all-or-nothing. Returns the recommendation that follows.
    Recommendation post(int expected_revision, const OutcomePost& outcomes);

    // Recommendation after hypothetical batches, leaving this session as is.
    Recommendation whatif(const std::vector<OutcomePost>& hypothesis) const;

    Json to_json() const;
    static TrialSession from_json(const Json& j);

private:
    double draw_for_next_cohort() const;
    engine::DecisionTrace decide(double draw) const;
    void append(AuditEvent event);
    void apply(const OutcomePost& outcomes);
    void stop_if_due();

    std::string id_;
    engine::TrialState state_;
    int revision_ = 0;
    std::vector<AuditEvent> audit_;
    std::vector<engine::DecisionTrace> traces_;
    std::optional<double> pending_draw_;
};

}  // namespace regfind::service
