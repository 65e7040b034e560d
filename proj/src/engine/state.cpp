#include "regfind/engine/state.hpp"

#include <numeric>
#include <set>
#include <string>

#include "regfind/core/error.hpp"

namespace regfind::engine {

int CohortRecord::toxicities() const noexcept {
    return static_cast<int>(std::count_if(patients.begin(), patients.end(),
                                          [](const PatientRecord& p) { return p.toxicity == true; }));
}

TrialState::TrialState(TrialConfig config) : config_(std::move(config)) {
    validate(config_);
    regimens_.resize(static_cast<std::size_t>(config_.regimens));
}

int TrialState::pending_efficacy() const noexcept {
    return std::accumulate(regimens_.begin(), regimens_.end(), 0,
                           [](int acc, const RegimenState& r) { return acc + r.pending_eff; });
}

std::optional<LastCohort> TrialState::last_cohort() const {
    if (cohorts_.empty() || !cohorts_.back().toxicity_recorded()) return std::nullopt;
    return LastCohort{cohorts_.back().regimen, cohorts_.back().toxicities()};
}

CohortRecord& TrialState::cohort_at(int cohort) {
    if (cohort < 0 || cohort >= static_cast<int>(cohorts_.size()))
        throw InvalidStateError("cohort " + std::to_string(cohort + 1) + " has not been allocated");
    return cohorts_[static_cast<std::size_t>(cohort)];
}

int TrialState::allocate_cohort(int regimen) {
    if (terminated()) throw InvalidStateError("trial has terminated");
    if (exhausted()) throw InvalidStateError("all " + std::to_string(config_.max_patients) + " patients enrolled");
    if (regimen < 0 || regimen >= config_.regimens)
        throw InvalidStateError("regimen " + std::to_string(regimen + 1) + " does not exist");
    if (!cohorts_.empty() && !cohorts_.back().toxicity_recorded())
        throw InvalidStateError("toxicity of cohort " + std::to_string(cohorts_.size()) + " is still outstanding");
    CohortRecord record;
    record.regimen = regimen;
    record.patients.resize(static_cast<std::size_t>(config_.cohort_size));
    cohorts_.push_back(std::move(record));
    regimens_[static_cast<std::size_t>(regimen)].ever_tried = true;
    patients_enrolled_ += config_.cohort_size;
    return static_cast<int>(cohorts_.size()) - 1;
}

void TrialState::record_cohort_toxicity(int cohort, const std::vector<bool>& toxic) {
    auto& record = cohort_at(cohort);
    if (record.toxicity_recorded())
        throw DuplicateRecordError("toxicity of cohort " + std::to_string(cohort + 1) + " already recorded");
    if (toxic.size() != record.patients.size())
        throw MalformedInputError("cohort " + std::to_string(cohort + 1) + " has " +
                                  std::to_string(record.patients.size()) + " patients, got " +
                                  std::to_string(toxic.size()) + " toxicity outcomes");
    const long time = ++clock_;
    auto& reg = regimens_[static_cast<std::size_t>(record.regimen)];
    for (std::size_t i = 0; i < toxic.size(); ++i) {
        auto& patient = record.patients[i];
        patient.toxicity = toxic[i];
        patient.tox_time = time;
        ++reg.n_tox;
        if (toxic[i])
            ++reg.x_tox;
        else
            ++reg.pending_eff;
    }
}

void TrialState::record_efficacy(int cohort, std::span<const PatientEfficacy> outcomes) {
    if (outcomes.empty()) return;
    auto& record = cohort_at(cohort);
    std::set<int> seen;
    for (const auto& o : outcomes) {
        if (o.patient < 0 || o.patient >= static_cast<int>(record.patients.size()) ||
            !record.patients[static_cast<std::size_t>(o.patient)].awaiting_efficacy() || !seen.insert(o.patient).second)
            throw UnknownPatientError("patient " + std::to_string(o.patient + 1) + " of cohort " +
                                      std::to_string(cohort + 1) + " is not awaiting an efficacy outcome");
    }
    const long time = ++clock_;
    auto& reg = regimens_[static_cast<std::size_t>(record.regimen)];
    for (const auto& o : outcomes) {
        auto& patient = record.patients[static_cast<std::size_t>(o.patient)];
        patient.efficacy = o.efficacy;
        patient.eff_time = time;
        --reg.pending_eff;
        ++reg.n_eff;
        if (o.efficacy) ++reg.x_eff;
    }
}

void TrialState::terminate(TerminationReason reason) {
    if (terminated()) throw InvalidStateError("trial has already terminated");
    termination_ = reason;
}

}  // namespace regfind::engine
