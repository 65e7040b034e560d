#pragma once

#include <optional>
#include <span>
#include <vector>

#include "regfind/engine/config.hpp"

namespace regfind::engine {

// Observed data for one regimen. Toxicity and efficacy are counted over
// different denominators: efficacy is only observable for non-toxic patients
// and may arrive later.
struct RegimenState {
    int n_tox = 0;
    int x_tox = 0;
    int n_eff = 0;
    int x_eff = 0;
    int pending_eff = 0;
    bool ever_tried = false;

    bool operator==(const RegimenState&) const = default;
};

struct PatientRecord {
    std::optional<bool> toxicity;
    std::optional<bool> efficacy;
    std::optional<long> tox_time;
    std::optional<long> eff_time;

    bool awaiting_efficacy() const noexcept { return toxicity == false && !efficacy.has_value(); }
    bool operator==(const PatientRecord&) const = default;
};

struct CohortRecord {
    int regimen = 0;
    std::vector<PatientRecord> patients;

    bool toxicity_recorded() const noexcept { return !patients.empty() && patients.front().toxicity.has_value(); }
    int toxicities() const noexcept;
    bool operator==(const CohortRecord&) const = default;
};

// Efficacy outcome for one patient (0-based slot within its cohort).
struct PatientEfficacy {
    int patient = 0;
    bool efficacy = false;
};

struct LastCohort {
    int regimen = 0;
    int toxicities = 0;  // Q
};

// Sequential trial state. All mutation goes through the member operations,
// which enforce the bookkeeping invariants; one writer at a time.
class TrialState {
public:
    explicit TrialState(TrialConfig config);

    const TrialConfig& config() const noexcept { return config_; }
    const std::vector<RegimenState>& regimens() const noexcept { return regimens_; }
    const RegimenState& regimen(int i) const { return regimens_.at(static_cast<std::size_t>(i)); }
    const std::vector<CohortRecord>& cohorts() const noexcept { return cohorts_; }
    std::optional<TerminationReason> termination() const noexcept { return termination_; }
    int patients_enrolled() const noexcept { return patients_enrolled_; }
    long clock() const noexcept { return clock_; }

    bool terminated() const noexcept { return termination_.has_value(); }
    bool exhausted() const noexcept { return patients_enrolled_ >= config_.max_patients; }
    int pending_efficacy() const noexcept;

    // The most recently allocated cohort, once its toxicity is known.
    std::optional<LastCohort> last_cohort() const;

    // Opens a new cohort of c patients at `regimen` and returns its index.
    // Requires the previous cohort's toxicity to be recorded.
    int allocate_cohort(int regimen);

    // Toxicity outcome for every patient of the cohort, recorded as a block.
    void record_cohort_toxicity(int cohort, const std::vector<bool>& toxic);

    // Efficacy for patients currently awaiting it. Empty input is a no-op.
    void record_efficacy(int cohort, std::span<const PatientEfficacy> outcomes);

    void terminate(TerminationReason reason);

    bool operator==(const TrialState&) const = default;

private:
    CohortRecord& cohort_at(int cohort);

    TrialConfig config_;
    std::vector<RegimenState> regimens_;
    std::vector<CohortRecord> cohorts_;
    std::optional<TerminationReason> termination_;
    int patients_enrolled_ = 0;
    long clock_ = 0;
};

}  // namespace regfind::engine
