#pragma once

#include <optional>
#include <span>
#include <vector>

#include "regfind/core/random.hpp"
#include "regfind/engine/state.hpp"

namespace regfind::engine {

// Plug-in estimates for one regimen.
struct Criteria {
    double tox_mode = 0.0;
    double eff_mode = 0.0;
    double delta = 0.0;
};

std::vector<Criteria> current_criteria(const TrialState& state);

// Interim levels follow the schedules at each regimen's own counts; terminal
// levels are the fixed end-of-trial probabilities zeta_N and xi_N.
enum class ConstraintLevels { interim, terminal };

struct RegimenAssessment {
    double tox_mode = 0.0;
    double eff_mode = 0.0;
    double delta = 0.0;
    double tox_tail = 0.0;  // P(p_tox > phi_star)
    double eff_tail = 0.0;  // P(p_eff > psi_star)
    double safety_level = 0.0;
    double futility_level = 0.0;
    bool safe = false;
    bool efficacious = false;
    bool coherent = true;
    bool no_skip = true;

    bool admissible() const noexcept { return safe && efficacious; }
    bool allowed() const noexcept { return safe && efficacious && coherent && no_skip; }
    bool operator==(const RegimenAssessment&) const = default;
};

// Audit record of one allocation decision.
struct DecisionTrace {
    std::vector<RegimenAssessment> regimens;
    std::optional<int> chosen;
    std::optional<TerminationReason> termination;
    std::vector<double> weights;  // only for the randomised rule
    std::optional<double> draw;   // uniform draw used by the randomised rule

    bool operator==(const DecisionTrace&) const = default;
};

// Per-regimen estimates and constraint flags. Coherence and no-skip flags are
// only evaluated for interim levels.
std::vector<RegimenAssessment> assess(const TrialState& state, ConstraintLevels levels);

// Regimens passing both the safety and the futility constraint.
std::vector<int> admissible_set(const TrialState& state, ConstraintLevels levels = ConstraintLevels::interim);

// Coherent escalation/de-escalation relative to the last cohort along every
// declared chain that contains both regimens. Always true before the first
// cohort.
bool coherence_allowed(const TrialState& state, int candidate);

// A never-tried regimen needs its immediate predecessor tried in every chain.
bool no_skip_allowed(const TrialState& state, int candidate);

// Non-randomised rule: argmin of delta over the allowed regimens.
DecisionTrace select_next_cohort(const TrialState& state);

// Inverse-delta weights over the two best admissible regimens.
std::vector<double> randomization_weights(std::span<const double> deltas, std::span<const int> admissible);

// Randomised rule; consumes exactly one value from `rng`.
DecisionTrace select_next_cohort_randomized(const TrialState& state, Rng& rng);

// Randomised rule with an externally supplied uniform draw in [0, 1).
DecisionTrace select_next_cohort_with_draw(const TrialState& state, double draw);

// Dispatches on config().rule.
DecisionTrace select_next(const TrialState& state, Rng& rng);

// Regimen recommended at the end of the trial: argmin of delta over the
// regimens passing safety and futility at their end-of-trial schedule levels
// (no coherence, no skipping rule), or nullopt when the trial terminated or
// nothing qualifies.
std::optional<int> final_recommendation(const TrialState& state);

}  // namespace regfind::engine
