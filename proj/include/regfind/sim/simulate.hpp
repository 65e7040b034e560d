#pragma once

#include <optional>
#include <vector>

#include "regfind/engine/decision.hpp"
#include "regfind/sim/outcome.hpp"

namespace regfind::sim {

struct TrialResult {
    engine::TrialState state;
    std::optional<int> recommendation;
    // Set when the trial stopped early; a completed trial whose final
    // recommendation finds nothing admissible has neither field set.
    std::optional<engine::TerminationReason> termination;
    std::vector<int> allocations;     // patients per regimen
    std::vector<int> recommendations_made;  // allocation decisions, one per cohort
    int toxicities = 0;
    int efficacies = 0;               // patients with a latent efficacy response, toxic or not
    int observed_efficacies = 0;
    int observed_no_efficacy = 0;
    int unresolved = 0;               // efficacy still pending when the trial stopped

    bool stopped() const noexcept { return !recommendation.has_value(); }
};

// Runs one trial on the delayed-efficacy timeline: cohort k's toxicity is
// known before cohort k+1 is allocated, its efficacy just before cohort k+2.
// Each eventual non-response is visible at toxicity time with probability
// scenario.pi_early. Outstanding efficacy is resolved before the final
// recommendation.
TrialResult simulate_trial(const engine::TrialConfig& config, const Scenario& scenario, Rng& rng);

// Same, with a caller-provided sampler (avoids recomputing thresholds).
TrialResult simulate_trial(const engine::TrialConfig& config, const Scenario& scenario, const OutcomeSampler& sampler,
                           Rng& rng);

// Replays a fixed outcome sequence (one vector of patient outcomes per
// cohort) through the same timeline, with pi_early = 0. Used to reproduce
// worked examples; stops early if the sequence runs out.
TrialResult replay_trial(const engine::TrialConfig& config, const std::vector<std::vector<PatientOutcome>>& outcomes,
                         std::vector<engine::DecisionTrace>* traces = nullptr);

}  // namespace regfind::sim
