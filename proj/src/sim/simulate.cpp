#include "regfind/sim/simulate.hpp"

#include <functional>

#include "regfind/core/error.hpp"

namespace regfind::sim {
namespace {

using engine::PatientEfficacy;
using engine::TrialState;

// Records the outstanding efficacy of `cohort` from the latent outcomes.
void flush_efficacy(TrialState& state, int cohort, const std::vector<PatientOutcome>& latent) {
    const auto& record = state.cohorts()[static_cast<std::size_t>(cohort)];
    std::vector<PatientEfficacy> outcomes;
    for (std::size_t p = 0; p < record.patients.size(); ++p)
        if (record.patients[p].awaiting_efficacy()) outcomes.push_back({static_cast<int>(p), latent[p].latent_efficacy});
    state.record_efficacy(cohort, outcomes);
}

using CohortSource = std::function<std::optional<std::vector<PatientOutcome>>(int regimen, int cohort)>;
using EarlyFilter = std::function<bool()>;

TrialResult run(const engine::TrialConfig& config, int regimens, const CohortSource& next_outcomes,
                const EarlyFilter& observe_early, Rng& rng, std::vector<engine::DecisionTrace>* traces) {
    TrialResult result{TrialState(config), {}, {}, {}, {}};
    auto& state = result.state;
    result.allocations.assign(static_cast<std::size_t>(regimens), 0);
    std::vector<std::vector<PatientOutcome>> latent;

    for (int k = 0; k < config.cohorts(); ++k) {
        if (k >= 2) flush_efficacy(state, k - 2, latent[static_cast<std::size_t>(k - 2)]);
        auto trace = engine::select_next(state, rng);
        if (traces) traces->push_back(trace);
        if (trace.termination) {
            state.terminate(*trace.termination);
            result.termination = trace.termination;
            break;
        }
        const int regimen = *trace.chosen;
        auto outcomes = next_outcomes(regimen, k);
        if (!outcomes) break;
        const int cohort = state.allocate_cohort(regimen);
        result.recommendations_made.push_back(regimen);
        result.allocations[static_cast<std::size_t>(regimen)] += config.cohort_size;

        std::vector<bool> toxic;
        for (const auto& o : *outcomes) toxic.push_back(o.toxicity);
        state.record_cohort_toxicity(cohort, toxic);

        std::vector<PatientEfficacy> early;
        for (std::size_t p = 0; p < outcomes->size(); ++p) {
            const auto& o = (*outcomes)[p];
            if (!o.toxicity && !o.latent_efficacy && observe_early()) early.push_back({static_cast<int>(p), false});
        }
        state.record_efficacy(cohort, early);
        latent.push_back(std::move(*outcomes));
    }

    if (!result.termination) {
        for (int k = 0; k < static_cast<int>(state.cohorts().size()); ++k)
            flush_efficacy(state, k, latent[static_cast<std::size_t>(k)]);
        if (state.exhausted()) result.recommendation = engine::final_recommendation(state);
    }

    for (std::size_t k = 0; k < state.cohorts().size(); ++k) {
        const auto& record = state.cohorts()[k];
        for (std::size_t p = 0; p < record.patients.size(); ++p) {
            const auto& patient = record.patients[p];
            if (latent[k][p].latent_efficacy) ++result.efficacies;
            if (patient.toxicity == true) {
                ++result.toxicities;
                continue;
            }
            if (!patient.efficacy)
                ++result.unresolved;
            else if (*patient.efficacy)
                ++result.observed_efficacies;
            else
                ++result.observed_no_efficacy;
        }
    }
    return result;
}

}  // namespace

TrialResult simulate_trial(const engine::TrialConfig& config, const Scenario& scenario, const OutcomeSampler& sampler,
                           Rng& rng) {
    if (scenario.regimens() != config.regimens)
        throw MalformedInputError("scenario and configuration disagree on the number of regimens");
    const double pi = scenario.pi_early;
    auto source = [&](int regimen, int) -> std::optional<std::vector<PatientOutcome>> {
        std::vector<PatientOutcome> cohort;
        for (int p = 0; p < config.cohort_size; ++p) cohort.push_back(sampler(regimen, rng));
        return cohort;
    };
    auto early = [&]() { return pi > 0.0 && uniform01(rng) < pi; };
    return run(config, scenario.regimens(), source, early, rng, nullptr);
}

TrialResult simulate_trial(const engine::TrialConfig& config, const Scenario& scenario, Rng& rng) {
    return simulate_trial(config, scenario, OutcomeSampler(scenario), rng);
}

TrialResult replay_trial(const engine::TrialConfig& config, const std::vector<std::vector<PatientOutcome>>& outcomes,
                         std::vector<engine::DecisionTrace>* traces) {
    Rng rng(config.rng_seed);
    auto source = [&](int, int cohort) -> std::optional<std::vector<PatientOutcome>> {
        if (cohort >= static_cast<int>(outcomes.size())) return std::nullopt;
        return outcomes[static_cast<std::size_t>(cohort)];
    };
    auto early = []() { return false; };
    return run(config, config.regimens, source, early, rng, traces);
}

}  // namespace regfind::sim
