#pragma once

#include <string>
#include <vector>

#include "regfind/engine/config.hpp"
#include "regfind/sim/scenario.hpp"

namespace regfind::testing {

inline engine::TrialConfig build_config(int M, int N, int c, const std::vector<double>& nu_t,
                                        const std::vector<double>& nu_e, std::vector<engine::PartialOrdering> chains) {
    engine::TrialConfig config;
    config.regimens = M;
    config.max_patients = N;
    config.cohort_size = c;
    for (int i = 0; i < M; ++i) {
        config.tox_priors.push_back({nu_t[i], 1.0});
        config.eff_priors.push_back({nu_e[i], 1.0});
    }
    config.orderings = std::move(chains);
    config.coherence_threshold = 1;
    config.safety = {0.4, 0.3, 0.02};
    config.futility = {0.35, 0.5, 0.05};
    config.rng_seed = 20240101;
    return config;
}

inline std::vector<engine::PartialOrdering> motivating_chains() { return {{0, 1, 2, 5}, {0, 1, 3, 5}, {0, 1, 4, 5}}; }

// Calibrated motivating-trial design.
inline engine::TrialConfig motivating_config() {
    return build_config(6, 36, 2, {.10, .14, .18, .22, .26, .30}, {.60, .62, .64, .66, .68, .70}, motivating_chains());
}

// Priors of the single illustrated trial.
inline engine::TrialConfig illustration_config() {
    return build_config(6, 36, 2, {.10, .175, .25, .325, .40, .475}, {.60, .65, .70, .75, .80, .85},
                        motivating_chains());
}

// Constraints that never bind.
inline engine::TrialConfig without_constraints(engine::TrialConfig config) {
    config.safety = {0.4, 0.999999, 0.0};
    config.futility = {0.35, 1e-6, 0.0};
    return config;
}

inline engine::TrialConfig single_agent_config() {
    auto config = build_config(6, 60, 3, {.05, .14, .23, .32, .41, .50}, {.55, .58, .61, .64, .67, .70},
                               {{0, 1, 2, 3, 4, 5}});
    config.safety = {0.4, 0.3, 0.0125};
    config.futility = {0.3, 0.5, 0.05};
    return config;
}

inline sim::Scenario illustration_scenario() {
    return {"illustration", {.05, .10, .45, .15, .30, .55}, {.10, .40, .70, .70, .70, .70}};
}

inline sim::Scenario single_agent_scenario_1() {
    return {"scenario_01", {.005, .01, .02, .05, .10, .15}, {.01, .10, .30, .50, .80, .80}};
}

inline sim::Scenario single_agent_scenario_2() {
    return {"scenario_02", {.01, .04, .10, .25, .50, .70}, {.40, .40, .40, .40, .40, .40}};
}

inline std::string data_path(const std::string& relative) { return std::string(REGFIND_DATA_DIR) + "/" + relative; }

}  // namespace regfind::testing
