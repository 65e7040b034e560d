#pragma once

#include <optional>
#include <string>
#include <vector>

namespace regfind::sim {

// True per-regimen rates and the evaluation bounds of a simulation scenario.
struct Scenario {
    std::string name;
    std::vector<double> alpha_t;
    std::vector<double> alpha_e;
    double rho = 0.0;
    double phi_bound = 0.35;
    double psi_bound = 0.20;
    double pi_early = 0.0;
    // Safe regimens within this distance of the best safe efficacy count as
    // attaining it (plateaus with small increments). Zero means exact.
    double plateau_tolerance = 0.0;

    int regimens() const noexcept { return static_cast<int>(alpha_t.size()); }
    bool operator==(const Scenario&) const = default;
};

// Throws MalformedInputError on length mismatch or rates outside [0, 1].
void validate(const Scenario& scenario);

struct ScenarioEvaluation {
    std::optional<int> optimal;
    std::vector<int> correct;
};

// Correct: safe regimens (alpha_t <= phi_bound) attaining the maximal safe
// efficacy, provided it reaches psi_bound. Optimal: least toxic correct one.
ScenarioEvaluation evaluate_scenario(const Scenario& scenario);

// Reassigns the (toxicity, efficacy) pairs so that the j-th least toxic pair
// goes to regimen toxicity_ordering[j]. The ordering (0-based) must keep
// regimens 1, 2 and 6 in place and permute 3, 4 and 5.
Scenario permute_scenario(const Scenario& scenario, const std::vector<int>& toxicity_ordering);

// The six admissible orderings for six regimens, in the conventional order.
std::vector<std::vector<int>> six_toxicity_orderings();

}  // namespace regfind::sim
