#include "regfind/sim/scenario.hpp"

#include <algorithm>

#include "regfind/core/error.hpp"

namespace regfind::sim {

void validate(const Scenario& scenario) {
    if (scenario.alpha_t.empty() || scenario.alpha_t.size() != scenario.alpha_e.size())
        throw MalformedInputError("scenario '" + scenario.name + "': alpha_t and alpha_e must have equal, nonzero length");
    auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!std::all_of(scenario.alpha_t.begin(), scenario.alpha_t.end(), prob) ||
        !std::all_of(scenario.alpha_e.begin(), scenario.alpha_e.end(), prob))
        throw MalformedInputError("scenario '" + scenario.name + "': rates must lie in [0, 1]");
    if (!(scenario.rho >= -1.0 && scenario.rho <= 1.0))
        throw MalformedInputError("scenario '" + scenario.name + "': rho must lie in [-1, 1]");
    if (!prob(scenario.pi_early)) throw MalformedInputError("scenario '" + scenario.name + "': pi_early must lie in [0, 1]");
    if (!(scenario.plateau_tolerance >= 0.0))
        throw MalformedInputError("scenario '" + scenario.name + "': plateau_tolerance must be nonnegative");
}

ScenarioEvaluation evaluate_scenario(const Scenario& scenario) {
    ScenarioEvaluation out;
    double best = -1.0;
    for (int i = 0; i < scenario.regimens(); ++i)
        if (scenario.alpha_t[i] <= scenario.phi_bound) best = std::max(best, scenario.alpha_e[i]);
    if (best < 0.0 || best < scenario.psi_bound) return out;
    for (int i = 0; i < scenario.regimens(); ++i) {
        if (scenario.alpha_t[i] > scenario.phi_bound) continue;
        if (scenario.alpha_e[i] < best - scenario.plateau_tolerance) continue;
        out.correct.push_back(i);
        if (!out.optimal || scenario.alpha_t[i] < scenario.alpha_t[*out.optimal]) out.optimal = i;
    }
    return out;
}

Scenario permute_scenario(const Scenario& scenario, const std::vector<int>& toxicity_ordering) {
    const bool shape_ok = scenario.regimens() == 6 && toxicity_ordering.size() == 6 && toxicity_ordering[0] == 0 &&
                          toxicity_ordering[1] == 1 && toxicity_ordering[5] == 5;
    std::vector<int> middle;
    if (shape_ok) middle.assign(toxicity_ordering.begin() + 2, toxicity_ordering.begin() + 5);
    std::sort(middle.begin(), middle.end());
    if (!shape_ok || middle != std::vector<int>{2, 3, 4})
        throw MalformedInputError("toxicity ordering must fix regimens 1, 2, 6 and permute 3, 4, 5");

    Scenario out = scenario;
    for (std::size_t j = 0; j < toxicity_ordering.size(); ++j) {
        out.alpha_t[toxicity_ordering[j]] = scenario.alpha_t[j];
        out.alpha_e[toxicity_ordering[j]] = scenario.alpha_e[j];
    }
    return out;
}

std::vector<std::vector<int>> six_toxicity_orderings() {
    return {{0, 1, 2, 3, 4, 5}, {0, 1, 2, 4, 3, 5}, {0, 1, 3, 2, 4, 5},
            {0, 1, 3, 4, 2, 5}, {0, 1, 4, 2, 3, 5}, {0, 1, 4, 3, 2, 5}};
}

}  // namespace regfind::sim
