#include "regfind/engine/config.hpp"

#include <set>
#include <sstream>

#include "regfind/core/error.hpp"

namespace regfind::engine {

std::string to_string(AllocationRule rule) { return rule == AllocationRule::we ? "WE" : "WE_R"; }

std::string to_string(TerminationReason reason) {
    return reason == TerminationReason::safety ? "safety" : "futility";
}

namespace {

bool same_priors(const std::vector<BetaPrior>& a, const std::vector<BetaPrior>& b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                      [](const BetaPrior& x, const BetaPrior& y) { return x.nu == y.nu && x.beta == y.beta; });
}

bool open_unit(double p) { return p > 0.0 && p < 1.0; }

}  // namespace

bool operator==(const TrialConfig& a, const TrialConfig& b) {
    return a.regimens == b.regimens && a.max_patients == b.max_patients && a.cohort_size == b.cohort_size &&
           a.targets.gamma_t() == b.targets.gamma_t() && a.targets.gamma_e() == b.targets.gamma_e() &&
           same_priors(a.tox_priors, b.tox_priors) && same_priors(a.eff_priors, b.eff_priors) &&
           a.orderings == b.orderings && a.coherence_threshold == b.coherence_threshold &&
           a.safety == b.safety && a.futility == b.futility && a.rule == b.rule && a.rng_seed == b.rng_seed;
}

std::vector<std::string> config_problems(const TrialConfig& config) {
    std::vector<std::string> problems;
    auto fail = [&](const std::string& what) { problems.push_back(what); };

    if (config.regimens < 2) fail("M must be at least 2");
    if (config.cohort_size < 1) fail("c must be positive");
    if (config.max_patients < 1) fail("N must be positive");
    if (config.cohort_size >= 1 && config.max_patients % config.cohort_size != 0)
        fail("N must be divisible by c");
    if (config.coherence_threshold < 1) fail("q must be a positive integer");

    const auto m = static_cast<std::size_t>(std::max(config.regimens, 0));
    if (config.tox_priors.size() != m) fail("tox_priors must have M entries");
    if (config.eff_priors.size() != m) fail("eff_priors must have M entries");
    for (std::size_t i = 0; i < config.tox_priors.size(); ++i)
        if (!config.tox_priors[i].valid()) fail("tox_priors[" + std::to_string(i + 1) + "] violates 0 < nu < beta");
    for (std::size_t i = 0; i < config.eff_priors.size(); ++i)
        if (!config.eff_priors[i].valid()) fail("eff_priors[" + std::to_string(i + 1) + "] violates 0 < nu < beta");

    for (std::size_t s = 0; s < config.orderings.size(); ++s) {
        const auto& chain = config.orderings[s];
        const std::string label = "ordering " + std::to_string(s + 1);
        std::set<int> seen;
        bool indices_ok = true;
        for (int r : chain) {
            if (r < 0 || r >= config.regimens) {
                fail(label + " references regimen outside [1, M]");
                indices_ok = false;
            } else if (!seen.insert(r).second) {
                fail(label + " repeats regimen " + std::to_string(r + 1));
                indices_ok = false;
            }
        }
        if (chain.size() < 2) fail(label + " must contain at least two regimens");
        if (!indices_ok || config.tox_priors.size() != m || config.eff_priors.size() != m) continue;
        for (std::size_t k = 1; k < chain.size(); ++k) {
            const auto& lo_t = config.tox_priors[chain[k - 1]];
            const auto& hi_t = config.tox_priors[chain[k]];
            const auto& lo_e = config.eff_priors[chain[k - 1]];
            const auto& hi_e = config.eff_priors[chain[k]];
            if (!(lo_t.nu / lo_t.beta < hi_t.nu / hi_t.beta) || !(lo_e.nu / lo_e.beta < hi_e.nu / hi_e.beta)) {
                fail(label + ": prior means must increase strictly from regimen " + std::to_string(chain[k - 1] + 1) +
                     " to " + std::to_string(chain[k] + 1));
            }
        }
    }

    if (!open_unit(config.safety.phi_star)) fail("safety.phi_star must lie in (0, 1)");
    if (!open_unit(config.safety.zeta_N)) fail("safety.zeta_N must lie in (0, 1)");
    if (!(config.safety.r_t >= 0.0)) fail("safety.r_t must be nonnegative");
    if (!open_unit(config.futility.psi_star)) fail("futility.psi_star must lie in (0, 1)");
    if (!open_unit(config.futility.xi_N)) fail("futility.xi_N must lie in (0, 1)");
    if (!(config.futility.r_e >= 0.0)) fail("futility.r_e must be nonnegative");
    return problems;
}

void validate(const TrialConfig& config) {
    auto problems = config_problems(config);
    if (!problems.empty()) throw ValidationError(std::move(problems));
}

std::vector<int> priority_rank(const TrialConfig& config) {
    std::vector<int> rank(static_cast<std::size_t>(config.regimens), -1);
    int next = 0;
    if (!config.orderings.empty())
        for (int r : config.orderings.front()) rank[r] = next++;
    for (auto& r : rank)
        if (r < 0) r = next++;
    return rank;
}

}  // namespace regfind::engine
