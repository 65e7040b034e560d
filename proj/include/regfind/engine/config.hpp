#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "regfind/core/beta.hpp"
#include "regfind/core/tradeoff.hpp"

namespace regfind::engine {

enum class AllocationRule { we, we_randomized };
enum class TerminationReason { safety, futility };

std::string to_string(AllocationRule rule);
std::string to_string(TerminationReason reason);

// Regimen i is safe while P(p_tox > phi_star) <= max(1 - r_t n, zeta_N).
struct SafetySchedule {
    double phi_star = 0.4;
    double zeta_N = 0.3;
    double r_t = 0.0;

    double level(int n) const noexcept { return std::max(1.0 - r_t * n, zeta_N); }
    bool operator==(const SafetySchedule&) const = default;
};

// Regimen i is efficacious while P(p_eff > psi_star) >= min(r_e n, xi_N).
struct FutilitySchedule {
    double psi_star = 0.3;
    double xi_N = 0.5;
    double r_e = 0.0;

    double level(int n) const noexcept { return std::min(r_e * n, xi_N); }
    bool operator==(const FutilitySchedule&) const = default;
};

// A chain of regimens (0-based) known to have nondecreasing toxicity.
using PartialOrdering = std::vector<int>;

struct TrialConfig {
    int regimens = 0;      // M
    int max_patients = 0;  // N
    int cohort_size = 1;   // c
    TradeoffTargets targets{0.01, 0.99};
    std::vector<BetaPrior> tox_priors;
    std::vector<BetaPrior> eff_priors;
    std::vector<PartialOrdering> orderings;
    int coherence_threshold = 1;  // q
    SafetySchedule safety;
    FutilitySchedule futility;
    AllocationRule rule = AllocationRule::we;
    std::uint64_t rng_seed = 0;

    int cohorts() const noexcept { return cohort_size > 0 ? max_patients / cohort_size : 0; }
};

bool operator==(const TrialConfig& a, const TrialConfig& b);

// Every violated invariant, in a stable order. Empty when the config is valid.
std::vector<std::string> config_problems(const TrialConfig& config);

// Throws ValidationError listing config_problems() when nonempty.
void validate(const TrialConfig& config);

// Tie-break rank: positions along the first declared ordering come first,
// remaining regimens follow by index. rank[i] is regimen i's priority.
std::vector<int> priority_rank(const TrialConfig& config);

}  // namespace regfind::engine
