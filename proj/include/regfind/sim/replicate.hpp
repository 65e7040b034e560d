#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "regfind/engine/config.hpp"
#include "regfind/sim/scenario.hpp"

namespace regfind::sim {

// Replication totals. Everything is an integer count so that merging
// partial results is exact and order-independent.
struct OperatingCharacteristics {
    long long replications = 0;
    std::uint64_t base_seed = 0;
    std::vector<long long> recommendations;  // per regimen
    std::vector<long long> patients;         // per regimen, summed over trials
    long long terminations = 0;              // no recommendation (early stop or none admissible at the end)
    long long safety_stops = 0;
    long long futility_stops = 0;
    long long toxicities = 0;
    long long efficacies = 0;

    explicit OperatingCharacteristics(int regimens = 0)
        : recommendations(static_cast<std::size_t>(regimens), 0), patients(static_cast<std::size_t>(regimens), 0) {}

    void merge(const OperatingCharacteristics& other);

    std::vector<double> recommendation_proportions() const;
    std::vector<double> mean_patients() const;
    double termination_proportion() const;
    double mean_toxicities() const;
    double mean_efficacies() const;
    // Share of replications recommending any regimen in `regimens`.
    double proportion_recommending(const std::vector<int>& regimens) const;

    bool operator==(const OperatingCharacteristics&) const = default;
};

// R independent trials; replication r uses stream_seed(base_seed, r). The
// result does not depend on `lanes` (0 = hardware concurrency).
OperatingCharacteristics run_replications(const engine::TrialConfig& config, const Scenario& scenario, long long R,
                                          std::uint64_t base_seed, int lanes = 0);

struct ComparatorCharacteristics {
    OperatingCharacteristics unfiltered;  // argmin of the end-of-trial trade-off
    OperatingCharacteristics filtered;    // same, restricted to terminal-admissible regimens
};

// How the comparator estimates each regimen's rates at the end of the trial.
// `empirical` uses observed proportions (efficacy among non-toxic patients);
// estimates on the boundary are moved inside by 1e-9, so such regimens get a
// very large but still ordered trade-off.
enum class ComparatorEstimator { posterior_mode, empirical };

// Non-adaptive comparator: N/M patients per regimen with complete follow-up,
// then the regimen with the smallest estimated trade-off.
ComparatorCharacteristics equal_allocation_comparator(const engine::TrialConfig& config, const Scenario& scenario,
                                                      long long R, std::uint64_t base_seed, int lanes = 0,
                                                      ComparatorEstimator estimator = ComparatorEstimator::posterior_mode);

// Helpers shared with calibration and reports.
double optimal_proportion(const OperatingCharacteristics& oc, const Scenario& scenario);
double correct_proportion(const OperatingCharacteristics& oc, const Scenario& scenario);

}  // namespace regfind::sim
