#pragma once

#include <vector>

#include "regfind/core/random.hpp"
#include "regfind/sim/scenario.hpp"

namespace regfind::sim {

struct PatientOutcome {
    bool toxicity = false;
    // Drawn for every patient; only observable when toxicity is false.
    bool latent_efficacy = false;
};

// Correlated binary outcomes by thresholding a bivariate standard normal pair
// (Z1, rho Z1 + sqrt(1 - rho^2) Z2'). Marginals equal alpha_t and alpha_e for
// any rho. Thresholds are precomputed per regimen.
class OutcomeSampler {
public:
    explicit OutcomeSampler(const Scenario& scenario);

    // Consumes exactly two values from `rng`.
    PatientOutcome operator()(int regimen, Rng& rng) const;

private:
    double rho_;
    double rho_complement_;
    std::vector<double> tox_threshold_;
    std::vector<double> eff_threshold_;
};

PatientOutcome sample_patient_outcome(const Scenario& scenario, int regimen, Rng& rng);

}  // namespace regfind::sim
