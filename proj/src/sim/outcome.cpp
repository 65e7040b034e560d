#include "regfind/sim/outcome.hpp"

#include <cmath>

#include "regfind/core/error.hpp"
#include "regfind/core/special.hpp"

namespace regfind::sim {
namespace {

// Uniform on the open interval (0, 1).
double open_uniform(Rng& rng) { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; }

}  // namespace

OutcomeSampler::OutcomeSampler(const Scenario& scenario)
    : rho_(scenario.rho), rho_complement_(std::sqrt(1.0 - scenario.rho * scenario.rho)) {
    validate(scenario);
    for (int i = 0; i < scenario.regimens(); ++i) {
        tox_threshold_.push_back(special::normal_quantile(scenario.alpha_t[i]));
        eff_threshold_.push_back(special::normal_quantile(scenario.alpha_e[i]));
    }
}

PatientOutcome OutcomeSampler::operator()(int regimen, Rng& rng) const {
    if (regimen < 0 || regimen >= static_cast<int>(tox_threshold_.size()))
        throw InvalidStateError("regimen index out of range");
    const double z1 = special::normal_quantile(open_uniform(rng));
    const double z2 = rho_ * z1 + rho_complement_ * special::normal_quantile(open_uniform(rng));
    return {z1 <= tox_threshold_[regimen], z2 <= eff_threshold_[regimen]};
}

PatientOutcome sample_patient_outcome(const Scenario& scenario, int regimen, Rng& rng) {
    return OutcomeSampler(scenario)(regimen, rng);
}

}  // namespace regfind::sim
