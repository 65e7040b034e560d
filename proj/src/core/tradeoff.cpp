#include "regfind/core/tradeoff.hpp"

#include <string>

#include "regfind/core/error.hpp"

namespace regfind {
namespace {

bool open_unit(double p) { return p > 0.0 && p < 1.0; }

}  // namespace

bool OutcomeTriple::interior() const noexcept {
    return eff_no_tox > 0.0 && noeff_no_tox > 0.0 && tox() > 0.0;
}

TradeoffTargets::TradeoffTargets(double gamma_t, double gamma_e) : gamma_t_(gamma_t), gamma_e_(gamma_e) {
    if (!open_unit(gamma_t) || !open_unit(gamma_e))
        throw DomainError("targets must lie strictly inside (0, 1)");
}

double delta_from_triple(const OutcomeTriple& theta, const OutcomeTriple& gamma) {
    if (!theta.interior()) throw DomainError("trade-off evaluated outside the open simplex");
    if (!gamma.interior()) throw DomainError("target triple outside the open simplex");
    const double g3 = gamma.tox();
    return gamma.eff_no_tox * gamma.eff_no_tox / theta.eff_no_tox +
           gamma.noeff_no_tox * gamma.noeff_no_tox / theta.noeff_no_tox + g3 * g3 / theta.tox() - 1.0;
}

double delta_from_rates(double alpha_t, double alpha_e, const TradeoffTargets& targets) {
    if (!open_unit(alpha_t) || !open_unit(alpha_e))
        throw DomainError("rates must lie strictly inside (0, 1), got (" + std::to_string(alpha_t) + ", " +
                          std::to_string(alpha_e) + ")");
    return delta_from_triple(OutcomeTriple::from_rates(alpha_t, alpha_e), targets.triple());
}

std::size_t argmin(std::span<const double> values) {
    if (values.empty()) throw DomainError("argmin of an empty range");
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] < values[best]) best = i;
    return best;
}

}  // namespace regfind
