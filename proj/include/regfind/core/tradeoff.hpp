#pragma once

#include <span>
#include <vector>

namespace regfind {

// Probabilities of the three mutually exclusive patient outcomes:
// efficacy without toxicity, neither, and toxicity (implicit third part).
struct OutcomeTriple {
    double eff_no_tox = 0.0;
    double noeff_no_tox = 0.0;

    double tox() const noexcept { return 1.0 - eff_no_tox - noeff_no_tox; }

    // True when all three components are strictly positive.
    bool interior() const noexcept;

    // Maps marginal toxicity/efficacy rates onto the triple; efficacy is only
    // meaningful in the absence of toxicity.
    static OutcomeTriple from_rates(double tox_rate, double eff_rate) noexcept {
        return {(1.0 - tox_rate) * eff_rate, (1.0 - tox_rate) * (1.0 - eff_rate)};
    }
};

// Target toxicity and efficacy rates. Both must lie in (0, 1).
class TradeoffTargets {
public:
    TradeoffTargets(double gamma_t, double gamma_e);

    double gamma_t() const noexcept { return gamma_t_; }
    double gamma_e() const noexcept { return gamma_e_; }
    OutcomeTriple triple() const noexcept { return OutcomeTriple::from_rates(gamma_t_, gamma_e_); }

private:
    double gamma_t_;
    double gamma_e_;
};

// Trade-off between true outcome probabilities and the target triple:
//   g1^2/t1 + g2^2/t2 + g3^2/t3 - 1.
// Zero only at theta == gamma and unbounded toward the simplex boundary.
// Throws DomainError unless both triples are interior.
double delta_from_triple(const OutcomeTriple& theta, const OutcomeTriple& gamma);

// Same trade-off expressed in toxicity/efficacy rates. Rates must be in (0, 1).
double delta_from_rates(double alpha_t, double alpha_e, const TradeoffTargets& targets);

// Index of the smallest value; ties go to the earliest index.
std::size_t argmin(std::span<const double> values);

}  // namespace regfind
