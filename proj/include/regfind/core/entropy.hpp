#pragma once

#include <array>

#include "regfind/core/tradeoff.hpp"

namespace regfind {

// Outcome counts of the three-outcome model together with the Dirichlet
// prior weights v, giving the posterior Dir(x + v + 1).
struct DirichletCounts {
    std::array<long long, 3> counts{};
    std::array<double, 3> prior{1.0, 1.0, 1.0};

    std::array<double, 3> shapes() const noexcept {
        return {counts[0] + prior[0] + 1.0, counts[1] + prior[1] + 1.0, counts[2] + prior[2] + 1.0};
    }
};

// Difference between the weighted and the plain differential entropy of the
// Dirichlet posterior, where the weight is proportional to prod p_i^(g_i sqrt(n))
// and normalised against the posterior.
//
// Weight times posterior is again Dirichlet with shapes b_i = a_i + g_i sqrt(n),
// so the weighted entropy is a cross-entropy and the difference reduces to
//   sum_i (a_i - 1) [psi(a_i) - psi(a0) - psi(b_i) + psi(b0)].
double entropy_difference(const DirichletCounts& counts, const OutcomeTriple& targets, long long n);

// Same quantity with explicit Dirichlet shapes and weight exponents; used by
// the degenerate (zero-exponent) case and by tests.
double entropy_difference_shapes(const std::array<double, 3>& shapes, const std::array<double, 3>& exponents);

}  // namespace regfind
