#include "regfind/core/entropy.hpp"

#include <cmath>

#include "regfind/core/error.hpp"
#include "regfind/core/special.hpp"

namespace regfind {

double entropy_difference_shapes(const std::array<double, 3>& shapes, const std::array<double, 3>& exponents) {
    double a0 = 0.0;
    double b0 = 0.0;
    std::array<double, 3> weighted{};
    for (std::size_t i = 0; i < 3; ++i) {
        if (!(shapes[i] > 0.0)) throw DomainError("Dirichlet shapes must be positive");
        weighted[i] = shapes[i] + exponents[i];
        if (!(weighted[i] > 0.0)) throw DomainError("weighted Dirichlet shapes must be positive");
        a0 += shapes[i];
        b0 += weighted[i];
    }
    const double psi_a0 = special::digamma(a0);
    const double psi_b0 = special::digamma(b0);
    double result = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        result += (shapes[i] - 1.0) *
                  (special::digamma(shapes[i]) - psi_a0 - special::digamma(weighted[i]) + psi_b0);
    }
    return result;
}

double entropy_difference(const DirichletCounts& counts, const OutcomeTriple& targets, long long n) {
    if (n <= 0) throw DomainError("entropy_difference requires n > 0");
    if (counts.counts[0] + counts.counts[1] + counts.counts[2] != n)
        throw DomainError("Dirichlet counts must sum to n");
    const double root = std::sqrt(static_cast<double>(n));
    return entropy_difference_shapes(
        counts.shapes(), {targets.eff_no_tox * root, targets.noeff_no_tox * root, targets.tox() * root});
}

}  // namespace regfind
