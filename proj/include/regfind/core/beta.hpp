#pragma once

namespace regfind {

// Prior Beta(nu + 1, beta - nu + 1) on a response rate. nu acts as a
// pseudo-event count and beta as a pseudo-sample size, so nu / beta is the
// prior mode.
struct BetaPrior {
    double nu = 0.0;
    double beta = 1.0;

    bool valid() const noexcept { return nu > 0.0 && nu < beta; }
};

// Posterior after `events` responses in `trials` patients.
struct BetaPosterior {
    BetaPrior prior;
    int events = 0;
    int trials = 0;

    double shape_a() const noexcept { return events + prior.nu + 1.0; }
    double shape_b() const noexcept { return trials - events + prior.beta - prior.nu + 1.0; }
};

// Posterior mode (x + nu) / (n + beta). Throws DomainError when the prior or
// the counts are invalid.
double posterior_mode(const BetaPosterior& post);

// P(p > threshold) under the posterior.
double beta_tail(const BetaPosterior& post, double threshold);

// P(p > threshold) for an arbitrary Beta(a, b).
double beta_tail(double a, double b, double threshold);

}  // namespace regfind
