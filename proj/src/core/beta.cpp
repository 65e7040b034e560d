#include "regfind/core/beta.hpp"

#include "regfind/core/error.hpp"
#include "regfind/core/special.hpp"

namespace regfind {
namespace {

void check(const BetaPosterior& post) {
    if (!post.prior.valid()) throw DomainError("Beta prior requires 0 < nu < beta");
    if (post.events < 0 || post.trials < post.events) throw DomainError("Beta posterior requires 0 <= x <= n");
}

}  // namespace

double posterior_mode(const BetaPosterior& post) {
    check(post);
    return (post.events + post.prior.nu) / (post.trials + post.prior.beta);
}

double beta_tail(const BetaPosterior& post, double threshold) {
    check(post);
    return beta_tail(post.shape_a(), post.shape_b(), threshold);
}

double beta_tail(double a, double b, double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) throw DomainError("tail threshold outside [0, 1]");
    return special::incomplete_beta_upper(a, b, threshold);
}

}  // namespace regfind
