#include "regfind/engine/decision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "regfind/core/error.hpp"

namespace regfind::engine {
namespace {

// Position of `regimen` in `chain`, or -1.
int position(const PartialOrdering& chain, int regimen) {
    auto it = std::find(chain.begin(), chain.end(), regimen);
    return it == chain.end() ? -1 : static_cast<int>(it - chain.begin());
}

// Best element of `pool` by delta, ties to the higher priority (lower rank).
std::optional<int> best_of(const std::vector<int>& pool, const std::vector<RegimenAssessment>& regimens,
                           const std::vector<int>& rank) {
    std::optional<int> best;
    for (int r : pool) {
        if (!best) {
            best = r;
            continue;
        }
        const double d = regimens[r].delta;
        const double b = regimens[*best].delta;
        if (d < b || (d == b && rank[r] < rank[*best])) best = r;
    }
    return best;
}

void require_selectable(const TrialState& state) {
    if (state.terminated()) throw InvalidStateError("trial has terminated");
    if (state.exhausted()) throw InvalidStateError("all patients have been enrolled");
    if (!state.cohorts().empty() && !state.cohorts().back().toxicity_recorded())
        throw InvalidStateError("toxicity of the last cohort is still outstanding");
}

// Candidate pool of the allocation rules, or a termination decision.
// An empty pool stops the trial; the reason is safety when no reachable
// regimen is safe, futility otherwise.
struct Pool {
    std::vector<int> members;
    std::optional<TerminationReason> termination;
};

Pool candidate_pool(const std::vector<RegimenAssessment>& regimens) {
    Pool pool;
    bool any_reachable_safe = false;
    for (int i = 0; i < static_cast<int>(regimens.size()); ++i) {
        const auto& r = regimens[i];
        if (r.allowed()) pool.members.push_back(i);
        any_reachable_safe = any_reachable_safe || (r.safe && r.coherent && r.no_skip);
    }
    if (pool.members.empty())
        pool.termination = any_reachable_safe ? TerminationReason::futility : TerminationReason::safety;
    return pool;
}

}  // namespace

std::vector<Criteria> current_criteria(const TrialState& state) {
    const auto& config = state.config();
    std::vector<Criteria> out;
    out.reserve(state.regimens().size());
    for (std::size_t i = 0; i < state.regimens().size(); ++i) {
        const auto& r = state.regimens()[i];
        Criteria c;
        c.tox_mode = posterior_mode({config.tox_priors[i], r.x_tox, r.n_tox});
        c.eff_mode = posterior_mode({config.eff_priors[i], r.x_eff, r.n_eff});
        c.delta = delta_from_rates(c.tox_mode, c.eff_mode, config.targets);
        out.push_back(c);
    }
    return out;
}

bool coherence_allowed(const TrialState& state, int candidate) {
    const auto last = state.last_cohort();
    if (!last || candidate == last->regimen) return true;
    const bool toxic_cohort = last->toxicities >= state.config().coherence_threshold;
    for (const auto& chain : state.config().orderings) {
        const int from = position(chain, last->regimen);
        const int to = position(chain, candidate);
        if (from < 0 || to < 0) continue;
        if (toxic_cohort && to > from) return false;
        if (!toxic_cohort && to < from) return false;
    }
    return true;
}

bool no_skip_allowed(const TrialState& state, int candidate) {
    if (state.regimen(candidate).ever_tried) return true;
    for (const auto& chain : state.config().orderings) {
        const int pos = position(chain, candidate);
        if (pos > 0 && !state.regimen(chain[pos - 1]).ever_tried) return false;
    }
    return true;
}

std::vector<RegimenAssessment> assess(const TrialState& state, ConstraintLevels levels) {
    const auto& config = state.config();
    const auto criteria = current_criteria(state);
    std::vector<RegimenAssessment> out(criteria.size());
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& r = state.regimens()[i];
        auto& a = out[i];
        a.tox_mode = criteria[i].tox_mode;
        a.eff_mode = criteria[i].eff_mode;
        a.delta = criteria[i].delta;
        a.tox_tail = beta_tail(BetaPosterior{config.tox_priors[i], r.x_tox, r.n_tox}, config.safety.phi_star);
        a.eff_tail = beta_tail(BetaPosterior{config.eff_priors[i], r.x_eff, r.n_eff}, config.futility.psi_star);
        if (levels == ConstraintLevels::interim) {
            a.safety_level = config.safety.level(r.n_tox);
            a.futility_level = config.futility.level(r.n_eff);
            a.coherent = coherence_allowed(state, static_cast<int>(i));
            a.no_skip = no_skip_allowed(state, static_cast<int>(i));
        } else {
            a.safety_level = config.safety.zeta_N;
            a.futility_level = config.futility.xi_N;
        }
        a.safe = a.tox_tail <= a.safety_level;
        a.efficacious = a.eff_tail >= a.futility_level;
    }
    return out;
}

std::vector<int> admissible_set(const TrialState& state, ConstraintLevels levels) {
    const auto regimens = assess(state, levels);
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(regimens.size()); ++i)
        if (regimens[i].admissible()) out.push_back(i);
    return out;
}

DecisionTrace select_next_cohort(const TrialState& state) {
    require_selectable(state);
    DecisionTrace trace;
    trace.regimens = assess(state, ConstraintLevels::interim);
    const auto pool = candidate_pool(trace.regimens);
    trace.termination = pool.termination;
    if (!pool.termination) trace.chosen = best_of(pool.members, trace.regimens, priority_rank(state.config()));
    return trace;
}

std::vector<double> randomization_weights(std::span<const double> deltas, std::span<const int> admissible) {
    if (admissible.empty()) throw InvalidStateError("randomisation needs at least one admissible regimen");
    std::vector<double> weights(deltas.size(), 0.0);
    // Stable ordering by delta keeps ties on the earlier-listed regimen.
    std::vector<int> order(admissible.begin(), admissible.end());
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return deltas[a] < deltas[b]; });
    const int m = order[0];
    if (order.size() == 1 || deltas[m] == 0.0) {
        weights[m] = 1.0;
        return weights;
    }
    const int j = order[1];
    const double inv_m = 1.0 / deltas[m];
    const double inv_j = 1.0 / deltas[j];
    weights[m] = inv_m / (inv_m + inv_j);
    weights[j] = 1.0 - weights[m];
    return weights;
}

DecisionTrace select_next_cohort_with_draw(const TrialState& state, double draw) {
    require_selectable(state);
    DecisionTrace trace;
    trace.regimens = assess(state, ConstraintLevels::interim);
    trace.draw = draw;
    auto pool = candidate_pool(trace.regimens);
    trace.termination = pool.termination;
    if (pool.termination) return trace;

    // Listing the pool in priority order makes delta ties resolve like the
    // non-randomised rule.
    const auto rank = priority_rank(state.config());
    std::sort(pool.members.begin(), pool.members.end(), [&](int a, int b) { return rank[a] < rank[b]; });
    std::vector<double> deltas;
    deltas.reserve(trace.regimens.size());
    for (const auto& r : trace.regimens) deltas.push_back(r.delta);
    trace.weights = randomization_weights(deltas, pool.members);

    // The best regimen owns [0, w_m) and the runner-up the rest.
    double cumulative = 0.0;
    int last_positive = -1;
    std::vector<int> by_delta = pool.members;
    std::stable_sort(by_delta.begin(), by_delta.end(), [&](int a, int b) { return deltas[a] < deltas[b]; });
    for (int r : by_delta) {
        if (trace.weights[r] <= 0.0) continue;
        last_positive = r;
        cumulative += trace.weights[r];
        if (draw < cumulative) {
            trace.chosen = r;
            return trace;
        }
    }
    trace.chosen = last_positive;
    return trace;
}

DecisionTrace select_next_cohort_randomized(const TrialState& state, Rng& rng) {
    return select_next_cohort_with_draw(state, uniform01(rng));
}

DecisionTrace select_next(const TrialState& state, Rng& rng) {
    return state.config().rule == AllocationRule::we ? select_next_cohort(state)
                                                      : select_next_cohort_randomized(state, rng);
}

std::optional<int> final_recommendation(const TrialState& state) {
    if (state.terminated()) return std::nullopt;
    if (!state.exhausted()) throw InvalidStateError("final recommendation requested mid-trial");
    // Each regimen is held to its schedule at its final counts, which is
    // zeta_N / xi_N once enough patients were treated; coherence no longer
    // applies.
    const auto regimens = assess(state, ConstraintLevels::interim);
    std::vector<int> pool;
    for (int i = 0; i < static_cast<int>(regimens.size()); ++i)
        if (regimens[i].admissible()) pool.push_back(i);
    return best_of(pool, regimens, priority_rank(state.config()));
}

}  // namespace regfind::engine
