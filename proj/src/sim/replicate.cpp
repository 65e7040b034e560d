#include "regfind/sim/replicate.hpp"

#include <algorithm>
#include <functional>
#include <thread>

#include "regfind/core/error.hpp"
#include "regfind/core/random.hpp"
#include "regfind/engine/decision.hpp"
#include "regfind/sim/simulate.hpp"

namespace regfind::sim {
namespace {

int resolve_lanes(int lanes, long long R) {
    if (lanes <= 0) lanes = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    return static_cast<int>(std::clamp<long long>(lanes, 1, std::max<long long>(R, 1)));
}

// Runs body(r, partial) for r in [0, R) with a contiguous block per lane and
// merges the partial totals in lane order.
template <class Result>
Result parallel_reduce(long long R, int lanes, const Result& zero,
                       const std::function<void(long long, Result&)>& body) {
    lanes = resolve_lanes(lanes, R);
    std::vector<Result> partials(static_cast<std::size_t>(lanes), zero);
    {
        std::vector<std::jthread> workers;
        for (int lane = 0; lane < lanes; ++lane) {
            workers.emplace_back([&, lane] {
                const long long begin = R * lane / lanes;
                const long long end = R * (lane + 1) / lanes;
                for (long long r = begin; r < end; ++r) body(r, partials[static_cast<std::size_t>(lane)]);
            });
        }
    }
    Result total = zero;
    for (const auto& p : partials) total.merge(p);
    return total;
}

double share(long long count, long long total) { return total > 0 ? static_cast<double>(count) / total : 0.0; }

}  // namespace

void OperatingCharacteristics::merge(const OperatingCharacteristics& other) {
    if (recommendations.size() != other.recommendations.size())
        throw InvalidStateError("cannot merge characteristics of different regimen counts");
    replications += other.replications;
    for (std::size_t i = 0; i < recommendations.size(); ++i) {
        recommendations[i] += other.recommendations[i];
        patients[i] += other.patients[i];
    }
    terminations += other.terminations;
    safety_stops += other.safety_stops;
    futility_stops += other.futility_stops;
    toxicities += other.toxicities;
    efficacies += other.efficacies;
}

std::vector<double> OperatingCharacteristics::recommendation_proportions() const {
    std::vector<double> out;
    for (auto c : recommendations) out.push_back(share(c, replications));
    return out;
}

std::vector<double> OperatingCharacteristics::mean_patients() const {
    std::vector<double> out;
    for (auto c : patients) out.push_back(share(c, replications));
    return out;
}

double OperatingCharacteristics::termination_proportion() const { return share(terminations, replications); }
double OperatingCharacteristics::mean_toxicities() const { return share(toxicities, replications); }
double OperatingCharacteristics::mean_efficacies() const { return share(efficacies, replications); }

double OperatingCharacteristics::proportion_recommending(const std::vector<int>& regimens) const {
    long long count = 0;
    for (int r : regimens) count += recommendations.at(static_cast<std::size_t>(r));
    return share(count, replications);
}

OperatingCharacteristics run_replications(const engine::TrialConfig& config, const Scenario& scenario, long long R,
                                          std::uint64_t base_seed, int lanes) {
    if (R < 1) throw MalformedInputError("replication count must be at least 1");
    engine::validate(config);
    const OutcomeSampler sampler(scenario);
    OperatingCharacteristics zero(config.regimens);
    auto total = parallel_reduce<OperatingCharacteristics>(R, lanes, zero, [&](long long r, OperatingCharacteristics& oc) {
        Rng rng(stream_seed(base_seed, static_cast<std::uint64_t>(r)));
        const auto result = simulate_trial(config, scenario, sampler, rng);
        ++oc.replications;
        if (result.recommendation)
            ++oc.recommendations[static_cast<std::size_t>(*result.recommendation)];
        else
            ++oc.terminations;
        if (result.termination == engine::TerminationReason::safety) ++oc.safety_stops;
        if (result.termination == engine::TerminationReason::futility) ++oc.futility_stops;
        for (std::size_t i = 0; i < result.allocations.size(); ++i) oc.patients[i] += result.allocations[i];
        oc.toxicities += result.toxicities;
        oc.efficacies += result.efficacies;
    });
    total.base_seed = base_seed;
    return total;
}

ComparatorCharacteristics equal_allocation_comparator(const engine::TrialConfig& config, const Scenario& scenario,
                                                      long long R, std::uint64_t base_seed, int lanes,
                                                      ComparatorEstimator estimator) {
    if (R < 1) throw MalformedInputError("replication count must be at least 1");
    engine::validate(config);
    if (config.max_patients % config.regimens != 0)
        throw MalformedInputError("equal allocation requires N divisible by M");
    if (scenario.regimens() != config.regimens)
        throw MalformedInputError("scenario and configuration disagree on the number of regimens");

    struct Pair {
        ComparatorCharacteristics value;
        void merge(const Pair& other) {
            value.unfiltered.merge(other.value.unfiltered);
            value.filtered.merge(other.value.filtered);
        }
    };

    const int per_regimen = config.max_patients / config.regimens;
    const OutcomeSampler sampler(scenario);
    const auto rank = engine::priority_rank(config);
    Pair zero{{OperatingCharacteristics(config.regimens), OperatingCharacteristics(config.regimens)}};

    auto total = parallel_reduce<Pair>(R, lanes, zero, [&](long long r, Pair& acc) {
        Rng rng(stream_seed(base_seed, static_cast<std::uint64_t>(r)));
        int toxicities = 0;
        int efficacies = 0;
        std::optional<int> best_all;
        std::optional<int> best_admissible;
        std::vector<double> deltas(static_cast<std::size_t>(config.regimens));
        auto better = [&](int i, const std::optional<int>& incumbent) {
            return !incumbent || deltas[i] < deltas[*incumbent] ||
                   (deltas[i] == deltas[*incumbent] && rank[i] < rank[*incumbent]);
        };
        for (int i = 0; i < config.regimens; ++i) {
            int x_tox = 0;
            int x_eff = 0;
            for (int p = 0; p < per_regimen; ++p) {
                const auto o = sampler(i, rng);
                if (o.latent_efficacy) ++efficacies;
                if (o.toxicity) {
                    ++x_tox;
                } else if (o.latent_efficacy) {
                    ++x_eff;
                }
            }
            const int n_eff = per_regimen - x_tox;
            toxicities += x_tox;
            const BetaPosterior tox{config.tox_priors[i], x_tox, per_regimen};
            const BetaPosterior eff{config.eff_priors[i], x_eff, n_eff};
            if (estimator == ComparatorEstimator::posterior_mode) {
                deltas[i] = delta_from_rates(posterior_mode(tox), posterior_mode(eff), config.targets);
            } else {
                constexpr double eps = 1e-9;
                const double t = std::clamp(static_cast<double>(x_tox) / per_regimen, eps, 1.0 - eps);
                const double e = std::clamp(n_eff > 0 ? static_cast<double>(x_eff) / n_eff : 0.0, eps, 1.0 - eps);
                deltas[i] = delta_from_rates(t, e, config.targets);
            }
            const bool admissible = beta_tail(tox, config.safety.phi_star) <= config.safety.zeta_N &&
                                    beta_tail(eff, config.futility.psi_star) >= config.futility.xi_N;
            if (better(i, best_all)) best_all = i;
            if (admissible && better(i, best_admissible)) best_admissible = i;
        }
        for (auto* oc : {&acc.value.unfiltered, &acc.value.filtered}) {
            ++oc->replications;
            oc->toxicities += toxicities;
            oc->efficacies += efficacies;
            for (auto& p : oc->patients) p += per_regimen;
        }
        ++acc.value.unfiltered.recommendations[static_cast<std::size_t>(*best_all)];
        if (best_admissible)
            ++acc.value.filtered.recommendations[static_cast<std::size_t>(*best_admissible)];
        else
            ++acc.value.filtered.terminations;
    });
    total.value.unfiltered.base_seed = base_seed;
    total.value.filtered.base_seed = base_seed;
    return total.value;
}

double optimal_proportion(const OperatingCharacteristics& oc, const Scenario& scenario) {
    const auto eval = evaluate_scenario(scenario);
    return eval.optimal ? oc.proportion_recommending({*eval.optimal}) : 0.0;
}

double correct_proportion(const OperatingCharacteristics& oc, const Scenario& scenario) {
    return oc.proportion_recommending(evaluate_scenario(scenario).correct);
}

}  // namespace regfind::sim
