#include <cmath>
#include <random>
#include <set>

#include "configs.hpp"
#include "doctest.h"
#include "fig2.hpp"
#include "regfind/core/error.hpp"
#include "regfind/engine/decision.hpp"
#include "regfind/sim/simulate.hpp"

using namespace regfind;
using namespace regfind::engine;
using regfind::testing::build_config;

namespace {

// Allocates a cohort at `regimen` and records its toxicity.
int add_cohort(TrialState& state, int regimen, const std::vector<bool>& toxic) {
    const int k = state.allocate_cohort(regimen);
    state.record_cohort_toxicity(k, toxic);
    return k;
}

void record_all_efficacy(TrialState& state, int cohort, bool value) {
    std::vector<PatientEfficacy> outcomes;
    const auto& patients = state.cohorts()[static_cast<std::size_t>(cohort)].patients;
    for (int p = 0; p < static_cast<int>(patients.size()); ++p)
        if (patients[static_cast<std::size_t>(p)].awaiting_efficacy()) outcomes.push_back({p, value});
    state.record_efficacy(cohort, outcomes);
}

TrialConfig two_regimen_config(int N = 20, int c = 1) {
    return build_config(2, N, c, {0.1, 0.2}, {0.6, 0.7}, {{0, 1}});
}

}  // namespace

TEST_SUITE("config") {
    TEST_CASE("valid fixtures") {
        CHECK(config_problems(testing::motivating_config()).empty());
        CHECK(config_problems(testing::illustration_config()).empty());
        CHECK(config_problems(testing::single_agent_config()).empty());
    }

    TEST_CASE("every problem is reported") {
        auto config = testing::motivating_config();
        config.max_patients = 35;
        config.tox_priors[2] = {1.5, 1.0};
        config.coherence_threshold = 0;
        const auto problems = config_problems(config);
        CHECK(problems.size() >= 3);
        try {
            validate(config);
            FAIL("expected a validation error");
        } catch (const ValidationError& e) {
            CHECK(e.problems() == problems);
        }
    }

    TEST_CASE("prior means must increase along chains") {
        auto config = testing::motivating_config();
        std::swap(config.tox_priors[3], config.tox_priors[5]);
        CHECK_FALSE(config_problems(config).empty());
        config = testing::motivating_config();
        config.orderings.push_back({0, 7});
        CHECK_FALSE(config_problems(config).empty());
    }

    TEST_CASE("priority rank follows the first chain") {
        const auto rank = priority_rank(testing::motivating_config());
        // T1, T2, T3, T6 first, then T4, T5.
        CHECK(rank == std::vector<int>{0, 1, 2, 4, 5, 3});
    }

    TEST_CASE("schedules") {
        SafetySchedule s{0.4, 0.3, 0.02};
        CHECK(s.level(0) == 1.0);
        CHECK(s.level(6) == doctest::Approx(0.88));
        CHECK(s.level(100) == 0.3);
        FutilitySchedule f{0.35, 0.5, 0.05};
        CHECK(f.level(0) == 0.0);
        CHECK(f.level(10) == doctest::Approx(0.5));
        CHECK(f.level(30) == 0.5);
    }
}

TEST_SUITE("state") {
    TEST_CASE("toxicity bookkeeping") {
        TrialState state(testing::motivating_config());
        add_cohort(state, 0, {true, false});
        CHECK(state.regimen(0).n_tox == 2);
        CHECK(state.regimen(0).x_tox == 1);
        CHECK(state.regimen(0).pending_eff == 1);
        CHECK(state.regimen(0).ever_tried);
        add_cohort(state, 0, {false, false});
        CHECK(state.regimen(0).pending_eff == 3);
        add_cohort(state, 1, {true, true});
        CHECK(state.regimen(1).pending_eff == 0);
        CHECK(state.last_cohort()->toxicities == 2);
        CHECK(state.last_cohort()->regimen == 1);
        CHECK(state.patients_enrolled() == 6);
    }

    TEST_CASE("efficacy bookkeeping") {
        TrialState state(testing::motivating_config());
        const int k = add_cohort(state, 0, {false, false});
        const std::vector<PatientEfficacy> outcomes{{0, true}, {1, false}};
        state.record_efficacy(k, outcomes);
        CHECK(state.regimen(0).n_eff == 2);
        CHECK(state.regimen(0).x_eff == 1);
        CHECK(state.regimen(0).pending_eff == 0);
        const auto before = state;
        state.record_efficacy(k, std::span<const PatientEfficacy>{});
        CHECK(state == before);
    }

    TEST_CASE("record errors") {
        TrialState state(testing::motivating_config());
        const int k = add_cohort(state, 0, {true, false});
        CHECK_THROWS_AS(state.record_cohort_toxicity(k, {false, false}), DuplicateRecordError);
        const std::vector<PatientEfficacy> toxic_patient{{0, true}};
        CHECK_THROWS_AS(state.record_efficacy(k, toxic_patient), UnknownPatientError);
        const std::vector<PatientEfficacy> out_of_range{{5, true}};
        CHECK_THROWS_AS(state.record_efficacy(k, out_of_range), UnknownPatientError);
        const std::vector<PatientEfficacy> ok{{1, false}};
        state.record_efficacy(k, ok);
        CHECK_THROWS_AS(state.record_efficacy(k, ok), UnknownPatientError);
        CHECK_THROWS_AS(state.record_cohort_toxicity(3, {false, false}), InvalidStateError);
        state.allocate_cohort(1);
        CHECK_THROWS_AS(state.allocate_cohort(1), InvalidStateError);
        CHECK_THROWS_AS(state.record_cohort_toxicity(1, {false}), MalformedInputError);
    }

    TEST_CASE("order invariance of efficacy recording") {
        const auto config = testing::motivating_config();
        TrialState early(config), late(config);
        const std::vector<PatientEfficacy> eff{{0, true}, {1, false}};
        add_cohort(early, 0, {false, false});
        early.record_efficacy(0, eff);
        add_cohort(early, 0, {false, true});

        add_cohort(late, 0, {false, false});
        add_cohort(late, 0, {false, true});
        late.record_efficacy(0, eff);

        CHECK(early.regimens() == late.regimens());
        CHECK(select_next_cohort(early) == select_next_cohort(late));
    }
}

TEST_SUITE("criteria") {
    TEST_CASE("no data gives the priors") {
        TrialState state(testing::illustration_config());
        const auto c = current_criteria(state);
        const std::vector<double> t{.10, .175, .25, .325, .40, .475}, e{.60, .65, .70, .75, .80, .85};
        for (int i = 0; i < 6; ++i) {
            CHECK(c[i].tox_mode == doctest::Approx(t[i]).epsilon(1e-12));
            CHECK(c[i].eff_mode == doctest::Approx(e[i]).epsilon(1e-12));
        }
    }

    TEST_CASE("differing denominators") {
        auto config = testing::motivating_config();
        TrialState state(config);
        const int k = add_cohort(state, 0, {true, false});
        const std::vector<PatientEfficacy> eff{{1, false}};
        state.record_efficacy(k, eff);
        const auto c = current_criteria(state);
        CHECK(std::abs(c[0].tox_mode - 0.366667) < 1e-6);
        CHECK(std::abs(c[0].eff_mode - 0.30) < 1e-12);
    }
}

TEST_SUITE("admissibility") {
    TEST_CASE("untried regimens are admissible") {
        TrialState state(testing::motivating_config());
        CHECK(admissible_set(state).size() == 6);
    }

    TEST_CASE("six toxicities out of six") {
        auto config = build_config(2, 12, 6, {0.1, 0.2}, {0.6, 0.7}, {{0, 1}});
        TrialState state(config);
        add_cohort(state, 0, std::vector<bool>(6, true));
        const auto a = assess(state, ConstraintLevels::interim);
        CHECK(a[0].safety_level == doctest::Approx(0.88));
        CHECK(a[0].tox_tail > 0.88);
        CHECK_FALSE(a[0].safe);
    }

    TEST_CASE("no efficacy in ten") {
        auto config = build_config(2, 20, 10, {0.1, 0.2}, {0.6, 0.7}, {{0, 1}});
        TrialState state(config);
        const int k = add_cohort(state, 0, std::vector<bool>(10, false));
        record_all_efficacy(state, k, false);
        const auto a = assess(state, ConstraintLevels::interim);
        CHECK(a[0].futility_level == doctest::Approx(0.5));
        CHECK(a[0].eff_tail < 0.5);
        CHECK_FALSE(a[0].efficacious);
    }

    TEST_CASE("monotone safety response") {
        std::mt19937_64 rng(41);
        std::uniform_int_distribution<int> coin(0, 1);
        for (int rep = 0; rep < 300; ++rep) {
            auto config = build_config(2, 40, 1, {0.1, 0.2}, {0.6, 0.7}, {{0, 1}});
            TrialState state(config);
            const int n = std::uniform_int_distribution<int>(0, 30)(rng);
            for (int i = 0; i < n; ++i) add_cohort(state, 0, {coin(rng) == 1});
            const bool before = assess(state, ConstraintLevels::interim)[0].safe;
            add_cohort(state, 0, {true});
            const bool after = assess(state, ConstraintLevels::interim)[0].safe;
            REQUIRE(!(after && !before));
        }
    }
}

TEST_SUITE("coherence") {
    TEST_CASE("toxic cohort at T3") {
        TrialState state(testing::motivating_config());
        add_cohort(state, 0, {false, false});
        add_cohort(state, 1, {false, false});
        add_cohort(state, 2, {true, true});
        CHECK_FALSE(coherence_allowed(state, 5));
        CHECK(coherence_allowed(state, 3));
        CHECK(coherence_allowed(state, 4));
        CHECK(coherence_allowed(state, 1));
        CHECK(coherence_allowed(state, 2));
    }

    TEST_CASE("non-toxic cohort at T4") {
        TrialState state(testing::motivating_config());
        add_cohort(state, 0, {false, false});
        add_cohort(state, 1, {false, false});
        add_cohort(state, 3, {false, false});
        CHECK_FALSE(coherence_allowed(state, 1));
        CHECK_FALSE(coherence_allowed(state, 0));
        CHECK(coherence_allowed(state, 4));
        CHECK(coherence_allowed(state, 2));
        CHECK(coherence_allowed(state, 5));
        CHECK(coherence_allowed(state, 3));
    }

    TEST_CASE("first cohort is unconstrained") {
        TrialState state(testing::motivating_config());
        for (int i = 0; i < 6; ++i) CHECK(coherence_allowed(state, i));
    }

    TEST_CASE("no skipping") {
        TrialState state(testing::motivating_config());
        CHECK(no_skip_allowed(state, 0));
        for (int i = 1; i < 6; ++i) CHECK_FALSE(no_skip_allowed(state, i));
        add_cohort(state, 0, {false, false});
        CHECK(no_skip_allowed(state, 1));
        CHECK_FALSE(no_skip_allowed(state, 3));
        add_cohort(state, 1, {false, false});
        CHECK(no_skip_allowed(state, 2));
        CHECK(no_skip_allowed(state, 3));
        CHECK(no_skip_allowed(state, 4));
        CHECK_FALSE(no_skip_allowed(state, 5));
        add_cohort(state, 3, {false, false});
        // T6 follows T3, T4 and T5 in the three chains.
        CHECK_FALSE(no_skip_allowed(state, 5));
    }
}

TEST_SUITE("selection") {
    TEST_CASE("fresh trial starts at T1") {
        for (const auto& config : {testing::motivating_config(), testing::illustration_config()}) {
            TrialState state(config);
            const auto trace = select_next_cohort(state);
            REQUIRE(trace.chosen);
            CHECK(*trace.chosen == 0);
            CHECK_FALSE(trace.termination);
        }
    }

    TEST_CASE("chosen regimen has every flag set") {
        std::mt19937_64 rng(51);
        std::bernoulli_distribution tox(0.25), eff(0.4);
        for (int rep = 0; rep < 200; ++rep) {
            std::vector<std::vector<sim::PatientOutcome>> outcomes(18);
            for (auto& cohort : outcomes)
                for (int p = 0; p < 2; ++p) cohort.push_back({tox(rng), eff(rng)});
            std::vector<DecisionTrace> traces;
            sim::replay_trial(testing::motivating_config(), outcomes, &traces);
            for (const auto& t : traces) {
                REQUIRE(t.chosen.has_value() != t.termination.has_value());
                if (t.chosen) REQUIRE(t.regimens[*t.chosen].allowed());
            }
        }
    }

    TEST_CASE("unsafe best regimen is skipped") {
        auto config = build_config(2, 20, 4, {0.1, 0.2}, {0.6, 0.7}, {{0, 1}});
        config.safety = {0.4, 0.3, 0.1};
        TrialState state(config);
        add_cohort(state, 0, {false, false, false, false});
        record_all_efficacy(state, 0, false);
        add_cohort(state, 1, {true, true, false, false});
        const std::vector<PatientEfficacy> eff{{2, true}, {3, true}};
        state.record_efficacy(1, eff);
        const auto a = assess(state, ConstraintLevels::interim);
        REQUIRE(a[1].delta < a[0].delta);
        REQUIRE_FALSE(a[1].safe);
        REQUIRE(a[0].allowed());
        CHECK(*select_next_cohort(state).chosen == 0);
    }

    TEST_CASE("termination for safety") {
        auto config = build_config(2, 12, 6, {0.1, 0.2}, {0.6, 0.7}, {{0, 1}});
        TrialState state(config);
        add_cohort(state, 0, std::vector<bool>(6, true));
        const auto trace = select_next_cohort(state);
        CHECK_FALSE(trace.chosen);
        REQUIRE(trace.termination);
        CHECK(*trace.termination == TerminationReason::safety);
    }

    TEST_CASE("termination for futility") {
        auto config = build_config(2, 40, 10, {0.1, 0.2}, {0.6, 0.7}, {{0, 1}});
        TrialState state(config);
        record_all_efficacy(state, add_cohort(state, 0, std::vector<bool>(10, false)), false);
        record_all_efficacy(state, add_cohort(state, 1, std::vector<bool>(10, false)), false);
        const auto trace = select_next_cohort(state);
        CHECK_FALSE(trace.chosen);
        REQUIRE(trace.termination);
        CHECK(*trace.termination == TerminationReason::futility);
    }

    TEST_CASE("selection after termination or exhaustion") {
        TrialState state(two_regimen_config(2, 1));
        add_cohort(state, 0, {false});
        add_cohort(state, 0, {false});
        CHECK_THROWS_AS(select_next_cohort(state), InvalidStateError);
        TrialState stopped(two_regimen_config());
        stopped.terminate(TerminationReason::safety);
        CHECK_THROWS_AS(select_next_cohort(stopped), InvalidStateError);
        CHECK_FALSE(final_recommendation(stopped));
    }

    TEST_CASE("final recommendation") {
        TrialState state(two_regimen_config(2, 1));
        CHECK_THROWS_AS(final_recommendation(state), InvalidStateError);
        // Equal data on both regimens: the lower-ordered one wins the tie.
        auto config = build_config(2, 4, 2, {0.1, 0.2}, {0.6, 0.7}, {{0, 1}});
        config.tox_priors[1] = config.tox_priors[0];
        config.eff_priors[1] = config.eff_priors[0];
        config.orderings.clear();
        TrialState tie(config);
        record_all_efficacy(tie, add_cohort(tie, 1, {false, false}), true);
        record_all_efficacy(tie, add_cohort(tie, 0, {false, false}), true);
        REQUIRE(current_criteria(tie)[0].delta == current_criteria(tie)[1].delta);
        CHECK(*final_recommendation(tie) == 0);
    }
}

TEST_SUITE("randomisation") {
    TEST_CASE("weights") {
        const std::vector<double> d{0.5, 1.0, 3.0};
        const std::vector<int> all{0, 1, 2};
        const auto w = randomization_weights(d, all);
        CHECK(w[0] == doctest::Approx(2.0 / 3.0));
        CHECK(w[1] == doctest::Approx(1.0 / 3.0));
        CHECK(w[2] == 0.0);
        const std::vector<double> zero{0.7, 0.0, 0.2};
        CHECK(randomization_weights(zero, all) == std::vector<double>{0.0, 1.0, 0.0});
        const std::vector<int> one{2};
        CHECK(randomization_weights(d, one) == std::vector<double>{0.0, 0.0, 1.0});
        const std::vector<int> none;
        CHECK_THROWS_AS(randomization_weights(d, none), InvalidStateError);
    }

    TEST_CASE("single candidate is always drawn") {
        auto config = testing::motivating_config();
        config.rule = AllocationRule::we_randomized;
        TrialState state(config);
        Rng rng(3);
        for (int i = 0; i < 1000; ++i) REQUIRE(*select_next_cohort_randomized(state, rng).chosen == 0);
    }

    TEST_CASE("draw frequencies follow the weights") {
        // No chains: both regimens are candidates from the start.
        auto config = build_config(2, 10, 1, {0.1, 0.3}, {0.6, 0.5}, {});
        config.rule = AllocationRule::we_randomized;
        TrialState state(config);
        Rng probe(0);
        const auto trace = select_next_cohort_randomized(state, probe);
        REQUIRE(trace.weights.size() == 2);
        const auto& a = trace.regimens;
        CHECK(trace.weights[0] == doctest::Approx((1 / a[0].delta) / (1 / a[0].delta + 1 / a[1].delta)));
        Rng rng(stream_seed(config.rng_seed, 99));
        int first = 0;
        const int draws = 100000;
        for (int i = 0; i < draws; ++i) first += *select_next_cohort_randomized(state, rng).chosen == 0;
        CHECK(std::abs(static_cast<double>(first) / draws - trace.weights[0]) < 0.01);
    }

    TEST_CASE("exactly one value is consumed") {
        auto config = testing::motivating_config();
        config.rule = AllocationRule::we_randomized;
        TrialState state(config);
        Rng a(17), b(17);
        select_next_cohort_randomized(state, a);
        b();
        CHECK(a() == b());
    }

    TEST_CASE("zero trade-off is always chosen") {
        auto config = build_config(2, 10, 1, {0.1, 0.3}, {0.6, 0.5}, {});
        config.targets = TradeoffTargets(0.3, 0.5);
        config.rule = AllocationRule::we_randomized;
        TrialState state(config);
        for (double u : {0.0, 0.3, 0.999999}) CHECK(*select_next_cohort_with_draw(state, u).chosen == 1);
    }
}

TEST_SUITE("illustrated trial") {
    // Drives the state along the illustrated allocation with the delayed
    // efficacy timeline and compares each decision with the engine.
    TEST_CASE("first twelve cohorts") {
        for (const auto& config : {testing::without_constraints(testing::illustration_config()),
                                   testing::illustration_config()}) {
            std::vector<DecisionTrace> traces;
            const auto result = sim::replay_trial(config, testing::fig2_outcomes(), &traces);
            const auto expected = testing::fig2_allocations();
            REQUIRE(result.state.cohorts().size() == 18);
            for (int k = 0; k < 12; ++k) CHECK(result.state.cohorts()[k].regimen == expected[k]);
        }
    }

    TEST_CASE("cohort 6 goes to T4 after two toxicities at T3") {
        const auto config = testing::illustration_config();
        TrialState state(config);
        const auto outcomes = testing::fig2_outcomes();
        const auto expected = testing::fig2_allocations();
        for (int k = 0; k < 5; ++k) {
            REQUIRE(*select_next_cohort(state).chosen == expected[k]);
            std::vector<bool> toxic;
            for (const auto& o : outcomes[k]) toxic.push_back(o.toxicity);
            add_cohort(state, expected[k], toxic);
            if (k > 0) {
                std::vector<PatientEfficacy> eff;
                for (int p = 0; p < 2; ++p)
                    if (!outcomes[k - 1][p].toxicity) eff.push_back({p, outcomes[k - 1][p].latent_efficacy});
                state.record_efficacy(k - 1, eff);
            }
        }
        CHECK(state.last_cohort()->toxicities == 2);
        CHECK(*select_next_cohort(state).chosen == 3);
    }

    TEST_CASE("cohort 13 is a near tie between T4 and T5") {
        // T4: 6 patients, no toxicity, 1 efficacy in 6. T5: 6 patients,
        // 1 toxicity, 1 efficacy in 5. The plug-in trade-offs differ by < 1%.
        const auto config = testing::without_constraints(testing::illustration_config());
        std::vector<DecisionTrace> traces;
        sim::replay_trial(config, testing::fig2_outcomes(), &traces);
        REQUIRE(traces.size() >= 13);
        const auto& a = traces[12].regimens;
        CHECK(std::abs(a[3].delta - a[4].delta) < 0.01 * a[3].delta);
        CHECK(a[3].delta == doctest::Approx(3.0314).epsilon(1e-3));
        CHECK(a[4].delta == doctest::Approx(3.0025).epsilon(1e-3));
    }

    TEST_CASE("final recommendation on the illustrated data is T4") {
        for (const auto& config : {testing::without_constraints(testing::illustration_config()),
                                   testing::illustration_config()}) {
            TrialState state(config);
            const auto outcomes = testing::fig2_outcomes();
            const auto regimens = testing::fig2_allocations();
            for (int k = 0; k < 18; ++k) {
                std::vector<bool> toxic;
                for (const auto& o : outcomes[k]) toxic.push_back(o.toxicity);
                add_cohort(state, regimens[k], toxic);
                if (k > 0) {
                    std::vector<PatientEfficacy> eff;
                    for (int p = 0; p < 2; ++p)
                        if (!outcomes[k - 1][p].toxicity) eff.push_back({p, outcomes[k - 1][p].latent_efficacy});
                    state.record_efficacy(k - 1, eff);
                }
            }
            std::vector<PatientEfficacy> eff;
            for (int p = 0; p < 2; ++p)
                if (!outcomes[17][p].toxicity) eff.push_back({p, outcomes[17][p].latent_efficacy});
            state.record_efficacy(17, eff);
            REQUIRE(state.exhausted());
            CHECK(*final_recommendation(state) == 3);
        }
    }
}

TEST_SUITE("trial properties") {
    TEST_CASE("coherence, no-skip and budget over simulated trials") {
        const auto config = testing::motivating_config();
        std::mt19937_64 pick(61);
        std::uniform_real_distribution<double> u(0.02, 0.9);
        Rng rng(62);
        for (int rep = 0; rep < 1000; ++rep) {
            sim::Scenario s{"random", {}, {}};
            for (int i = 0; i < 6; ++i) {
                s.alpha_t.push_back(u(pick));
                s.alpha_e.push_back(u(pick));
            }
            auto trial_config = config;
            if (rep % 2) trial_config.rule = AllocationRule::we_randomized;
            const auto result = sim::simulate_trial(trial_config, s, rng);
            const auto& log = result.state.cohorts();
            REQUIRE(result.state.patients_enrolled() <= config.max_patients);
            REQUIRE(result.recommendation.has_value() + result.termination.has_value() <= 1);
            std::set<int> tried;
            for (std::size_t k = 0; k < log.size(); ++k) {
                const int r = log[k].regimen;
                for (const auto& chain : config.orderings) {
                    const auto at = std::find(chain.begin(), chain.end(), r);
                    if (at == chain.end()) continue;
                    for (auto below = chain.begin(); below != at; ++below) REQUIRE(tried.count(*below) == 1);
                }
                tried.insert(r);
                if (k == 0) continue;
                const int from = log[k - 1].regimen;
                const bool toxic = log[k - 1].toxicities() >= config.coherence_threshold;
                for (const auto& chain : config.orderings) {
                    const auto pf = std::find(chain.begin(), chain.end(), from);
                    const auto pt = std::find(chain.begin(), chain.end(), r);
                    if (pf == chain.end() || pt == chain.end()) continue;
                    if (toxic) REQUIRE_FALSE(pt > pf);
                    else REQUIRE_FALSE(pt < pf);
                }
            }
            for (const auto& reg : result.state.regimens()) {
                REQUIRE(reg.x_tox <= reg.n_tox);
                REQUIRE(reg.x_eff <= reg.n_eff);
                REQUIRE(reg.n_eff + reg.pending_eff <= reg.n_tox - reg.x_tox);
            }
        }
    }

    TEST_CASE("determinism") {
        auto config = testing::motivating_config();
        config.rule = AllocationRule::we_randomized;
        for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
            Rng a(seed), b(seed);
            const auto x = sim::simulate_trial(config, testing::illustration_scenario(), a);
            const auto y = sim::simulate_trial(config, testing::illustration_scenario(), b);
            CHECK(x.state == y.state);
            CHECK(x.recommendation == y.recommendation);
        }
    }
}
