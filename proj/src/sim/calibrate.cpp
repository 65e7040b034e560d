#include "regfind/sim/calibrate.hpp"

#include <algorithm>
#include <cmath>

#include "regfind/core/error.hpp"
#include "regfind/engine/decision.hpp"
#include "regfind/sim/replicate.hpp"

namespace regfind::sim {
namespace {

void require_nonempty(const CalibrationGrid& grid) {
    if (grid.axes.empty()) throw MalformedInputError("calibration grid has no axes");
    for (const auto& a : grid.axes)
        if (a.values.empty()) throw MalformedInputError("calibration axis '" + a.name + "' has no values");
}

// Empty when the point is usable, otherwise the reason.
std::string prior_infeasibility(const engine::TrialConfig& config) {
    for (std::size_t i = 0; i < config.tox_priors.size(); ++i) {
        if (!config.tox_priors[i].valid() || !config.eff_priors[i].valid())
            return "prior mean outside (0, beta) at regimen " + std::to_string(i + 1);
    }
    if (auto problems = engine::config_problems(config); !problems.empty()) return problems.front();
    // With no data the design must start at the lowest regimen.
    const engine::TrialState state(config);
    const auto criteria = engine::current_criteria(state);
    const auto rank = engine::priority_rank(config);
    const int first = static_cast<int>(std::find(rank.begin(), rank.end(), 0) - rank.begin());
    for (int i = 0; i < config.regimens; ++i) {
        if (i == first) continue;
        if (criteria[i].delta <= criteria[first].delta) return "prior does not start at the lowest regimen";
    }
    return {};
}

}  // namespace

std::size_t CalibrationGrid::size() const noexcept {
    if (axes.empty()) return 0;
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.values.size();
    return n;
}

std::vector<std::vector<double>> CalibrationGrid::points() const {
    std::vector<std::vector<double>> out;
    const std::size_t n = size();
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<double> point(axes.size());
        std::size_t rest = k;
        for (std::size_t a = axes.size(); a-- > 0;) {
            point[a] = axes[a].values[rest % axes[a].values.size()];
            rest /= axes[a].values.size();
        }
        out.push_back(std::move(point));
    }
    return out;
}

std::size_t CalibrationGrid::axis(const std::string& name) const {
    for (std::size_t a = 0; a < axes.size(); ++a)
        if (axes[a].name == name) return a;
    throw MalformedInputError("calibration grid lacks axis '" + name + "'");
}

std::vector<double> linear_prior_means(double start, double step, int regimens) {
    std::vector<double> out;
    for (int i = 0; i < regimens; ++i) out.push_back(start + step * i);
    return out;
}

double geometric_mean(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    double log_sum = 0.0;
    for (double v : values) {
        if (!(v > 0.0)) return 0.0;
        log_sum += std::log(v);
    }
    return std::exp(log_sum / static_cast<double>(values.size()));
}

engine::TrialConfig with_linear_priors(const engine::TrialConfig& base, const PriorPoint& point) {
    auto config = base;
    const auto tox = linear_prior_means(point.start_t, point.w_t, base.regimens);
    const auto eff = linear_prior_means(point.start_e, point.w_e, base.regimens);
    config.tox_priors.resize(static_cast<std::size_t>(base.regimens), BetaPrior{0.5, 1.0});
    config.eff_priors.resize(static_cast<std::size_t>(base.regimens), BetaPrior{0.5, 1.0});
    for (int i = 0; i < base.regimens; ++i) {
        // The grid gives prior means nu / beta.
        config.tox_priors[i].nu = tox[i] * config.tox_priors[i].beta;
        config.eff_priors[i].nu = eff[i] * config.eff_priors[i].beta;
    }
    return config;
}

PriorCalibration calibrate_priors(const CalibrationGrid& grid, const std::vector<Scenario>& scenarios,
                                  const engine::TrialConfig& base, long long R, std::uint64_t base_seed, int lanes) {
    require_nonempty(grid);
    if (scenarios.empty()) throw MalformedInputError("prior calibration needs at least one scenario");
    for (const auto& s : scenarios)
        if (!evaluate_scenario(s).optimal)
            throw MalformedInputError("scenario '" + s.name + "' has no optimal regimen");
    const std::size_t at = grid.axis("start_t"), wt = grid.axis("w_t"), ae = grid.axis("start_e"),
                      we = grid.axis("w_e");

    PriorCalibration result;
    bool any_feasible = false;
    for (const auto& p : grid.points()) {
        PriorSurfaceRow row;
        row.point = {p[at], p[wt], p[ae], p[we]};
        const auto config = with_linear_priors(base, row.point);
        row.reason = prior_infeasibility(config);
        row.feasible = row.reason.empty();
        if (row.feasible) {
            for (const auto& s : scenarios)
                row.optimal.push_back(optimal_proportion(run_replications(config, s, R, base_seed, lanes), s));
            row.objective = geometric_mean(row.optimal);
            if (!any_feasible || row.objective > result.best_objective) {
                result.best = row.point;
                result.best_objective = row.objective;
            }
            any_feasible = true;
        }
        result.surface.push_back(std::move(row));
    }
    if (!any_feasible) throw InvalidStateError("no feasible point in the prior grid");
    return result;
}

std::string to_string(ConstraintKind kind) { return kind == ConstraintKind::safety ? "safety" : "futility"; }

std::vector<ConstraintSurfaceRow> calibrate_constraint(ConstraintKind kind, const CalibrationGrid& grid,
                                                       const std::vector<Scenario>& scenarios,
                                                       const engine::TrialConfig& base, long long R,
                                                       std::uint64_t base_seed, int lanes) {
    require_nonempty(grid);
    const bool safety = kind == ConstraintKind::safety;
    const std::size_t th = grid.axis(safety ? "phi_star" : "psi_star");
    const std::size_t ra = grid.axis(safety ? "r_t" : "r_e");

    std::vector<ConstraintSurfaceRow> rows;
    for (const auto& p : grid.points()) {
        auto config = base;
        if (safety) {
            config.safety.phi_star = p[th];
            config.safety.r_t = p[ra];
        } else {
            config.futility.psi_star = p[th];
            config.futility.r_e = p[ra];
        }
        for (const auto& s : scenarios) {
            const auto oc = run_replications(config, s, R, base_seed, lanes);
            ConstraintSurfaceRow row{p[th], p[ra], s.name};
            row.correct = correct_proportion(oc, s);
            row.optimal = optimal_proportion(oc, s);
            row.termination = oc.termination_proportion();
            for (double m : oc.mean_patients()) row.mean_patients += m;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

}  // namespace regfind::sim
