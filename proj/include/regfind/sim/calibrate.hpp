#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "regfind/engine/config.hpp"
#include "regfind/sim/scenario.hpp"

namespace regfind::sim {

struct GridAxis {
    std::string name;
    std::vector<double> values;
};

// Cartesian grid; the first axis varies slowest.
struct CalibrationGrid {
    std::vector<GridAxis> axes;
    std::string objective;

    std::size_t size() const noexcept;
    std::vector<std::vector<double>> points() const;
    // Index of the axis called `name`; throws MalformedInputError if absent.
    std::size_t axis(const std::string& name) const;
};

// nu_i = start + step * i for i = 0..M-1.
std::vector<double> linear_prior_means(double start, double step, int regimens);

// Zero if any value is zero (or negative).
double geometric_mean(const std::vector<double>& values);

struct PriorPoint {
    double start_t = 0, w_t = 0, start_e = 0, w_e = 0;
};

struct PriorSurfaceRow {
    PriorPoint point;
    bool feasible = false;
    std::string reason;              // why the point was rejected
    std::vector<double> optimal;     // per scenario, when feasible
    double objective = 0.0;
};

struct PriorCalibration {
    PriorPoint best;
    double best_objective = 0.0;
    std::vector<PriorSurfaceRow> surface;
};

// Applies a prior point to `base`, keeping its beta parameters.
engine::TrialConfig with_linear_priors(const engine::TrialConfig& base, const PriorPoint& point);

// Grid axes must be start_t, w_t, start_e and w_e. Every feasible point runs
// R replications per scenario with the same base seed. Throws
// InvalidStateError when no point is feasible.
PriorCalibration calibrate_priors(const CalibrationGrid& grid, const std::vector<Scenario>& scenarios,
                                  const engine::TrialConfig& base, long long R, std::uint64_t base_seed,
                                  int lanes = 0);

enum class ConstraintKind { safety, futility };

std::string to_string(ConstraintKind kind);

struct ConstraintSurfaceRow {
    double threshold = 0.0;  // phi_star or psi_star
    double rate = 0.0;       // r_t or r_e
    std::string scenario;
    double correct = 0.0;
    double optimal = 0.0;
    double termination = 0.0;
    double mean_patients = 0.0;
};

// Grid axes must be (phi_star, r_t) for safety or (psi_star, r_e) for
// futility. No point is preferred; the rows are for inspection.
std::vector<ConstraintSurfaceRow> calibrate_constraint(ConstraintKind kind, const CalibrationGrid& grid,
                                                       const std::vector<Scenario>& scenarios,
                                                       const engine::TrialConfig& base, long long R,
                                                       std::uint64_t base_seed, int lanes = 0);

}  // namespace regfind::sim
