#pragma once

#include <ostream>
#include <vector>

#include "regfind/sim/calibrate.hpp"
#include "regfind/sim/replicate.hpp"

namespace regfind::sim {

// Columns, in order:
//   kind,regimen,recommendation_pct,mean_patients,termination_pct,
//   mean_toxicities,mean_efficacies,optimal_pct,correct_pct,replications,seed
// One "regimen" row per regimen (1-based) filling the first four columns,
// then one "summary" row filling the rest. Unused cells are empty.
void write_oc_csv(std::ostream& out, const OperatingCharacteristics& oc, const Scenario& scenario,
                  bool header = true);

// Long format: start_t,w_t,start_e,w_e,feasible,metric,value with one row
// per scenario ("optimal:<name>") and one "objective" row per point.
void write_prior_surface_csv(std::ostream& out, const PriorCalibration& calibration,
                             const std::vector<Scenario>& scenarios);

// Long format: kind,threshold,rate,scenario,metric,value where metric is one
// of correct, optimal, termination, mean_patients.
void write_constraint_surface_csv(std::ostream& out, ConstraintKind kind,
                                  const std::vector<ConstraintSurfaceRow>& rows);

}  // namespace regfind::sim
