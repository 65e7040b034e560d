#include "regfind/sim/report.hpp"

#include <cstdio>
#include <string>

namespace regfind::sim {
namespace {

std::string fixed(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

// Shortest round-trippable form of a grid value.
std::string value(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

std::string pct(double p) { return fixed(100.0 * p, 2); }
std::string num(double x) { return fixed(x, 4); }

}  // namespace

void write_oc_csv(std::ostream& out, const OperatingCharacteristics& oc, const Scenario& scenario, bool header) {
    if (header)
        out << "kind,regimen,recommendation_pct,mean_patients,termination_pct,mean_toxicities,mean_efficacies,"
               "optimal_pct,correct_pct,replications,seed\n";
    const auto rec = oc.recommendation_proportions();
    const auto patients = oc.mean_patients();
    for (std::size_t i = 0; i < rec.size(); ++i)
        out << "regimen," << i + 1 << ',' << pct(rec[i]) << ',' << num(patients[i]) << ",,,,,,,\n";
    out << "summary,,,," << pct(oc.termination_proportion()) << ',' << num(oc.mean_toxicities()) << ','
        << num(oc.mean_efficacies()) << ',' << pct(optimal_proportion(oc, scenario)) << ','
        << pct(correct_proportion(oc, scenario)) << ',' << oc.replications << ',' << oc.base_seed << '\n';
}

void write_prior_surface_csv(std::ostream& out, const PriorCalibration& calibration,
                             const std::vector<Scenario>& scenarios) {
    out << "start_t,w_t,start_e,w_e,feasible,metric,value\n";
    for (const auto& row : calibration.surface) {
        const auto& p = row.point;
        const auto prefix = value(p.start_t) + ',' + value(p.w_t) + ',' + value(p.start_e) + ',' + value(p.w_e) + ',' +
                            (row.feasible ? "1" : "0");
        for (std::size_t s = 0; s < row.optimal.size() && s < scenarios.size(); ++s)
            out << prefix << ",optimal:" << scenarios[s].name << ',' << num(row.optimal[s]) << '\n';
        out << prefix << ",objective," << (row.feasible ? num(row.objective) : "") << '\n';
    }
}

void write_constraint_surface_csv(std::ostream& out, ConstraintKind kind,
                                  const std::vector<ConstraintSurfaceRow>& rows) {
    out << "kind,threshold,rate,scenario,metric,value\n";
    for (const auto& r : rows) {
        const auto prefix = to_string(kind) + ',' + value(r.threshold) + ',' + value(r.rate) + ',' + r.scenario;
        out << prefix << ",correct," << num(r.correct) << '\n';
        out << prefix << ",optimal," << num(r.optimal) << '\n';
        out << prefix << ",termination," << num(r.termination) << '\n';
        out << prefix << ",mean_patients," << num(r.mean_patients) << '\n';
    }
}

}  // namespace regfind::sim
