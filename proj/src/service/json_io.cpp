#include "regfind/service/json_io.hpp"

#include <fstream>
#include <sstream>

#include "regfind/core/error.hpp"

namespace regfind::service {
namespace {

const Json& field(const Json& j, const char* name) {
    if (!j.is_object()) throw MalformedInputError(std::string("expected an object holding '") + name + "'");
    auto it = j.find(name);
    if (it == j.end()) throw MalformedInputError(std::string("missing field '") + name + "'");
    return *it;
}

template <class T>
T get(const Json& j, const char* name) {
    const auto& v = field(j, name);
    try {
        return v.get<T>();
    } catch (const nlohmann::json::exception&) {
        throw MalformedInputError(std::string("field '") + name + "' has the wrong type");
    }
}

template <class T>
T get_or(const Json& j, const char* name, T fallback) {
    if (!j.is_object() || !j.contains(name)) return fallback;
    return get<T>(j, name);
}

std::vector<BetaPrior> priors_from_json(const Json& j, const char* name) {
    const auto& arr = field(j, name);
    if (!arr.is_array()) throw MalformedInputError(std::string("field '") + name + "' must be an array");
    std::vector<BetaPrior> out;
    for (const auto& p : arr) out.push_back({get<double>(p, "nu"), get<double>(p, "beta")});
    return out;
}

Json priors_to_json(const std::vector<BetaPrior>& priors) {
    Json arr = Json::array();
    for (const auto& p : priors) arr.push_back({{"nu", p.nu}, {"beta", p.beta}});
    return arr;
}

engine::AllocationRule rule_from_string(const std::string& s) {
    if (s == "WE") return engine::AllocationRule::we;
    if (s == "WE_R") return engine::AllocationRule::we_randomized;
    throw MalformedInputError("unknown allocation rule '" + s + "'");
}

engine::TerminationReason reason_from_string(const std::string& s) {
    if (s == "safety") return engine::TerminationReason::safety;
    if (s == "futility") return engine::TerminationReason::futility;
    throw MalformedInputError("unknown termination reason '" + s + "'");
}

Json optional_regimen(const std::optional<int>& r) { return r ? Json(*r + 1) : Json(nullptr); }

}  // namespace

Json to_json(const engine::TrialConfig& c) {
    Json orderings = Json::array();
    for (const auto& chain : c.orderings) {
        Json arr = Json::array();
        for (int r : chain) arr.push_back(r + 1);
        orderings.push_back(arr);
    }
    return {
        {"regimens", c.regimens},
        {"max_patients", c.max_patients},
        {"cohort_size", c.cohort_size},
        {"targets", {{"gamma_t", c.targets.gamma_t()}, {"gamma_e", c.targets.gamma_e()}}},
        {"tox_priors", priors_to_json(c.tox_priors)},
        {"eff_priors", priors_to_json(c.eff_priors)},
        {"orderings", orderings},
        {"coherence_threshold", c.coherence_threshold},
        {"safety", {{"phi_star", c.safety.phi_star}, {"zeta_N", c.safety.zeta_N}, {"r_t", c.safety.r_t}}},
        {"futility", {{"psi_star", c.futility.psi_star}, {"xi_N", c.futility.xi_N}, {"r_e", c.futility.r_e}}},
        {"rule", engine::to_string(c.rule)},
        {"rng_seed", c.rng_seed},
    };
}

engine::TrialConfig config_from_json(const Json& j) {
    engine::TrialConfig c;
    c.regimens = get<int>(j, "regimens");
    c.max_patients = get<int>(j, "max_patients");
    c.cohort_size = get<int>(j, "cohort_size");
    const auto& t = field(j, "targets");
    try {
        c.targets = TradeoffTargets(get<double>(t, "gamma_t"), get<double>(t, "gamma_e"));
    } catch (const DomainError& e) {
        throw ValidationError({std::string("targets: ") + e.what()});
    }
    c.tox_priors = priors_from_json(j, "tox_priors");
    c.eff_priors = priors_from_json(j, "eff_priors");
    const auto& orderings = field(j, "orderings");
    if (!orderings.is_array()) throw MalformedInputError("field 'orderings' must be an array");
    for (const auto& chain : orderings) {
        if (!chain.is_array()) throw MalformedInputError("each ordering must be an array");
        engine::PartialOrdering out;
        for (const auto& r : chain) {
            if (!r.is_number_integer()) throw MalformedInputError("ordering entries must be integers");
            out.push_back(r.get<int>() - 1);
        }
        c.orderings.push_back(std::move(out));
    }
    c.coherence_threshold = get<int>(j, "coherence_threshold");
    const auto& s = field(j, "safety");
    c.safety = {get<double>(s, "phi_star"), get<double>(s, "zeta_N"), get<double>(s, "r_t")};
    const auto& f = field(j, "futility");
    c.futility = {get<double>(f, "psi_star"), get<double>(f, "xi_N"), get<double>(f, "r_e")};
    c.rule = rule_from_string(get_or<std::string>(j, "rule", "WE"));
    c.rng_seed = get_or<std::uint64_t>(j, "rng_seed", 0);
    return c;
}

Json to_json(const sim::Scenario& s) {
    Json j = {{"name", s.name},         {"alpha_t", s.alpha_t},     {"alpha_e", s.alpha_e},
              {"rho", s.rho},           {"phi_bound", s.phi_bound}, {"psi_bound", s.psi_bound},
              {"pi_early", s.pi_early}};
    if (s.plateau_tolerance != 0.0) j["plateau_tolerance"] = s.plateau_tolerance;
    return j;
}

sim::Scenario scenario_from_json(const Json& j) {
    sim::Scenario s;
    s.name = get_or<std::string>(j, "name", "");
    s.alpha_t = get<std::vector<double>>(j, "alpha_t");
    s.alpha_e = get<std::vector<double>>(j, "alpha_e");
    s.rho = get_or<double>(j, "rho", 0.0);
    s.phi_bound = get_or<double>(j, "phi_bound", 0.35);
    s.psi_bound = get_or<double>(j, "psi_bound", 0.20);
    s.pi_early = get_or<double>(j, "pi_early", 0.0);
    s.plateau_tolerance = get_or<double>(j, "plateau_tolerance", 0.0);
    sim::validate(s);
    return s;
}

Json to_json(const sim::CalibrationGrid& grid) {
    Json axes = Json::array();
    for (const auto& a : grid.axes) axes.push_back({{"name", a.name}, {"values", a.values}});
    return {{"objective", grid.objective}, {"axes", axes}};
}

sim::CalibrationGrid grid_from_json(const Json& j) {
    sim::CalibrationGrid grid;
    grid.objective = get_or<std::string>(j, "objective", "");
    const auto& axes = field(j, "axes");
    if (!axes.is_array()) throw MalformedInputError("field 'axes' must be an array");
    for (const auto& a : axes) grid.axes.push_back({get<std::string>(a, "name"), get<std::vector<double>>(a, "values")});
    return grid;
}

Json to_json(const engine::RegimenAssessment& a, int regimen) {
    return {
        {"regimen", regimen + 1},
        {"tox_mode", a.tox_mode},
        {"eff_mode", a.eff_mode},
        {"delta", a.delta},
        {"tox_tail", a.tox_tail},
        {"eff_tail", a.eff_tail},
        {"safety_level", a.safety_level},
        {"futility_level", a.futility_level},
        {"safe", a.safe},
        {"efficacious", a.efficacious},
        {"coherent", a.coherent},
        {"no_skip", a.no_skip},
        {"admissible", a.admissible()},
        {"allowed", a.allowed()},
    };
}

Json to_json(const engine::DecisionTrace& trace) {
    Json regimens = Json::array();
    for (std::size_t i = 0; i < trace.regimens.size(); ++i)
        regimens.push_back(to_json(trace.regimens[i], static_cast<int>(i)));
    return {
        {"regimens", regimens},
        {"chosen", optional_regimen(trace.chosen)},
        {"termination", trace.termination ? Json(engine::to_string(*trace.termination)) : Json(nullptr)},
        {"weights", trace.weights},
        {"draw", trace.draw ? Json(*trace.draw) : Json(nullptr)},
    };
}

engine::DecisionTrace trace_from_json(const Json& j) {
    engine::DecisionTrace trace;
    for (const auto& r : field(j, "regimens")) {
        engine::RegimenAssessment a;
        a.tox_mode = get<double>(r, "tox_mode");
        a.eff_mode = get<double>(r, "eff_mode");
        a.delta = get<double>(r, "delta");
        a.tox_tail = get<double>(r, "tox_tail");
        a.eff_tail = get<double>(r, "eff_tail");
        a.safety_level = get<double>(r, "safety_level");
        a.futility_level = get<double>(r, "futility_level");
        a.safe = get<bool>(r, "safe");
        a.efficacious = get<bool>(r, "efficacious");
        a.coherent = get<bool>(r, "coherent");
        a.no_skip = get<bool>(r, "no_skip");
        trace.regimens.push_back(a);
    }
    if (const auto& c = field(j, "chosen"); !c.is_null()) trace.chosen = c.get<int>() - 1;
    if (const auto& t = field(j, "termination"); !t.is_null()) trace.termination = reason_from_string(t.get<std::string>());
    trace.weights = get<std::vector<double>>(j, "weights");
    if (const auto& d = field(j, "draw"); !d.is_null()) trace.draw = d.get<double>();
    return trace;
}

Json to_json(const engine::TrialState& state) {
    Json regimens = Json::array();
    for (std::size_t i = 0; i < state.regimens().size(); ++i) {
        const auto& r = state.regimens()[i];
        regimens.push_back({{"regimen", i + 1},
                            {"n_tox", r.n_tox},
                            {"x_tox", r.x_tox},
                            {"n_eff", r.n_eff},
                            {"x_eff", r.x_eff},
                            {"pending_eff", r.pending_eff},
                            {"ever_tried", r.ever_tried}});
    }
    Json cohorts = Json::array();
    for (std::size_t k = 0; k < state.cohorts().size(); ++k) {
        const auto& c = state.cohorts()[k];
        Json patients = Json::array();
        for (std::size_t p = 0; p < c.patients.size(); ++p) {
            const auto& pr = c.patients[p];
            patients.push_back({{"patient", p + 1},
                                {"toxicity", pr.toxicity ? Json(*pr.toxicity) : Json(nullptr)},
                                {"efficacy", pr.efficacy ? Json(*pr.efficacy) : Json(nullptr)},
                                {"awaiting_efficacy", pr.awaiting_efficacy()}});
        }
        cohorts.push_back({{"cohort", k + 1}, {"regimen", c.regimen + 1}, {"patients", patients}});
    }
    return {
        {"patients_enrolled", state.patients_enrolled()},
        {"pending_efficacy", state.pending_efficacy()},
        {"termination", state.termination() ? Json(engine::to_string(*state.termination())) : Json(nullptr)},
        {"regimens", regimens},
        {"cohorts", cohorts},
    };
}

Json to_json(const sim::OperatingCharacteristics& oc) {
    return {
        {"replications", oc.replications},
        {"seed", oc.base_seed},
        {"recommendation", oc.recommendation_proportions()},
        {"mean_patients", oc.mean_patients()},
        {"termination", oc.termination_proportion()},
        {"safety_stops", oc.safety_stops},
        {"futility_stops", oc.futility_stops},
        {"mean_toxicities", oc.mean_toxicities()},
        {"mean_efficacies", oc.mean_efficacies()},
    };
}

Json parse(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw MalformedInputError(std::string("invalid JSON: ") + e.what());
    }
}

Json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedInputError("cannot read '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse(text.str());
}

}  // namespace regfind::service
