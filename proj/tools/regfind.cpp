#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "conduct.hpp"
#include "regfind/service/api.hpp"
#include "regfind/sim/report.hpp"

using namespace regfind;
using namespace regfind::service;

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw MalformedInputError("cannot write '" + path + "'");
    return out;
}

std::vector<sim::Scenario> load_scenarios(const std::vector<std::string>& paths) {
    std::vector<sim::Scenario> out;
    for (const auto& p : paths) out.push_back(scenario_from_json(read_file(p)));
    return out;
}

sim::ComparatorEstimator estimator_of(const std::string& s) {
    if (s == "posterior_mode") return sim::ComparatorEstimator::posterior_mode;
    if (s == "empirical") return sim::ComparatorEstimator::empirical;
    throw MalformedInputError("estimator must be posterior_mode or empirical");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Regimen-finding design: simulation, calibration and trial conduct"};
    app.require_subcommand(1);

    std::string config_path, scenario_path, out_path, grid_path, kind, session_path, addr = "127.0.0.1:8080",
                                                                                     store_dir, estimator = "empirical";
    std::vector<std::string> scenario_paths;
    long long reps = 10000;
    std::uint64_t seed = 1;
    int threads = 0;
    std::optional<std::string> new_config;

    auto* simulate = app.add_subcommand("simulate", "operating characteristics of one scenario");
    simulate->add_option("--config", config_path, "trial configuration JSON")->required();
    simulate->add_option("--scenario", scenario_path, "scenario JSON")->required();
    simulate->add_option("--reps", reps, "replications")->check(CLI::PositiveNumber);
    simulate->add_option("--seed", seed, "base seed");
    simulate->add_option("--out", out_path, "CSV output")->required();
    simulate->add_option("--threads", threads, "worker lanes (0 = all cores)");

    auto* compare = app.add_subcommand("compare", "equal-allocation comparator");
    compare->add_option("--config", config_path)->required();
    compare->add_option("--scenario", scenario_path)->required();
    compare->add_option("--reps", reps)->check(CLI::PositiveNumber);
    compare->add_option("--seed", seed);
    compare->add_option("--estimator", estimator, "posterior_mode or empirical");
    compare->add_option("--out", out_path, "prefix; writes <out>_unfiltered.csv and <out>_filtered.csv")->required();
    compare->add_option("--threads", threads);

    auto* calibrate = app.add_subcommand("calibrate", "grid search over priors or a constraint");
    calibrate->add_option("--kind", kind, "priors, safety or futility")
        ->required()
        ->check(CLI::IsMember({"priors", "safety", "futility"}));
    calibrate->add_option("--grid", grid_path, "grid JSON")->required();
    calibrate->add_option("--config", config_path, "base configuration JSON")->required();
    calibrate->add_option("--scenario", scenario_paths, "scenario JSON (repeatable)")->required();
    calibrate->add_option("--reps", reps)->check(CLI::PositiveNumber);
    calibrate->add_option("--seed", seed);
    calibrate->add_option("--out", out_path, "long-format CSV output")->required();
    calibrate->add_option("--threads", threads);

    auto* conduct = app.add_subcommand("conduct", "interactive conduct of a trial stored in one file");
    conduct->add_option("--session", session_path, "session JSON file")->required();
    conduct->add_option("--new", new_config, "create the session from this configuration");

    auto* serve_cmd = app.add_subcommand("serve", "HTTP API");
    serve_cmd->add_option("--addr", addr, "host:port");
    serve_cmd->add_option("--store", store_dir, std::string("session directory (default $") + store_env + ")");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << Json{{"code", "usage"}, {"message", e.what()}, {"details", Json::object()}}.dump() << '\n';
        return 2;
    }

    try {
        if (*simulate) {
            const auto config = config_from_json(read_file(config_path));
            const auto scenario = scenario_from_json(read_file(scenario_path));
            const auto oc = sim::run_replications(config, scenario, reps, seed, threads);
            auto out = open_out(out_path);
            sim::write_oc_csv(out, oc, scenario);
        } else if (*compare) {
            const auto config = config_from_json(read_file(config_path));
            const auto scenario = scenario_from_json(read_file(scenario_path));
            const auto cmp =
                sim::equal_allocation_comparator(config, scenario, reps, seed, threads, estimator_of(estimator));
            auto unfiltered = open_out(out_path + "_unfiltered.csv");
            sim::write_oc_csv(unfiltered, cmp.unfiltered, scenario);
            auto filtered = open_out(out_path + "_filtered.csv");
            sim::write_oc_csv(filtered, cmp.filtered, scenario);
        } else if (*calibrate) {
            const auto config = config_from_json(read_file(config_path));
            const auto grid = grid_from_json(read_file(grid_path));
            const auto scenarios = load_scenarios(scenario_paths);
            auto out = open_out(out_path);
            if (kind == "priors") {
                const auto result = sim::calibrate_priors(grid, scenarios, config, reps, seed, threads);
                sim::write_prior_surface_csv(out, result, scenarios);
                const auto& b = result.best;
                std::cout << Json{{"start_t", b.start_t},
                                  {"w_t", b.w_t},
                                  {"start_e", b.start_e},
                                  {"w_e", b.w_e},
                                  {"objective", result.best_objective}}
                                 .dump()
                          << '\n';
            } else {
                const auto k = kind == "safety" ? sim::ConstraintKind::safety : sim::ConstraintKind::futility;
                sim::write_constraint_surface_csv(
                    out, k, sim::calibrate_constraint(k, grid, scenarios, config, reps, seed, threads));
            }
        } else if (*conduct) {
            return run_conduct(session_path, new_config, std::cin, std::cout);
        } else if (*serve_cmd) {
            const auto colon = addr.rfind(':');
            if (colon == std::string::npos) throw MalformedInputError("--addr must be host:port");
            SessionStore store(store_dir.empty() ? default_store_dir() : std::filesystem::path(store_dir));
            Api api(store);
            std::cerr << "serving " << store.dir().string() << " on " << addr << '\n';
            serve(api, addr.substr(0, colon), std::stoi(addr.substr(colon + 1)));
        }
    } catch (const std::exception& e) {
        std::cerr << error_response(e).body.dump() << '\n';
        return 1;
    }
    return 0;
}
