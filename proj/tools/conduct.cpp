#include "conduct.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <vector>

#include "regfind/service/api.hpp"

using namespace regfind;
using namespace regfind::service;

namespace {

void save(const TrialSession& session, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        out << session.to_json().dump(2) << '\n';
        if (!out) throw Error("cannot write '" + tmp + "'");
    }
    std::filesystem::rename(tmp, path);
}

void print_recommendation(std::ostream& out, const Recommendation& rec) {
    out << "status: " << to_string(rec.status);
    if (rec.regimen) out << "  regimen: T" << *rec.regimen + 1;
    if (rec.termination) out << "  reason: " << engine::to_string(*rec.termination);
    out << '\n';
    if (!rec.trace) return;
    out << "  reg   tox    eff    delta    safe eff  coh skip\n";
    for (std::size_t i = 0; i < rec.trace->regimens.size(); ++i) {
        const auto& a = rec.trace->regimens[i];
        out << "  T" << std::left << std::setw(3) << i + 1 << std::right << std::fixed << std::setprecision(3)
            << std::setw(6) << a.tox_mode << ' ' << std::setw(6) << a.eff_mode << ' ' << std::setw(8) << a.delta
            << "   " << (a.safe ? 'y' : 'n') << "    " << (a.efficacious ? 'y' : 'n') << "    "
            << (a.coherent ? 'y' : 'n') << "    " << (a.no_skip ? 'y' : 'n') << '\n';
    }
    out.unsetf(std::ios::fixed);
}

void print_state(std::ostream& out, const TrialSession& session) {
    const auto& state = session.state();
    out << "revision " << session.revision() << ", " << state.patients_enrolled() << '/'
        << session.config().max_patients << " patients, " << state.pending_efficacy() << " awaiting efficacy\n";
    for (std::size_t k = 0; k < state.cohorts().size(); ++k) {
        const auto& c = state.cohorts()[k];
        out << "  cohort " << k + 1 << " T" << c.regimen + 1 << ':';
        for (const auto& p : c.patients) {
            out << ' ' << (!p.toxicity ? '?' : (*p.toxicity ? 'T' : '-'));
            out << (!p.efficacy ? (p.awaiting_efficacy() ? '?' : '.') : (*p.efficacy ? 'E' : 'n'));
        }
        out << '\n';
    }
}

// "tox 3 0 1" or "eff 2 1=1 2=0" into an outcome batch.
OutcomePost parse_batch(const std::string& verb, std::istringstream& args) {
    OutcomePost p;
    int cohort = 0;
    if (!(args >> cohort) || cohort < 1) throw MalformedInputError("expected a cohort number");
    p.cohort = cohort - 1;
    std::string tok;
    if (verb == "tox") {
        p.endpoint = Endpoint::toxicity;
        while (args >> tok) {
            if (tok != "0" && tok != "1") throw MalformedInputError("toxicity outcomes are 0 or 1");
            p.toxicity.push_back(tok == "1");
        }
    } else {
        p.endpoint = Endpoint::efficacy;
        while (args >> tok) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos) throw MalformedInputError("efficacy outcomes are patient=0|1");
            const int patient = std::stoi(tok.substr(0, eq));
            const auto v = tok.substr(eq + 1);
            if (v != "0" && v != "1") throw MalformedInputError("efficacy outcomes are patient=0|1");
            p.efficacy.push_back({patient - 1, v == "1"});
        }
    }
    return p;
}

const char* help =
    "commands:\n"
    "  show                      cohorts and outcomes so far\n"
    "  rec                       current recommendation with trace\n"
    "  tox <cohort> <0|1>...     toxicity of a cohort (next cohort is allocated)\n"
    "  eff <cohort> <p>=<0|1>... efficacy of patients awaiting it\n"
    "  whatif tox|eff ...        recommendation after a hypothetical batch\n"
    "  quit\n";

}  // namespace

int run_conduct(const std::string& session_path, const std::optional<std::string>& config_path, std::istream& in,
                std::ostream& out) {
    auto session = [&] {
        if (config_path) {
            if (std::filesystem::exists(session_path))
                throw InvalidStateError("session file '" + session_path + "' already exists");
            auto config = config_from_json(read_file(*config_path));
            const auto stem = std::filesystem::path(session_path).stem().string();
            TrialSession s(stem, std::move(config));
            save(s, session_path);
            return s;
        }
        return TrialSession::from_json(read_file(session_path));
    }();

    out << help;
    print_recommendation(out, session.peek());
    std::string line;
    while (out << "> " << std::flush, std::getline(in, line)) {
        std::istringstream args(line);
        std::string verb;
        if (!(args >> verb)) continue;
        try {
            if (verb == "quit" || verb == "exit") break;
            if (verb == "help") {
                out << help;
            } else if (verb == "show") {
                print_state(out, session);
            } else if (verb == "rec") {
                const auto before = session.audit().size();
                const auto rec = session.recommendation();
                if (session.audit().size() != before) save(session, session_path);
                print_recommendation(out, rec);
            } else if (verb == "tox" || verb == "eff") {
                const auto rec = session.post(session.revision(), parse_batch(verb, args));
                save(session, session_path);
                print_recommendation(out, rec);
            } else if (verb == "whatif") {
                std::string kind;
                args >> kind;
                if (kind != "tox" && kind != "eff") throw MalformedInputError("whatif takes tox or eff");
                print_recommendation(out, session.whatif({parse_batch(kind, args)}));
            } else {
                out << "unknown command '" << verb << "'\n";
            }
        } catch (const std::exception& e) {
            out << "error: " << error_response(e).body.dump() << '\n';
        }
    }
    return 0;
}
