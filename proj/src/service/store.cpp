#include "regfind/service/store.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <random>

namespace regfind::service {
namespace {

bool valid_id(const std::string& id) {
    if (id.empty() || id.size() > 64) return false;
    for (char ch : id)
        if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_')) return false;
    return true;
}

}  // namespace

std::filesystem::path default_store_dir() {
    if (const char* env = std::getenv(store_env); env && *env) return env;
    return "trials";
}

SessionStore::SessionStore(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

std::filesystem::path SessionStore::path_of(const std::string& id) const {
    if (!valid_id(id)) throw NotFoundError("no trial '" + id + "'");
    return dir_ / (id + ".json");
}

std::string SessionStore::new_id() const {
    static thread_local std::mt19937_64 gen{std::random_device{}()};
    for (;;) {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(gen()));
        if (!exists(buf)) return buf;
    }
}

bool SessionStore::exists(const std::string& id) const {
    return valid_id(id) && std::filesystem::exists(dir_ / (id + ".json"));
}

void SessionStore::save(const TrialSession& session) const {
    const auto target = path_of(session.id());
    auto tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw Error("cannot write '" + tmp.string() + "'");
        out << session.to_json().dump(2) << '\n';
        if (!out) throw Error("cannot write '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, target);
}

TrialSession SessionStore::load(const std::string& id) const {
    const auto path = path_of(id);
    if (!std::filesystem::exists(path)) throw NotFoundError("no trial '" + id + "'");
    Json doc;
    try {
        doc = read_file(path.string());
    } catch (const MalformedInputError& e) {
        throw IntegrityError(e.what());
    }
    try {
        return TrialSession::from_json(doc);
    } catch (const MalformedInputError& e) {
        throw IntegrityError(std::string("stored session is malformed: ") + e.what());
    } catch (const ValidationError& e) {
        throw IntegrityError(std::string("stored configuration is invalid: ") + e.what());
    }
}

}  // namespace regfind::service
