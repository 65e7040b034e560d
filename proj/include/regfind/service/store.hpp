#pragma once

#include <filesystem>
#include <string>

#include "regfind/service/session.hpp"

namespace regfind::service {

// Environment variable naming the default store directory.
inline constexpr const char* store_env = "REGFIND_STORE";

// Store directory from REGFIND_STORE, falling back to ./trials.
std::filesystem::path default_store_dir();

// One JSON document per session, {id}.json, replaced atomically on save.
class SessionStore {
public:
    explicit SessionStore(std::filesystem::path dir);

    const std::filesystem::path& dir() const noexcept { return dir_; }

    std::string new_id() const;
    bool exists(const std::string& id) const;
    void save(const TrialSession& session) const;
    // Throws NotFoundError, or IntegrityError if the log does not replay.
    TrialSession load(const std::string& id) const;

private:
    std::filesystem::path path_of(const std::string& id) const;

    std::filesystem::path dir_;
};

}  // namespace regfind::service
