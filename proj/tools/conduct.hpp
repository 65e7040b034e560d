#pragma once

#include <iosfwd>
#include <optional>
#include <string>

// Line-oriented conduct loop over a single session file. With `config_path`
// a new session is created at `session_path` first.
int run_conduct(const std::string& session_path, const std::optional<std::string>& config_path, std::istream& in,
                std::ostream& out);
