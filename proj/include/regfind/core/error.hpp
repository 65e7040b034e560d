#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace regfind {

// Every error raised by the library derives from Error so that the service
// layer can map it onto a status class without string matching.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A probability or shape parameter left its open domain.
class DomainError : public Error {
public:
    using Error::Error;
};

// An operation was invoked in a state where it is not defined
// (e.g. allocation after termination).
class InvalidStateError : public Error {
public:
    using Error::Error;
};

class DuplicateRecordError : public Error {
public:
    using Error::Error;
};

class UnknownPatientError : public Error {
public:
    using Error::Error;
};

class MalformedInputError : public Error {
public:
    using Error::Error;
};

// Collects every violated invariant of a configuration, not just the first.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> problems)
        : Error(join(problems)), problems_(std::move(problems)) {}

    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    static std::string join(const std::vector<std::string>& problems) {
        std::string out = "invalid configuration";
        for (const auto& p : problems) {
            out += "; ";
            out += p;
        }
        return out;
    }

    std::vector<std::string> problems_;
};

}  // namespace regfind
