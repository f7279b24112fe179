#pragma once

#include <stdexcept>
#include <string>

namespace metades {

/// Base of all library errors. `stage()` names the pipeline stage that failed
/// so the CLI can print a stage-qualified diagnostic.
class Error : public std::runtime_error {
public:
    Error(std::string stage, const std::string& what)
        : std::runtime_error(what), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

/// Argument outside the function's domain (bad label, point out of range, K > |DSEL|).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed CSV row, unreadable file.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A learner could not be fit (single-class data, empty meta-training set).
class TrainingError : public Error {
public:
    using Error::Error;
};

/// Persisted model does not match the expected layout or version.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// Invalid experiment configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace metades
