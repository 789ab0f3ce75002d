#pragma once

#include <stdexcept>
#include <string>

namespace videocot {

struct SourcePos {
    int line = 0;
    int col = 0;
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Precondition or value-range violation (bad frame index, empty key set, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Bad run configuration: missing files, mismatched plans, unusable backends.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed corpus files or records.
class CorpusError : public Error {
public:
    using Error::Error;
};

/// No code region could be extracted from an LLM completion.
class ExtractionError : public Error {
public:
    ExtractionError(const std::string& msg, std::string raw)
        : Error(msg), raw_text(std::move(raw)) {}
    std::string raw_text;
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, SourcePos p) : Error(msg), pos(p) {}
    SourcePos pos;
};

/// Syntactically recognizable but disallowed construct (import, while, attribute, ...).
class ForbiddenConstructError : public ParseError {
public:
    ForbiddenConstructError(const std::string& msg, SourcePos p, std::string construct)
        : ParseError(msg, p), construct(std::move(construct)) {}
    std::string construct;
};

class ValidateError : public Error {
public:
    enum class Kind { unknown_api, arity_mismatch, unbound_variable, missing_answer };
    ValidateError(Kind k, const std::string& msg, SourcePos p)
        : Error(msg), kind(k), pos(p) {}
    Kind kind;
    SourcePos pos;
};

/// A sub-task agent backend failed; carries the sub-task tag for accounting.
class AgentError : public Error {
public:
    AgentError(const std::string& msg, std::string sub_task_tag)
        : Error(msg), sub_task(std::move(sub_task_tag)) {}
    std::string sub_task;
};

/// The grounder found no span for the query. Distinct from backend failure.
class NoSpanError : public AgentError {
public:
    explicit NoSpanError(const std::string& msg) : AgentError(msg, "ground") {}
};

/// HTTP/LLM transport failure after retries were exhausted.
class TransportError : public Error {
public:
    using Error::Error;
};

/// A judge verdict could not be parsed as Yes/No.
class VerificationError : public Error {
public:
    using Error::Error;
};

class EmissionError : public Error {
public:
    using Error::Error;
};

}  // namespace videocot
