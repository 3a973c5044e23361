#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sotp {

/// Coarse failure category, mapped to distinct CLI exit codes.
enum class ErrorKind {
    validation,
    io,
    network,
    computation,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

enum class IssueCode {
    syntax,
    unknown_question,
    type_mismatch,
    missing_star_note,
    duplicate_key,
};

const char* issue_code_name(IssueCode code);

/// One located problem in an answer file. `line` is 1-based.
struct ParseIssue {
    int line = 0;
    IssueCode code = IssueCode::syntax;
    std::string question_id;  // empty when the key could not be read
    std::string message;

    std::string to_string() const;
};

class ParseError : public Error {
public:
    explicit ParseError(std::vector<ParseIssue> issues);

    const std::vector<ParseIssue>& issues() const { return issues_; }

private:
    std::vector<ParseIssue> issues_;
};

}  // namespace sotp
