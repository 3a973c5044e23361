#include "sotp/error.hpp"

#include <fmt/format.h>

namespace sotp {

const char* issue_code_name(IssueCode code) {
    switch (code) {
        case IssueCode::syntax: return "syntax-error";
        case IssueCode::unknown_question: return "unknown-question";
        case IssueCode::type_mismatch: return "type-mismatch";
        case IssueCode::missing_star_note: return "missing-star-note";
        case IssueCode::duplicate_key: return "duplicate-key";
    }
    return "unknown";
}

std::string ParseIssue::to_string() const {
    if (question_id.empty())
        return fmt::format("line {}: {}: {}", line, issue_code_name(code), message);
    return fmt::format("line {}: {}: {} ({})", line, issue_code_name(code), question_id, message);
}

namespace {

std::string summarize(const std::vector<ParseIssue>& issues) {
    if (issues.empty()) return "answer file is invalid";
    std::string out = issues.front().to_string();
    if (issues.size() > 1) out += fmt::format(" (+{} more)", issues.size() - 1);
    return out;
}

}  // namespace

ParseError::ParseError(std::vector<ParseIssue> issues)
    : Error(ErrorKind::validation, summarize(issues)), issues_(std::move(issues)) {}

}  // namespace sotp
