#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sotp/catalog.hpp"
#include "sotp/dates.hpp"

namespace sotp {

/// Typed answer value. Which alternative is active follows the question's
/// AnswerType: number -> int64, percentage -> double, enum -> string token,
/// set_of -> token vector, date -> Date, url/string -> string.
using Value = std::variant<std::int64_t, double, Date, std::string, std::vector<std::string>>;

struct Answer {
    std::string question_id;
    AnswerType type = AnswerType::string;
    Value value;
    std::optional<std::string> note;

    const std::string& token() const { return std::get<std::string>(value); }
    const std::vector<std::string>& tokens() const {
        return std::get<std::vector<std::string>>(value);
    }
    std::int64_t count() const { return std::get<std::int64_t>(value); }
    double percent() const { return std::get<double>(value); }
    const Date& date() const { return std::get<Date>(value); }
    const std::string& text() const { return std::get<std::string>(value); }

    bool operator==(const Answer&) const = default;
};

struct AnswerSet {
    std::string package_id;
    std::optional<std::string> vm_environment;
    std::map<std::string, Answer> answers;  // keyed by question id

    const Answer* find(std::string_view question_id) const;

    bool operator==(const AnswerSet&) const = default;
};

/// Parses a line-oriented answer file:
///
///   # comment
///   package = gmsh
///   vm = VirtualBox 7.0 / Ubuntu 22.04
///   install.instructions = yes
///   install.automation = yes | note: makefile drives the build
///   summary.platforms = linux,windows
///
/// Every answer line must bind to a catalog question and pass that
/// question's type check; starred choices require a note. All problems in
/// the file are collected and reported together as a ParseError.
AnswerSet parse_answers(std::string_view text, const QuestionCatalog& catalog);

/// Inverse of parse_answers; emits answers in catalog order.
std::string serialize_answers(const AnswerSet& answers, const QuestionCatalog& catalog);

std::string value_to_string(const Answer& answer);

struct CompletenessReport {
    std::size_t answered = 0;
    std::size_t total = 0;
    /// (section id, missing question ids) for every section, catalog order.
    std::vector<std::pair<std::string, std::vector<std::string>>> missing_by_section;

    std::size_t missing_count() const { return total - answered; }
};

CompletenessReport completeness(const AnswerSet& answers, const QuestionCatalog& catalog);

}  // namespace sotp
