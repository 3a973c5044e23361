#include "sotp/answers.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>

#include "sotp/error.hpp"

namespace sotp {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool is_token_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '/' ||
           c == '+' || c == '-';
}

bool is_token(std::string_view s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), is_token_char);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(s.substr(start));
            return parts;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

bool parse_count(std::string_view s, std::int64_t& out) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_percent(std::string_view s, double& out) {
    if (s.ends_with('%')) s = trim(s.substr(0, s.size() - 1));
    if (s.empty()) return false;
    char* end = nullptr;
    std::string owned(s);
    out = std::strtod(owned.c_str(), &end);
    if (end != owned.c_str() + owned.size()) return false;
    return out >= 0.0 && out <= 100.0;
}

/// Binds raw text to a question's type; appends an issue and returns false
/// on mismatch.
bool bind_value(const Question& q, std::string_view raw, int line, Answer& answer,
                std::vector<ParseIssue>& issues) {
    auto mismatch = [&](std::string_view detail) {
        issues.push_back({line, IssueCode::type_mismatch, q.id,
                          fmt::format("expected {}, got '{}' ({})", answer_type_name(q.type), raw,
                                      detail)});
        return false;
    };
    switch (q.type) {
        case AnswerType::enumeration: {
            if (!is_token(raw)) return mismatch("not a choice token");
            std::string token{raw};
            if (std::find(q.choices.begin(), q.choices.end(), token) == q.choices.end())
                return mismatch(fmt::format("valid choices: {}", fmt::join(q.choices, ", ")));
            answer.value = std::move(token);
            return true;
        }
        case AnswerType::set_of: {
            std::vector<std::string> tokens;
            for (std::string_view part : split(raw, ',')) {
                std::string token{trim(part)};
                if (token.empty()) return mismatch("empty element");
                if (std::find(q.choices.begin(), q.choices.end(), token) == q.choices.end())
                    return mismatch(fmt::format("'{}' is not a choice", token));
                if (std::find(tokens.begin(), tokens.end(), token) != tokens.end())
                    return mismatch(fmt::format("'{}' listed twice", token));
                tokens.push_back(std::move(token));
            }
            if (tokens.empty()) return mismatch("empty set");
            answer.value = std::move(tokens);
            return true;
        }
        case AnswerType::number: {
            std::int64_t n;
            if (!parse_count(raw, n)) return mismatch("not a nonnegative integer");
            answer.value = n;
            return true;
        }
        case AnswerType::percentage: {
            double p;
            if (!parse_percent(raw, p)) return mismatch("not a percentage in [0,100]");
            answer.value = p;
            return true;
        }
        case AnswerType::date: {
            auto d = Date::try_parse(raw);
            if (!d) return mismatch("expected YYYY-MM-DD or YYYY");
            answer.value = *d;
            return true;
        }
        case AnswerType::url: {
            if (!raw.starts_with("http://") && !raw.starts_with("https://"))
                return mismatch("expected http(s) URL");
            answer.value = std::string{raw};
            return true;
        }
        case AnswerType::string: {
            answer.value = std::string{raw};
            return true;
        }
    }
    return mismatch("unhandled type");
}

bool star_note_required(const Question& q, const Answer& answer) {
    if (q.star_choices.empty()) return false;
    if (q.type == AnswerType::enumeration) return q.is_star_choice(answer.token());
    if (q.type == AnswerType::set_of) {
        for (const std::string& t : answer.tokens())
            if (q.is_star_choice(t)) return true;
    }
    return false;
}

constexpr std::string_view kNoteMarker = "| note:";

}  // namespace

const Answer* AnswerSet::find(std::string_view question_id) const {
    auto it = answers.find(std::string{question_id});
    return it == answers.end() ? nullptr : &it->second;
}

AnswerSet parse_answers(std::string_view text, const QuestionCatalog& catalog) {
    AnswerSet set;
    std::vector<ParseIssue> issues;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = eol == std::string_view::npos ? text.substr(pos)
                                                              : text.substr(pos, eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (line.ends_with('\r')) line.remove_suffix(1);

        std::string_view stripped = trim(line);
        if (stripped.empty() || stripped.starts_with('#')) continue;

        std::size_t eq = stripped.find('=');
        if (eq == std::string_view::npos) {
            issues.push_back({line_no, IssueCode::syntax, "", "expected 'key = value'"});
            continue;
        }
        std::string_view key = trim(stripped.substr(0, eq));
        std::string_view rest = trim(stripped.substr(eq + 1));
        if (!is_token(key)) {
            issues.push_back({line_no, IssueCode::syntax, "",
                              fmt::format("'{}' is not a valid key", key)});
            continue;
        }

        std::optional<std::string> note;
        std::string_view value_text = rest;
        std::size_t marker = rest.find(kNoteMarker);
        if (marker != std::string_view::npos) {
            value_text = trim(rest.substr(0, marker));
            note = std::string{trim(rest.substr(marker + kNoteMarker.size()))};
        }

        // File-level metadata lines use dot-free keys.
        if (key == "package") {
            if (!set.package_id.empty()) {
                issues.push_back({line_no, IssueCode::duplicate_key, "package",
                                  "package id already set"});
                continue;
            }
            if (!is_token(value_text)) {
                issues.push_back({line_no, IssueCode::syntax, "package",
                                  fmt::format("'{}' is not a valid package id", value_text)});
                continue;
            }
            set.package_id = std::string{value_text};
            continue;
        }
        if (key == "vm") {
            set.vm_environment = std::string{value_text};
            continue;
        }

        const Question* q = catalog.find(key);
        if (q == nullptr) {
            issues.push_back({line_no, IssueCode::unknown_question, std::string{key},
                              "no such question in the catalog"});
            continue;
        }
        if (set.answers.count(q->id) != 0) {
            issues.push_back({line_no, IssueCode::duplicate_key, q->id, "question answered twice"});
            continue;
        }

        Answer answer;
        answer.question_id = q->id;
        answer.type = q->type;
        answer.note = note;
        if (!bind_value(*q, value_text, line_no, answer, issues)) continue;

        if (star_note_required(*q, answer) && (!answer.note || answer.note->empty())) {
            issues.push_back({line_no, IssueCode::missing_star_note, q->id,
                              fmt::format("choice '{}' requires an explanatory note",
                                          value_to_string(answer))});
            continue;
        }
        set.answers.emplace(q->id, std::move(answer));
    }

    if (!issues.empty()) throw ParseError(std::move(issues));
    return set;
}

std::string value_to_string(const Answer& answer) {
    switch (answer.type) {
        case AnswerType::enumeration: return answer.token();
        case AnswerType::set_of: return fmt::format("{}", fmt::join(answer.tokens(), ","));
        case AnswerType::number: return fmt::format("{}", answer.count());
        case AnswerType::percentage: {
            double p = answer.percent();
            if (p == static_cast<std::int64_t>(p))
                return fmt::format("{}", static_cast<std::int64_t>(p));
            return fmt::format("{}", p);
        }
        case AnswerType::date: return answer.date().to_string();
        case AnswerType::url:
        case AnswerType::string: return answer.text();
    }
    return {};
}

std::string serialize_answers(const AnswerSet& set, const QuestionCatalog& catalog) {
    std::string out;
    if (!set.package_id.empty()) out += fmt::format("package = {}\n", set.package_id);
    if (set.vm_environment) out += fmt::format("vm = {}\n", *set.vm_environment);
    for (const Section& section : catalog.sections()) {
        for (const Question& q : section.questions) {
            const Answer* a = set.find(q.id);
            if (a == nullptr) continue;
            out += fmt::format("{} = {}", q.id, value_to_string(*a));
            if (a->note && !a->note->empty()) out += fmt::format(" | note: {}", *a->note);
            out += '\n';
        }
    }
    return out;
}

CompletenessReport completeness(const AnswerSet& answers, const QuestionCatalog& catalog) {
    CompletenessReport report;
    for (const Section& section : catalog.sections()) {
        std::vector<std::string> missing;
        for (const Question& q : section.questions) {
            ++report.total;
            if (answers.find(q.id) != nullptr)
                ++report.answered;
            else
                missing.push_back(q.id);
        }
        report.missing_by_section.emplace_back(section.id, std::move(missing));
    }
    return report;
}

}  // namespace sotp
