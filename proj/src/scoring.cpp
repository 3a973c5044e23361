#include "sotp/scoring.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cctype>

#include "sotp/error.hpp"

namespace sotp {

using nlohmann::json;

namespace {

using Points = std::map<std::string, double>;

RubricRule enum_rule(std::string id, Points points) {
    RubricRule r;
    r.question_id = std::move(id);
    r.kind = RuleKind::enum_points;
    r.choice_points = std::move(points);
    return r;
}

RubricRule below_rule(std::string id, double threshold, double points) {
    RubricRule r;
    r.question_id = std::move(id);
    r.kind = RuleKind::number_below;
    r.threshold = threshold;
    r.points = points;
    return r;
}

RubricRule pct_rule(std::string id, double threshold, double points) {
    RubricRule r;
    r.question_id = std::move(id);
    r.kind = RuleKind::percent_at_least;
    r.threshold = threshold;
    r.points = points;
    return r;
}

RubricRule no_count_rule(std::string id) {
    RubricRule r;
    r.question_id = std::move(id);
    r.kind = RuleKind::does_not_count;
    return r;
}

QualityRubric installability_rubric() {
    QualityRubric q;
    q.quality_id = "installability";
    q.title = "Installability";
    q.rules = {
        enum_rule("install.instructions", {{"yes", 1}, {"no", -1}}),
        enum_rule("install.one_place", {{"yes", 1}, {"no", 0}, {"n/a", 0}}),
        enum_rule("install.linear", {{"yes", 1}, {"no", 0}, {"n/a", 0}}),
        enum_rule("install.no_deps_assumed", {{"yes", 1}, {"no", 0}, {"unclear", 0}}),
        enum_rule("install.os_versions", {{"yes", 1}, {"no", 0}}),
        enum_rule("install.automation", {{"yes", 1}, {"no", -1}}),
        enum_rule("install.break_message", {{"yes", 0}, {"no", -2}, {"n/a", 1}}),
        enum_rule("install.validation", {{"yes", 1}, {"no", 0}}),
        below_rule("install.steps", 10, 1),
        no_count_rule("install.os_used"),
        below_rule("install.extra_packages", 10, 1),
        enum_rule("install.versions_listed", {{"yes", 1}, {"no", 0}, {"n/a", 1}}),
        enum_rule("install.dep_instructions", {{"yes", 1}, {"no", 0}, {"n/a", 1}}),
        enum_rule("install.uninstall_problems", {{"yes", 0}, {"no", 1}, {"unavail", 1}}),
    };
    return q;
}

QualityRubric correctness_rubric() {
    QualityRubric q;
    q.quality_id = "correctness";
    q.title = "Correctness and Verifiability";
    RubricRule tools;
    tools.question_id = "correct.confidence_tools";
    tools.kind = RuleKind::set_any;
    tools.excluded = {"unclear"};
    tools.points = 1;
    q.rules = {
        enum_rule("correct.requirements", {{"yes", 2}, {"no", 0}, {"unclear", 0}}),
        tools,
        enum_rule("correct.tutorial", {{"yes", 2}, {"no", 0}}),
        enum_rule("correct.tutorial_linear", {{"yes", 1}, {"no", 0}, {"n/a", 0}}),
        enum_rule("correct.expected_output", {{"yes", 1}, {"no", 0}, {"n/a", 0}}),
        enum_rule("correct.output_match", {{"yes", 1}, {"no", 0}, {"n/a", 0}}),
        enum_rule("correct.unit_tests", {{"yes", 1}, {"no", 0}, {"unclear", 0}}),
        enum_rule("correct.ci", {{"yes", 1}, {"no", 0}, {"unclear", 0}}),
    };
    return q;
}

QualityRubric reliability_rubric() {
    QualityRubric q;
    q.quality_id = "reliability";
    q.title = "Surface Reliability";
    q.rules = {
        enum_rule("reliability.break_install", {{"yes", 0}, {"no", 5}}),
        enum_rule("reliability.install_recoverable", {{"yes", 5}, {"no", 0}, {"n/a", 0}}),
        enum_rule("reliability.break_tutorial", {{"yes", 0}, {"no", 5}, {"n/a", 0}}),
        enum_rule("reliability.tutorial_error_message", {{"yes", 2}, {"no", 0}, {"n/a", 0}}),
        enum_rule("reliability.tutorial_recoverable", {{"yes", 3}, {"no", 0}, {"n/a", 0}}),
    };
    return q;
}

QualityRubric robustness_rubric() {
    QualityRubric q;
    q.quality_id = "robustness";
    q.title = "Surface Robustness";
    q.rules = {
        enum_rule("robust.unexpected_input", {{"yes", 5}, {"no", 0}}),
        enum_rule("robust.newline_handling", {{"yes", 5}, {"no", 0}, {"n/a", 5}}),
    };
    return q;
}

QualityRubric usability_rubric() {
    QualityRubric q;
    q.quality_id = "usability";
    q.title = "Surface Usability";
    RubricRule support;
    support.question_id = "usability.support";
    support.kind = RuleKind::set_count;
    support.excluded = {"none"};
    support.bands = {{0, 0}, {1, 1}, {2, 2}};
    q.rules = {
        enum_rule("usability.tutorial", {{"yes", 3}, {"no", 0}}),
        enum_rule("usability.user_manual", {{"yes", 4}, {"no", 0}}),
        enum_rule("usability.user_characteristics", {{"yes", 1}, {"no", 0}}),
        support,
    };
    return q;
}

QualityRubric maintainability_rubric() {
    QualityRubric q;
    q.quality_id = "maintainability";
    q.title = "Maintainability";
    RubricRule version;
    version.question_id = "maintain.version";
    version.kind = RuleKind::string_provided;
    version.points = 1;
    RubricRule artifacts;
    artifacts.question_id = "maintain.artifacts";
    artifacts.kind = RuleKind::note_list_bands;
    artifacts.gate_choice = "yes";
    artifacts.bands = {{0, 0}, {1, 1}, {3, 2}};
    RubricRule tracker;
    tracker.question_id = "maintain.issue_tracker";
    tracker.kind = RuleKind::set_choice_max;
    // Private channels score 1; anything public or visible to all
    // developers scores 2.
    tracker.choice_points = {{"trac", 2},        {"jira", 2},    {"redmine", 2},
                             {"email", 1},       {"discussion_board", 2},
                             {"sourceforge", 2}, {"google_code", 2},
                             {"git", 2},         {"bitbucket", 2},
                             {"none", 0},        {"unclear", 0}, {"other", 2}};
    q.rules = {
        version,
        enum_rule("maintain.review_info", {{"yes", 1}, {"no", 0}}),
        artifacts,
        tracker,
        pct_rule("maintain.pct_issues_closed", 50, 1),
        pct_rule("maintain.pct_comments", 10, 1),
        enum_rule("maintain.vcs",
                  {{"svn", 2}, {"cvs", 2}, {"git", 2}, {"github", 2}, {"unclear", 0},
                   {"other", 2}}),
    };
    return q;
}

QualityRubric reusability_rubric() {
    QualityRubric q;
    q.quality_id = "reusability";
    q.title = "Reusability";
    RubricRule files;
    files.question_id = "reuse.code_files";
    files.kind = RuleKind::number_bands;
    files.bands = {{0, 0}, {10, 1}, {50, 3}, {100, 4}, {300, 5}, {600, 6}, {1000, 8}};
    q.rules = {
        files,
        enum_rule("reuse.api_doc", {{"yes", 2}, {"no", 0}, {"n/a", 0}}),
    };
    return q;
}

QualityRubric understandability_rubric() {
    QualityRubric q;
    q.quality_id = "understandability";
    q.title = "Surface Understandability";
    q.rules = {
        enum_rule("understand.indentation", {{"yes", 1}, {"no", 0}, {"n/a", 0}}),
        enum_rule("understand.coding_standard", {{"yes", 1}, {"no", 0}, {"n/a", 0}}),
        enum_rule("understand.identifiers", {{"yes", 2}, {"no", 0}, {"n/a", 0}}),
        enum_rule("understand.constants", {{"yes", 1}, {"no", 0}, {"n/a", 0}}),
        enum_rule("understand.comments_clear", {{"yes", 2}, {"no", 0}, {"n/a", 0}}),
        enum_rule("understand.param_order", {{"yes", 1}, {"no", 0}, {"n/a", 0}}),
        enum_rule("understand.algorithm_refs", {{"yes", 1}, {"no", 0}, {"n/a", 0}}),
        enum_rule("understand.modularized", {{"yes", 1}, {"no", 0}, {"n/a", 0}}),
    };
    return q;
}

QualityRubric visibility_rubric() {
    QualityRubric q;
    q.quality_id = "visibility";
    q.title = "Visibility/Transparency";
    q.rules = {
        enum_rule("visibility.process_defined", {{"yes", 3}, {"no", 0}, {"n/a", 0}}),
        enum_rule("visibility.process_docs", {{"yes", 3}, {"no", 0}}),
        enum_rule("visibility.dev_env", {{"yes", 2}, {"no", 0}}),
        enum_rule("visibility.release_notes", {{"yes", 2}, {"no", 0}}),
    };
    return q;
}

bool is_missing_marker(std::string text) {
    std::transform(text.begin(), text.end(), text.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
        text.pop_back();
    return text.empty() || text == "none" || text == "n/a" || text == "nothing" ||
           text == "unclear";
}

std::vector<std::string> split_note_list(const std::string& note) {
    std::vector<std::string> items;
    std::size_t start = 0;
    while (start <= note.size()) {
        std::size_t comma = note.find(',', start);
        std::string item = note.substr(start, comma == std::string::npos ? std::string::npos
                                                                         : comma - start);
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front())))
            item.erase(item.begin());
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back())))
            item.pop_back();
        if (!item.empty()) items.push_back(std::move(item));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return items;
}

double band_points(const std::vector<std::pair<std::int64_t, double>>& bands, std::int64_t value) {
    double points = 0.0;
    for (const auto& [lo, p] : bands) {
        if (value >= lo)
            points = p;
        else
            break;
    }
    return points;
}

double apply_rule(const RubricRule& rule, const Answer& answer) {
    switch (rule.kind) {
        case RuleKind::enum_points: {
            auto it = rule.choice_points.find(answer.token());
            if (it == rule.choice_points.end())
                throw Error(ErrorKind::computation,
                            fmt::format("rubric has no point mapping for '{}' = '{}'",
                                        rule.question_id, answer.token()));
            return it->second;
        }
        case RuleKind::number_below:
            return static_cast<double>(answer.count()) < rule.threshold ? rule.points : 0.0;
        case RuleKind::percent_at_least:
            return answer.percent() >= rule.threshold ? rule.points : 0.0;
        case RuleKind::number_bands:
            return band_points(rule.bands, answer.count());
        case RuleKind::set_any: {
            for (const std::string& token : answer.tokens())
                if (std::find(rule.excluded.begin(), rule.excluded.end(), token) ==
                    rule.excluded.end())
                    return rule.points;
            return 0.0;
        }
        case RuleKind::set_count: {
            std::int64_t n = 0;
            for (const std::string& token : answer.tokens())
                if (std::find(rule.excluded.begin(), rule.excluded.end(), token) ==
                    rule.excluded.end())
                    ++n;
            return band_points(rule.bands, n);
        }
        case RuleKind::set_choice_max: {
            double best = 0.0;
            for (const std::string& token : answer.tokens()) {
                auto it = rule.choice_points.find(token);
                if (it == rule.choice_points.end())
                    throw Error(ErrorKind::computation,
                                fmt::format("rubric has no point mapping for '{}' = '{}'",
                                            rule.question_id, token));
                best = std::max(best, it->second);
            }
            return best;
        }
        case RuleKind::string_provided:
            return is_missing_marker(answer.text()) ? 0.0 : rule.points;
        case RuleKind::note_list_bands: {
            if (answer.token() != rule.gate_choice) return 0.0;
            std::int64_t n = answer.note ? static_cast<std::int64_t>(
                                               split_note_list(*answer.note).size())
                                         : 0;
            return band_points(rule.bands, n);
        }
        case RuleKind::does_not_count:
            return 0.0;
    }
    return 0.0;
}

}  // namespace

const QualityRubric* Rubric::find(std::string_view quality_id) const {
    for (const QualityRubric& q : qualities)
        if (q.quality_id == quality_id) return &q;
    return nullptr;
}

void Rubric::validate(const QuestionCatalog& catalog) const {
    for (const QualityRubric& quality : qualities) {
        for (const RubricRule& rule : quality.rules) {
            const Question* q = catalog.find(rule.question_id);
            if (q == nullptr)
                throw Error(ErrorKind::validation,
                            fmt::format("rubric for '{}' references unknown question '{}'",
                                        quality.quality_id, rule.question_id));
            if (rule.kind == RuleKind::enum_points) {
                for (const std::string& choice : q->choices)
                    if (rule.choice_points.count(choice) == 0)
                        throw Error(ErrorKind::validation,
                                    fmt::format("rubric for '{}' lacks a point mapping for "
                                                "'{}' = '{}'",
                                                quality.quality_id, rule.question_id, choice));
            }
            if (rule.kind == RuleKind::set_choice_max) {
                for (const std::string& choice : q->choices)
                    if (rule.choice_points.count(choice) == 0)
                        throw Error(ErrorKind::validation,
                                    fmt::format("rubric for '{}' lacks a point mapping for "
                                                "'{}' = '{}'",
                                                quality.quality_id, rule.question_id, choice));
            }
        }
    }
}

const Rubric& builtin_rubric() {
    static const Rubric rubric = [] {
        Rubric r;
        r.qualities = {
            installability_rubric(), correctness_rubric(),       reliability_rubric(),
            robustness_rubric(),     usability_rubric(),         maintainability_rubric(),
            reusability_rubric(),    understandability_rubric(), visibility_rubric(),
        };
        r.validate(builtin_catalog());
        return r;
    }();
    return rubric;
}

QualityScore score_quality(const std::string& quality_id, const AnswerSet& answers,
                           const Rubric& rubric) {
    const QualityRubric* quality = rubric.find(quality_id);
    if (quality == nullptr)
        throw Error(ErrorKind::validation, fmt::format("unknown quality '{}'", quality_id));

    QualityScore result;
    for (const RubricRule& rule : quality->rules) {
        const Answer* answer = answers.find(rule.question_id);
        if (answer == nullptr)
            throw Error(ErrorKind::validation,
                        fmt::format("missing answer for '{}' (required by the {} rubric)",
                                    rule.question_id, quality_id));
        double points = apply_rule(rule, *answer);
        result.breakdown.push_back({rule.question_id, points});
        result.raw_sum += points;
    }
    result.score = std::min(result.raw_sum, quality->cap);
    result.score = std::max(result.score, quality->floor);

    if (quality_id == "reliability") {
        const Answer* tut = answers.find("reliability.break_tutorial");
        if (tut != nullptr && tut->token() == "n/a")
            result.notes.push_back(
                "tutorial rows answered n/a award 0 points; the attainable maximum is 5");
    }
    return result;
}

QualityScores score_all(const AnswerSet& answers, const Rubric& rubric) {
    QualityScores scores;
    for (const QualityRubric& quality : rubric.qualities) {
        try {
            scores.by_quality[quality.quality_id] = score_quality(quality.quality_id, answers,
                                                                  rubric);
        } catch (const Error& e) {
            throw Error(e.kind(),
                        fmt::format("scoring '{}' failed: {}", quality.quality_id, e.what()));
        }
    }
    return scores;
}

namespace {

const char* rule_kind_name(RuleKind kind) {
    switch (kind) {
        case RuleKind::enum_points: return "enum-points";
        case RuleKind::number_below: return "number-below";
        case RuleKind::percent_at_least: return "percent-at-least";
        case RuleKind::number_bands: return "number-bands";
        case RuleKind::set_any: return "set-any";
        case RuleKind::set_count: return "set-count";
        case RuleKind::set_choice_max: return "set-choice-max";
        case RuleKind::string_provided: return "string-provided";
        case RuleKind::note_list_bands: return "note-list-bands";
        case RuleKind::does_not_count: return "does-not-count";
    }
    return "unknown";
}

RuleKind rule_kind_from_name(const std::string& name) {
    static const std::map<std::string, RuleKind> kinds = {
        {"enum-points", RuleKind::enum_points},
        {"number-below", RuleKind::number_below},
        {"percent-at-least", RuleKind::percent_at_least},
        {"number-bands", RuleKind::number_bands},
        {"set-any", RuleKind::set_any},
        {"set-count", RuleKind::set_count},
        {"set-choice-max", RuleKind::set_choice_max},
        {"string-provided", RuleKind::string_provided},
        {"note-list-bands", RuleKind::note_list_bands},
        {"does-not-count", RuleKind::does_not_count},
    };
    auto it = kinds.find(name);
    if (it == kinds.end())
        throw Error(ErrorKind::validation, fmt::format("unknown rubric rule kind '{}'", name));
    return it->second;
}

}  // namespace

std::string rubric_to_json(const Rubric& rubric) {
    json doc = json::array();
    for (const QualityRubric& quality : rubric.qualities) {
        json q;
        q["quality"] = quality.quality_id;
        q["title"] = quality.title;
        q["cap"] = quality.cap;
        q["floor"] = quality.floor;
        q["rules"] = json::array();
        for (const RubricRule& rule : quality.rules) {
            json r;
            r["question"] = rule.question_id;
            r["kind"] = rule_kind_name(rule.kind);
            if (!rule.choice_points.empty()) r["choice_points"] = rule.choice_points;
            if (rule.kind == RuleKind::number_below || rule.kind == RuleKind::percent_at_least)
                r["threshold"] = rule.threshold;
            if (rule.kind == RuleKind::number_below || rule.kind == RuleKind::percent_at_least ||
                rule.kind == RuleKind::set_any || rule.kind == RuleKind::string_provided)
                r["points"] = rule.points;
            if (!rule.excluded.empty()) r["excluded"] = rule.excluded;
            if (!rule.bands.empty()) {
                json bands = json::array();
                for (const auto& [lo, p] : rule.bands) bands.push_back({{"from", lo}, {"points", p}});
                r["bands"] = bands;
            }
            if (!rule.gate_choice.empty()) r["gate_choice"] = rule.gate_choice;
            q["rules"].push_back(std::move(r));
        }
        doc.push_back(std::move(q));
    }
    return doc.dump(2) + "\n";
}

Rubric rubric_from_json(std::string_view text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_array())
        throw Error(ErrorKind::validation, "rubric file must be a JSON array of qualities");
    Rubric rubric;
    for (const json& q : doc) {
        QualityRubric quality;
        quality.quality_id = q.at("quality").get<std::string>();
        quality.title = q.value("title", quality.quality_id);
        quality.cap = q.value("cap", 10.0);
        quality.floor = q.value("floor", 1.0);
        for (const json& r : q.at("rules")) {
            RubricRule rule;
            rule.question_id = r.at("question").get<std::string>();
            rule.kind = rule_kind_from_name(r.at("kind").get<std::string>());
            if (r.contains("choice_points"))
                rule.choice_points = r["choice_points"].get<std::map<std::string, double>>();
            rule.threshold = r.value("threshold", 0.0);
            rule.points = r.value("points", 0.0);
            if (r.contains("excluded"))
                rule.excluded = r["excluded"].get<std::vector<std::string>>();
            if (r.contains("bands"))
                for (const json& band : r["bands"])
                    rule.bands.emplace_back(band.at("from").get<std::int64_t>(),
                                            band.at("points").get<double>());
            rule.gate_choice = r.value("gate_choice", "");
            quality.rules.push_back(std::move(rule));
        }
        rubric.qualities.push_back(std::move(quality));
    }
    return rubric;
}

}  // namespace sotp
