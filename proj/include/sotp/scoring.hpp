#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sotp/answers.hpp"
#include "sotp/catalog.hpp"

namespace sotp {

enum class RuleKind {
    enum_points,      // choice -> points lookup
    number_below,     // value < threshold -> points, else 0
    percent_at_least, // value >= threshold -> points, else 0
    number_bands,     // lower bound -> points, highest band that fits
    set_any,          // any selected choice outside `excluded` -> points
    set_count,        // count of selections outside `excluded`, banded
    set_choice_max,   // max points over the selected choices
    string_provided,  // nonempty and not a none/unclear marker -> points
    note_list_bands,  // gate choice answered: band over note list length
    does_not_count,   // listed for completeness, never contributes
};

struct RubricRule {
    std::string question_id;
    RuleKind kind = RuleKind::does_not_count;
    std::map<std::string, double> choice_points;     // enum_points / set_choice_max
    double threshold = 0.0;                          // number_below / percent_at_least
    double points = 0.0;                             // single-valued kinds
    std::vector<std::string> excluded;               // set_any / set_count
    std::vector<std::pair<std::int64_t, double>> bands;  // ascending lower bounds
    std::string gate_choice;                         // note_list_bands
};

struct QualityRubric {
    std::string quality_id;
    std::string title;
    std::vector<RubricRule> rules;
    double cap = 10.0;    // sums above this round down to it
    double floor = 1.0;   // sums below this clamp up to it
};

struct Rubric {
    std::vector<QualityRubric> qualities;

    const QualityRubric* find(std::string_view quality_id) const;
    /// Every referenced question must exist in the catalog with a point
    /// mapping for each of its choices; throws Error(validation) otherwise.
    void validate(const QuestionCatalog& catalog) const;
};

/// The built-in impression calculator for the nine qualities.
const Rubric& builtin_rubric();

/// Replacement rubrics are plain JSON documents.
Rubric rubric_from_json(std::string_view text);
std::string rubric_to_json(const Rubric& rubric);

struct BreakdownItem {
    std::string question_id;
    double points = 0.0;

    bool operator==(const BreakdownItem&) const = default;
};

struct QualityScore {
    double score = 0.0;    // in [1, 10]
    double raw_sum = 0.0;  // before cap and floor
    std::vector<BreakdownItem> breakdown;
    std::vector<std::string> notes;  // e.g. tutorial rows answered n/a
};

struct QualityScores {
    std::map<std::string, QualityScore> by_quality;
};

QualityScore score_quality(const std::string& quality_id, const AnswerSet& answers,
                           const Rubric& rubric = builtin_rubric());

/// Scores all nine qualities; missing answers carry quality context.
QualityScores score_all(const AnswerSet& answers, const Rubric& rubric = builtin_rubric());

}  // namespace sotp
