#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sotp {

enum class AnswerType {
    enumeration,  // one choice token
    number,       // nonnegative integer
    percentage,   // decimal in [0, 100]
    date,         // YYYY-MM-DD or bare YYYY
    url,
    string,
    set_of,  // comma-separated choice tokens
};

const char* answer_type_name(AnswerType type);

struct Question {
    std::string id;      // stable token, e.g. "install.instructions"
    std::string prompt;  // assessor-facing wording
    AnswerType type = AnswerType::string;
    std::vector<std::string> choices;       // enumeration / set_of only
    std::vector<std::string> star_choices;  // choices that require a note

    bool is_star_choice(std::string_view choice) const;
};

struct Section {
    std::string id;  // e.g. "installability"
    std::string title;
    std::vector<Question> questions;
};

/// The measurement template: 10 assessor sections (summary + 9 qualities)
/// followed by 3 sections of tool-collected repository metrics.
class QuestionCatalog {
public:
    QuestionCatalog(std::string version, std::vector<Section> sections);

    const std::string& version() const { return version_; }
    const std::vector<Section>& sections() const { return sections_; }

    const Question* find(std::string_view question_id) const;
    const Section* find_section(std::string_view section_id) const;
    /// Section that owns a question id, or nullptr.
    const Section* section_of(std::string_view question_id) const;

    std::size_t question_count() const;

    bool operator==(const QuestionCatalog& other) const;

private:
    std::string version_;
    std::vector<Section> sections_;
    std::unordered_map<std::string_view, const Question*> by_id_;
    std::unordered_map<std::string_view, const Section*> question_section_;
};

/// Total template rows across all sections of the built-in catalog.
inline constexpr std::size_t kDeclaredQuestionCount = 108;

/// The nine quality section ids, in template order.
const std::vector<std::string>& quality_ids();

const QuestionCatalog& builtin_catalog();

}  // namespace sotp
