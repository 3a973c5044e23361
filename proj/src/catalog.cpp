#include "sotp/catalog.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <stdexcept>

#include "sotp/error.hpp"

namespace sotp {

const char* answer_type_name(AnswerType type) {
    switch (type) {
        case AnswerType::enumeration: return "enum";
        case AnswerType::number: return "number";
        case AnswerType::percentage: return "percentage";
        case AnswerType::date: return "date";
        case AnswerType::url: return "url";
        case AnswerType::string: return "string";
        case AnswerType::set_of: return "set-of";
    }
    return "unknown";
}

bool Question::is_star_choice(std::string_view choice) const {
    return std::find(star_choices.begin(), star_choices.end(), choice) != star_choices.end();
}

QuestionCatalog::QuestionCatalog(std::string version, std::vector<Section> sections)
    : version_(std::move(version)), sections_(std::move(sections)) {
    for (const Section& section : sections_) {
        for (const Question& q : section.questions) {
            if (!by_id_.emplace(q.id, &q).second)
                throw Error(ErrorKind::validation,
                            fmt::format("duplicate question id '{}' in catalog", q.id));
            question_section_.emplace(q.id, &section);
            for (const std::string& star : q.star_choices) {
                if (std::find(q.choices.begin(), q.choices.end(), star) == q.choices.end())
                    throw Error(ErrorKind::validation,
                                fmt::format("star choice '{}' of '{}' is not a choice", star, q.id));
            }
        }
    }
}

const Question* QuestionCatalog::find(std::string_view question_id) const {
    auto it = by_id_.find(question_id);
    return it == by_id_.end() ? nullptr : it->second;
}

const Section* QuestionCatalog::find_section(std::string_view section_id) const {
    for (const Section& s : sections_)
        if (s.id == section_id) return &s;
    return nullptr;
}

const Section* QuestionCatalog::section_of(std::string_view question_id) const {
    auto it = question_section_.find(question_id);
    return it == question_section_.end() ? nullptr : it->second;
}

std::size_t QuestionCatalog::question_count() const {
    std::size_t n = 0;
    for (const Section& s : sections_) n += s.questions.size();
    return n;
}

bool QuestionCatalog::operator==(const QuestionCatalog& other) const {
    if (version_ != other.version_ || sections_.size() != other.sections_.size()) return false;
    for (std::size_t i = 0; i < sections_.size(); ++i) {
        const Section& a = sections_[i];
        const Section& b = other.sections_[i];
        if (a.id != b.id || a.title != b.title || a.questions.size() != b.questions.size())
            return false;
        for (std::size_t j = 0; j < a.questions.size(); ++j) {
            const Question& qa = a.questions[j];
            const Question& qb = b.questions[j];
            if (qa.id != qb.id || qa.prompt != qb.prompt || qa.type != qb.type ||
                qa.choices != qb.choices || qa.star_choices != qb.star_choices)
                return false;
        }
    }
    return true;
}

const std::vector<std::string>& quality_ids() {
    static const std::vector<std::string> ids = {
        "installability",    "correctness", "reliability", "robustness",  "usability",
        "maintainability",   "reusability", "understandability", "visibility",
    };
    return ids;
}

namespace {

using Choices = std::vector<std::string>;

Question enum_q(std::string id, std::string prompt, Choices choices, Choices stars = {}) {
    Question q;
    q.id = std::move(id);
    q.prompt = std::move(prompt);
    q.type = AnswerType::enumeration;
    q.choices = std::move(choices);
    q.star_choices = std::move(stars);
    return q;
}

Question set_q(std::string id, std::string prompt, Choices choices, Choices stars = {}) {
    Question q = enum_q(std::move(id), std::move(prompt), std::move(choices), std::move(stars));
    q.type = AnswerType::set_of;
    return q;
}

Question typed_q(std::string id, std::string prompt, AnswerType type) {
    Question q;
    q.id = std::move(id);
    q.prompt = std::move(prompt);
    q.type = type;
    return q;
}

Question impression_q(std::string prefix) {
    return typed_q(prefix + ".impression", "Overall impression?", AnswerType::number);
}

Question comments_q(std::string prefix) {
    return typed_q(prefix + ".comments",
                   "Additional comments? (can cover any metrics you feel are missing, or any "
                   "other thoughts you have)",
                   AnswerType::string);
}

Section summary_section() {
    Section s;
    s.id = "summary";
    s.title = "Summary Information";
    s.questions = {
        typed_q("summary.name", "Software name?", AnswerType::string),
        typed_q("summary.url", "URL?", AnswerType::url),
        typed_q("summary.affiliation", "Affiliation (institution(s))", AnswerType::string),
        typed_q("summary.purpose", "Software purpose", AnswerType::string),
        typed_q("summary.developer_count",
                "Number of developers (all developers that have contributed at least one commit "
                "to the project)",
                AnswerType::number),
        enum_q("summary.funding", "How is the project funded?", {"unfunded", "unclear", "funded"},
               {"funded"}),
        typed_q("summary.initial_release", "Initial release date?", AnswerType::date),
        typed_q("summary.last_commit", "Last commit date?", AnswerType::date),
        enum_q("summary.status",
               "Status? (alive is defined as presence of commits in the last 18 months)",
               {"alive", "dead", "unclear"}),
        enum_q("summary.license", "License?",
               {"gnu_gpl", "bsd", "mit", "terms_of_use", "trial", "none", "unclear", "other"},
               {"other"}),
        set_q("summary.platforms", "Platforms?", {"windows", "linux", "os_x", "android", "other"},
              {"other"}),
        enum_q("summary.category",
               "Software Category? The concept category includes software that does not have an "
               "officially released version. Public software has a released version in the public "
               "domain. Private software has a released version available to authorized users "
               "only.",
               {"concept", "public", "private"}),
        enum_q("summary.development_model", "Development model?",
               {"open_source", "freeware", "commercial", "unclear"}),
        typed_q("summary.publications",
                "Publications about the software? Refers to publications that have used or "
                "mentioned the software. (number or unknown)",
                AnswerType::string),
        typed_q("summary.source_url", "Source code URL? (url(s), n/a or unclear)",
                AnswerType::string),
        set_q("summary.languages", "Programming language(s)?",
              {"fortran", "matlab", "c", "c++", "java", "r", "ruby", "python", "cython", "basic",
               "pascal", "idl", "unclear", "other"},
              {"other"}),
        enum_q("summary.performance",
               "Is there evidence that performance was considered? Performance refers to either "
               "speed, storage, or throughput.",
               {"yes", "no"}, {"yes"}),
        comments_q("summary"),
    };
    return s;
}

Section installability_section() {
    Section s;
    s.id = "installability";
    s.title = "Installability (Measured via installation on a virtual machine.)";
    s.questions = {
        enum_q("install.instructions", "Are there installation instructions?", {"yes", "no"}),
        enum_q("install.one_place",
               "Are the installation instructions in one place? Place referring to a single "
               "document or web-page.",
               {"yes", "no", "n/a"}),
        enum_q("install.linear",
               "Are the installation instructions linear? Linear meaning progressing in a single "
               "series of steps.",
               {"yes", "no", "n/a"}),
        enum_q("install.no_deps_assumed",
               "Are the instructions written as if the person doing the installation has none of "
               "the dependent packages installed?",
               {"yes", "no", "unclear"}),
        enum_q("install.os_versions", "Are compatible operating system versions listed?",
               {"yes", "no"}),
        enum_q("install.automation",
               "Is there something in place to automate the installation (makefile, script, "
               "installer, etc)?",
               {"yes", "no"}, {"yes"}),
        enum_q("install.break_message",
               "If the software installation broke, was a descriptive error message displayed?",
               {"yes", "no", "n/a"}),
        enum_q("install.validation", "Is there a specified way to validate the installation?",
               {"yes", "no"}, {"yes"}),
        typed_q("install.steps",
                "How many steps were involved in the installation? (Includes manual steps like "
                "unzipping files)",
                AnswerType::number),
        enum_q("install.os_used", "What OS was used for the installation?",
               {"windows", "linux", "os_x", "android", "other"}, {"other"}),
        typed_q("install.extra_packages",
                "How many extra software packages need to be installed before or during "
                "installation?",
                AnswerType::number),
        enum_q("install.versions_listed", "Are required package versions listed?",
               {"yes", "no", "n/a"}),
        enum_q("install.dep_instructions",
               "Are there instructions for the installation of required packages / dependencies?",
               {"yes", "no", "n/a"}),
        enum_q("install.uninstall_problems",
               "Run uninstall, if available. Were any obvious problems caused?",
               {"yes", "no", "unavail"}, {"yes"}),
        impression_q("install"),
        comments_q("install"),
    };
    return s;
}

Section correctness_section() {
    Section s;
    s.id = "correctness";
    s.title = "Correctness and Verifiability";
    s.questions = {
        enum_q("correct.requirements",
               "Any reference to the requirements specifications of the program or theory "
               "manuals?",
               {"yes", "no", "unclear"}, {"yes"}),
        set_q("correct.confidence_tools",
              "What tools or techniques are used to build confidence of correctness?",
              {"literate_programming", "automated_testing", "symbolic_execution", "model_checking",
               "assertions", "sphinx", "doxygen", "javadoc", "confluence", "unclear", "other"},
              {"other"}),
        enum_q("correct.tutorial", "If there is a getting started tutorial?", {"yes", "no"}),
        enum_q("correct.tutorial_linear", "Are the tutorial instructions linear?",
               {"yes", "no", "n/a"}),
        enum_q("correct.expected_output",
               "Does the getting started tutorial provide an expected output?",
               {"yes", "no", "n/a"}, {"no"}),
        enum_q("correct.output_match", "Does your tutorial output match the expected output?",
               {"yes", "no", "n/a"}),
        enum_q("correct.unit_tests", "Are unit tests available?", {"yes", "no", "unclear"}),
        enum_q("correct.ci",
               "Is there evidence of continuous integration? (for example mentioned in "
               "documentation, Jenkins, Travis CI, Bamboo, other)",
               {"yes", "no", "unclear"}, {"yes"}),
        impression_q("correct"),
        comments_q("correct"),
    };
    return s;
}

Section reliability_section() {
    Section s;
    s.id = "reliability";
    s.title = "Surface Reliability";
    s.questions = {
        enum_q("reliability.break_install", "Did the software \"break\" during installation?",
               {"yes", "no"}, {"yes"}),
        enum_q("reliability.install_recoverable",
               "If the software installation broke, was the installation instance recoverable?",
               {"yes", "no", "n/a"}),
        enum_q("reliability.break_tutorial",
               "Did the software \"break\" during the initial tutorial testing?",
               {"yes", "no", "n/a"}, {"yes"}),
        enum_q("reliability.tutorial_error_message",
               "If the tutorial testing broke, was a descriptive error message displayed?",
               {"yes", "no", "n/a"}),
        enum_q("reliability.tutorial_recoverable",
               "If the tutorial testing broke, was the tutorial testing instance recoverable?",
               {"yes", "no", "n/a"}),
        impression_q("reliability"),
        comments_q("reliability"),
    };
    return s;
}

Section robustness_section() {
    Section s;
    s.id = "robustness";
    s.title = "Surface Robustness";
    s.questions = {
        enum_q("robust.unexpected_input",
               "Does the software handle unexpected/unanticipated input (like data of the wrong "
               "type, empty input, missing files or links) reasonably? (a reasonable response "
               "can include an appropriate error message.)",
               {"yes", "no"}, {"no"}),
        enum_q("robust.newline_handling",
               "For any plain text input files, if all new lines are replaced with new lines and "
               "carriage returns, will the software handle this gracefully?",
               {"yes", "no", "n/a"}, {"no"}),
        impression_q("robust"),
        comments_q("robust"),
    };
    return s;
}

Section usability_section() {
    Section s;
    s.id = "usability";
    s.title = "Surface Usability";
    s.questions = {
        enum_q("usability.tutorial", "Is there a getting started tutorial?", {"yes", "no"}),
        enum_q("usability.user_manual", "Is there a user manual?", {"yes", "no"}),
        enum_q("usability.user_characteristics", "Are expected user characteristics documented?",
               {"yes", "no"}),
        set_q("usability.support",
              "What is the user support model? FAQ? User forum? E-mail address to direct "
              "questions? Etc.",
              {"faq", "user_forum", "email", "mailing_list", "chat", "discussion_board",
               "issue_tracker", "none", "other"},
              {"other"}),
        impression_q("usability"),
        comments_q("usability"),
    };
    return s;
}

Section maintainability_section() {
    Section s;
    s.id = "maintainability";
    s.title = "Maintainability";
    s.questions = {
        typed_q("maintain.version", "What is the current version number?", AnswerType::string),
        enum_q("maintain.review_info",
               "Is there any information on how code is reviewed, or how to contribute?",
               {"yes", "no"}, {"yes"}),
        enum_q("maintain.artifacts",
               "Are artifacts available? (List every type of file that is not a code file)",
               {"yes", "no", "unclear"}, {"yes"}),
        set_q("maintain.issue_tracker", "What issue tracking tool is employed?",
              {"trac", "jira", "redmine", "email", "discussion_board", "sourceforge",
               "google_code", "git", "bitbucket", "none", "unclear", "other"},
              {"other"}),
        typed_q("maintain.pct_issues_closed",
                "What is the percentage of identified issues that are closed?",
                AnswerType::percentage),
        typed_q("maintain.pct_comments", "What percentage of code is comments?",
                AnswerType::percentage),
        enum_q("maintain.vcs", "Which version control system is in use?",
               {"svn", "cvs", "git", "github", "unclear", "other"}, {"other"}),
        impression_q("maintain"),
        comments_q("maintain"),
    };
    return s;
}

Section reusability_section() {
    Section s;
    s.id = "reusability";
    s.title = "Reusability";
    s.questions = {
        typed_q("reuse.code_files", "How many code files are there?", AnswerType::number),
        enum_q("reuse.api_doc", "Is API documented?", {"yes", "no", "n/a"}),
        impression_q("reuse"),
        comments_q("reuse"),
    };
    return s;
}

Section understandability_section() {
    Section s;
    s.id = "understandability";
    s.title = "Surface Understandability (Based on 10 random source files)";
    s.questions = {
        enum_q("understand.indentation", "Consistent indentation and formatting style?",
               {"yes", "no", "n/a"}),
        enum_q("understand.coding_standard", "Explicit identification of a coding standard?",
               {"yes", "no", "n/a"}, {"yes"}),
        enum_q("understand.identifiers",
               "Are the code identifiers consistent, distinctive, and meaningful?",
               {"yes", "no", "n/a"}, {"no"}),
        enum_q("understand.constants",
               "Are constants (other than 0 and 1) hard coded into the program?",
               {"yes", "no", "n/a"}, {"no"}),
        enum_q("understand.comments_clear",
               "Comments are clear, indicate what is being done, not how?", {"yes", "no", "n/a"},
               {"no"}),
        enum_q("understand.param_order", "Parameters are in the same order for all functions?",
               {"yes", "no", "n/a"}, {"no"}),
        enum_q("understand.algorithm_refs", "Is the name/URL of any algorithms used mentioned?",
               {"yes", "no", "n/a"}, {"no"}),
        enum_q("understand.modularized", "Is code modularized?", {"yes", "no", "n/a"}, {"no"}),
        impression_q("understand"),
        comments_q("understand"),
    };
    return s;
}

Section visibility_section() {
    Section s;
    s.id = "visibility";
    s.title = "Visibility/Transparency";
    s.questions = {
        enum_q("visibility.process_defined",
               "Is the development process defined? If yes, what process is used.",
               {"yes", "no", "n/a"}, {"yes"}),
        enum_q("visibility.process_docs",
               "Are there any documents recording the development process and status?",
               {"yes", "no"}, {"yes"}),
        enum_q("visibility.dev_env", "Is the development environment documented?", {"yes", "no"},
               {"yes"}),
        enum_q("visibility.release_notes", "Are there release notes?", {"yes", "no"}, {"yes"}),
        impression_q("visibility"),
        comments_q("visibility"),
    };
    return s;
}

Section repo_history_section() {
    Section s;
    s.id = "repo_history";
    s.title = "Repo Metrics (Commit History)";
    s.questions = {
        typed_q("hist.text_files", "Number of text-based files.", AnswerType::number),
        typed_q("hist.binary_files", "Number of binary files.", AnswerType::number),
        typed_q("hist.total_lines", "Number of total lines in text-based files.",
                AnswerType::number),
        typed_q("hist.lines_added", "Number of total lines added to text-based files.",
                AnswerType::number),
        typed_q("hist.lines_deleted", "Number of total lines deleted from text-based files.",
                AnswerType::number),
        typed_q("hist.total_commits", "Number of total commits.", AnswerType::number),
        typed_q("hist.commits_by_year",
                "Numbers of commits by year in the last 5 years. (Count from as early as possible "
                "if the project is younger than 5 years.)",
                AnswerType::string),
        typed_q("hist.commits_by_month", "Numbers of commits by month in the last 12 months.",
                AnswerType::string),
    };
    return s;
}

Section repo_lines_section() {
    Section s;
    s.id = "repo_lines";
    s.title = "Repo Metrics (Line Counts)";
    s.questions = {
        typed_q("lines.text_files", "Number of text-based files.", AnswerType::number),
        typed_q("lines.total_lines", "Number of total lines in text-based files.",
                AnswerType::number),
        typed_q("lines.code_lines", "Number of code lines in text-based files.",
                AnswerType::number),
        typed_q("lines.comment_lines", "Number of comment lines in text-based files.",
                AnswerType::number),
        typed_q("lines.blank_lines", "Number of blank lines in text-based files.",
                AnswerType::number),
    };
    return s;
}

Section repo_forge_section() {
    Section s;
    s.id = "repo_forge";
    s.title = "Repo Metrics (Code Forge)";
    s.questions = {
        typed_q("forge.stars", "Number of stars.", AnswerType::number),
        typed_q("forge.forks", "Number of forks.", AnswerType::number),
        typed_q("forge.watchers", "Number of people watching this repo.", AnswerType::number),
        typed_q("forge.open_prs", "Number of open pull requests.", AnswerType::number),
        typed_q("forge.closed_prs", "Number of closed pull requests.", AnswerType::number),
    };
    return s;
}

}  // namespace

const QuestionCatalog& builtin_catalog() {
    static const QuestionCatalog catalog("1.0", {
        summary_section(),
        installability_section(),
        correctness_section(),
        reliability_section(),
        robustness_section(),
        usability_section(),
        maintainability_section(),
        reusability_section(),
        understandability_section(),
        visibility_section(),
        repo_history_section(),
        repo_lines_section(),
        repo_forge_section(),
    });
    return catalog;
}

}  // namespace sotp
