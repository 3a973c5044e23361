#include <doctest.h>
#include <fmt/format.h>

#include <random>

#include "sotp/answers.hpp"
#include "sotp/error.hpp"

using namespace sotp;

namespace {

const QuestionCatalog& catalog() { return builtin_catalog(); }

std::vector<ParseIssue> issues_of(std::string_view text) {
    try {
        parse_answers(text, catalog());
    } catch (const ParseError& e) {
        return e.issues();
    }
    return {};
}

}  // namespace

TEST_CASE("simple enum answers bind directly") {
    AnswerSet set = parse_answers("install.instructions = yes\n", catalog());
    const Answer* a = set.find("install.instructions");
    REQUIRE(a != nullptr);
    CHECK(a->token() == "yes");
    CHECK_FALSE(a->note.has_value());
}

TEST_CASE("starred choices demand a note") {
    auto issues = issues_of("install.automation = yes\n");
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].code == IssueCode::missing_star_note);
    CHECK(issues[0].question_id == "install.automation");

    // With the note the same line is fine.
    AnswerSet set = parse_answers("install.automation = yes | note: cmake drives it\n", catalog());
    CHECK(set.find("install.automation")->note == "cmake drives it");

    // Unstarred choice of the same question needs no note.
    CHECK_NOTHROW(parse_answers("install.automation = no\n", catalog()));
}

TEST_CASE("every starred choice in the catalog is enforced") {
    for (const Section& section : catalog().sections()) {
        for (const Question& q : section.questions) {
            for (const std::string& star : q.star_choices) {
                std::string line = fmt::format("{} = {}\n", q.id, star);
                auto issues = issues_of(line);
                REQUIRE_MESSAGE(issues.size() == 1, q.id);
                CHECK(issues[0].code == IssueCode::missing_star_note);

                std::string with_note = fmt::format("{} = {} | note: explained\n", q.id, star);
                CHECK_NOTHROW(parse_answers(with_note, catalog()));
            }
        }
    }
}

TEST_CASE("unknown keys are rejected") {
    auto issues = issues_of("bogus.key = 3\n");
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].code == IssueCode::unknown_question);
}

TEST_CASE("type mismatches are located and typed") {
    auto issues = issues_of("install.steps = seven\n");
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].code == IssueCode::type_mismatch);
    CHECK(issues[0].line == 1);

    CHECK(issues_of("install.instructions = maybe\n")[0].code == IssueCode::type_mismatch);
    CHECK(issues_of("maintain.pct_comments = 120\n")[0].code == IssueCode::type_mismatch);
    CHECK(issues_of("summary.url = not-a-url\n")[0].code == IssueCode::type_mismatch);
    CHECK(issues_of("summary.initial_release = 12/25/2020\n")[0].code == IssueCode::type_mismatch);
    CHECK(issues_of("summary.platforms = linux,atari\n")[0].code == IssueCode::type_mismatch);
    CHECK(issues_of("summary.platforms = linux,linux\n")[0].code == IssueCode::type_mismatch);
}

TEST_CASE("duplicate keys are rejected") {
    auto issues = issues_of("install.instructions = yes\ninstall.instructions = no\n");
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].code == IssueCode::duplicate_key);
    CHECK(issues[0].line == 2);
}

TEST_CASE("syntax errors carry line numbers") {
    auto issues = issues_of("# fine\n\ninstall.instructions yes\n");
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].code == IssueCode::syntax);
    CHECK(issues[0].line == 3);
}

TEST_CASE("metadata keys populate the answer set") {
    AnswerSet set = parse_answers(
        "package = gmsh\n"
        "vm = VirtualBox 7.0 / Ubuntu 22.04\n"
        "summary.status = alive\n",
        catalog());
    CHECK(set.package_id == "gmsh");
    CHECK(set.vm_environment == "VirtualBox 7.0 / Ubuntu 22.04");
    CHECK(set.answers.size() == 1);
}

TEST_CASE("values bind by declared type") {
    AnswerSet set = parse_answers(
        "summary.developer_count = 12\n"
        "summary.initial_release = 2019\n"
        "summary.last_commit = 2024-11-30\n"
        "summary.url = https://example.org/tool\n"
        "summary.languages = c++,python\n"
        "maintain.pct_issues_closed = 75.5\n"
        "usability.support = faq,email\n",
        catalog());
    CHECK(set.find("summary.developer_count")->count() == 12);
    CHECK(set.find("summary.initial_release")->date().year_only);
    CHECK(set.find("summary.last_commit")->date() == Date{2024, 11, 30});
    CHECK(set.find("summary.languages")->tokens() ==
          std::vector<std::string>{"c++", "python"});
    CHECK(set.find("maintain.pct_issues_closed")->percent() == doctest::Approx(75.5));
    CHECK(set.find("usability.support")->tokens() == std::vector<std::string>{"faq", "email"});
}

TEST_CASE("CRLF input parses like LF input") {
    AnswerSet lf = parse_answers("package = p\ninstall.instructions = yes\n", catalog());
    AnswerSet crlf = parse_answers("package = p\r\ninstall.instructions = yes\r\n", catalog());
    CHECK(lf == crlf);
}

TEST_CASE("serialize then parse is the identity") {
    std::string text =
        "package = demo\n"
        "vm = qemu 8 / Debian 12\n"
        "summary.name = Demo\n"
        "summary.status = alive\n"
        "summary.initial_release = 2020\n"
        "summary.languages = c++,python\n"
        "install.instructions = yes\n"
        "install.automation = yes | note: top-level Makefile\n"
        "install.steps = 4\n"
        "maintain.pct_comments = 12.5\n";
    AnswerSet first = parse_answers(text, catalog());
    std::string round = serialize_answers(first, catalog());
    AnswerSet second = parse_answers(round, catalog());
    CHECK(first == second);
    // Serialization is stable once normalized.
    CHECK(serialize_answers(second, catalog()) == round);
}

TEST_CASE("parser is total over arbitrary input") {
    // Fuzz-ish: random lines of printable junk either parse or raise a
    // located ParseError; nothing else may escape.
    std::mt19937 rng(20240810);
    std::uniform_int_distribution<int> length(0, 40);
    std::uniform_int_distribution<int> byte(32, 126);
    std::uniform_int_distribution<int> lines(1, 8);
    const char* seeds[] = {"install.instructions = yes", "package = x",
                           "install.automation = yes | note: ok", "= = =", "#", "  ", "a=b|note:"};
    std::uniform_int_distribution<int> pick(0, 13);

    for (int round = 0; round < 500; ++round) {
        std::string text;
        int n = lines(rng);
        for (int i = 0; i < n; ++i) {
            int choice = pick(rng);
            if (choice < 7) {
                text += seeds[choice];
            } else {
                int len = length(rng);
                for (int k = 0; k < len; ++k) text += static_cast<char>(byte(rng));
            }
            text += '\n';
        }
        try {
            parse_answers(text, catalog());
        } catch (const ParseError& e) {
            CHECK_FALSE(e.issues().empty());
            for (const ParseIssue& issue : e.issues()) CHECK(issue.line >= 1);
        }
    }
}

TEST_CASE("completeness lists missing ids in catalog order") {
    AnswerSet empty;
    CompletenessReport all_missing = completeness(empty, catalog());
    CHECK(all_missing.answered == 0);
    CHECK(all_missing.total == kDeclaredQuestionCount);
    CHECK(all_missing.missing_count() == kDeclaredQuestionCount);
    CHECK(all_missing.missing_by_section.front().first == "summary");
    CHECK(all_missing.missing_by_section.front().second.front() == "summary.name");

    // Answer everything, then poke a single hole.
    AnswerSet full;
    for (const Section& section : catalog().sections()) {
        for (const Question& q : section.questions) {
            Answer a;
            a.question_id = q.id;
            a.type = q.type;
            switch (q.type) {
                case AnswerType::enumeration: a.value = q.choices.front(); break;
                case AnswerType::set_of: a.value = std::vector<std::string>{q.choices.front()}; break;
                case AnswerType::number: a.value = std::int64_t{1}; break;
                case AnswerType::percentage: a.value = 50.0; break;
                case AnswerType::date: a.value = Date{2024, 1, 1}; break;
                case AnswerType::url: a.value = std::string{"https://example.org"}; break;
                case AnswerType::string: a.value = std::string{"text"}; break;
            }
            if (q.is_star_choice(q.choices.empty() ? "" : q.choices.front())) a.note = "noted";
            full.answers.emplace(q.id, std::move(a));
        }
    }
    CompletenessReport none_missing = completeness(full, catalog());
    CHECK(none_missing.answered == kDeclaredQuestionCount);
    CHECK(none_missing.missing_count() == 0);

    full.answers.erase("usability.user_manual");
    CompletenessReport one_missing = completeness(full, catalog());
    CHECK(one_missing.missing_count() == 1);
    for (const auto& [section, missing] : one_missing.missing_by_section) {
        if (section == "usability") {
            REQUIRE(missing.size() == 1);
            CHECK(missing.front() == "usability.user_manual");
        } else {
            CHECK(missing.empty());
        }
    }
}
