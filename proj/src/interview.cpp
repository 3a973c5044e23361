#include <fmt/format.h>

#include "sotp/report.hpp"

namespace sotp {

namespace {

InterviewQuestion q(int number, std::string section, std::string text,
                    std::vector<std::string> tags = {}) {
    return InterviewQuestion{number, std::move(section), std::move(text), std::move(tags)};
}

constexpr const char* kBackground = "Information about the developers and users";
constexpr const char* kSoftware = "Information about the software";

}  // namespace

const std::vector<InterviewQuestion>& interview_questions() {
    static const std::vector<InterviewQuestion> questions = {
        q(1, kBackground, "Interviewees' current position/title? degrees?"),
        q(2, kBackground, "Interviewees' contribution to/relationship with the software?"),
        q(3, kBackground, "Length of time the interviewee has been involved with this software?"),
        q(4, kBackground, "How large is the development group?"),
        q(5, kBackground,
          "Do you have a defined process for accepting new contributions into your team?"),
        q(6, kBackground, "What is the typical background of a developer?"),
        q(7, kBackground,
          "What is your estimated number of users? How did you come up with that estimate?"),
        q(8, kBackground, "What is the typical background of a user?"),
        q(9, kSoftware,
          "Currently, what are the most significant obstacles in your development process?"),
        q(10, kSoftware,
          "How might you change your development process to remove or reduce these obstacles?"),
        q(11, kSoftware,
          "How does documentation fit into your development process? Would improved "
          "documentation help with the obstacles you typically face?",
          {"5b (traceability)", "5i (visibility/transparency)"}),
        q(12, kSoftware,
          "In the past, is there any major obstacle to your development process that has been "
          "solved? How did you solve it?"),
        q(13, kSoftware,
          "What is your software development model? For example, waterfall, agile, etc."),
        q(14, kSoftware,
          "What is your project management process? Do you think improve this process can "
          "tackle the current problem? Were any project management tools used?"),
        q(15, kSoftware,
          "Was it hard to ensure the correctness of the software? If there were any obstacles, "
          "what methods have been considered or practiced to improve the situation? If "
          "practiced, did it work?",
          {"5e (correctness)"}),
        q(16, kSoftware,
          "When designing the software, did you consider the ease of future changes? For "
          "example, will it be hard to change the structure of the system, modules or code "
          "blocks? What measures have been taken to ensure the ease of future changes and "
          "maintains?",
          {"5d (maintainability)", "5c (modifiability)"}),
        q(17, kSoftware,
          "Provide instances where users have misunderstood the software. What, if any, actions "
          "were taken to address understandability issues?",
          {"5f (understandability)"}),
        q(18, kSoftware, "What, if any, actions were taken to address usability issues?",
          {"5a (usability)"}),
        q(19, kSoftware,
          "Do you think the current documentation can clearly convey all necessary knowledge to "
          "the users? If yes, how did you successfully achieve it? If no, what improvements are "
          "needed?",
          {"5g (unambiguity)"}),
        q(20, kSoftware,
          "Do you have any concern that your computational results won't be reproducible in the "
          "future? Have you taken any steps to ensure reproducibility?",
          {"5h (reproducibility)"}),
    };
    return questions;
}

std::string emit_interview_guide() {
    std::string out;
    out += "Developer Interview Guide\n";
    out += "=========================\n";
    out += "\n";
    out += "Interviews are one-to-one and open-ended; the exact wording may shift in\n";
    out += "conversation, and follow-up questions (\"So, you are saying that ...?\",\n";
    out += "\"Please tell me more?\", \"Why do you think that is?\") are encouraged.\n";
    out += "Square brackets tag the research question a question feeds.\n";

    std::string current_section;
    for (const InterviewQuestion& question : interview_questions()) {
        if (question.section != current_section) {
            current_section = question.section;
            out += fmt::format("\n{}\n", current_section);
            out += std::string(current_section.size(), '-');
            out += "\n";
        }
        out += fmt::format("{:2d}. {}", question.number, question.text);
        if (!question.tags.empty())
            out += fmt::format(" [RQ {}]", fmt::join(question.tags, "; RQ "));
        out += "\n";
    }
    return out;
}

}  // namespace sotp
