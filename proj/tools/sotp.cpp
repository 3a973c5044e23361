#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include "sotp/workspace.hpp"

namespace {

using namespace sotp;

// Exit codes: 0 success, 1 usage, then one per failure class.
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;
constexpr int kExitComputation = 4;
constexpr int kExitNetwork = 5;

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::validation: return kExitValidation;
        case ErrorKind::io: return kExitIo;
        case ErrorKind::network: return kExitNetwork;
        case ErrorKind::computation: return kExitComputation;
    }
    return 1;
}

int report_outcome(const StageOutcome& outcome) {
    for (const std::string& line : outcome.lines) std::cout << line << "\n";
    if (outcome.ok()) return 0;
    for (const StageFailure& failure : outcome.failures)
        std::cerr << fmt::format("error [{}]: {}\n", failure.package_id, failure.message);
    std::cerr << fmt::format("{} of {} packages failed\n", outcome.failures.size(),
                             outcome.failures.size() + outcome.lines.size());
    return exit_code_for(outcome.failures.front().kind);
}

std::optional<std::string> forge_token() {
    for (const char* name : {"SOTP_FORGE_TOKEN", "GITHUB_TOKEN"}) {
        const char* value = std::getenv(name);
        if (value != nullptr && *value != '\0') return std::string{value};
    }
    return std::nullopt;
}

void print_catalog_text(std::ostream& out) {
    for (const Section& section : builtin_catalog().sections()) {
        out << fmt::format("[{}] {}\n", section.id, section.title);
        for (const Question& q : section.questions) {
            out << fmt::format("  {}  ({})", q.id, answer_type_name(q.type));
            if (!q.choices.empty()) {
                out << " {";
                for (std::size_t i = 0; i < q.choices.size(); ++i) {
                    if (i != 0) out << ", ";
                    out << q.choices[i];
                    if (q.is_star_choice(q.choices[i])) out << "*";
                }
                out << "}";
            }
            out << "\n";
            out << fmt::format("      {}\n", q.prompt);
        }
    }
}

void print_catalog_json(std::ostream& out) {
    // Hand-rolled to keep section order; nlohmann objects sort keys.
    out << "[\n";
    bool first_section = true;
    for (const Section& section : builtin_catalog().sections()) {
        if (!first_section) out << ",\n";
        first_section = false;
        out << fmt::format("  {{\"section\": \"{}\", \"title\": \"{}\", \"questions\": [\n",
                           section.id, section.title);
        bool first_q = true;
        for (const Question& q : section.questions) {
            if (!first_q) out << ",\n";
            first_q = false;
            std::string prompt = q.prompt;
            std::string escaped;
            for (char c : prompt) {
                if (c == '"' || c == '\\') escaped += '\\';
                escaped += c;
            }
            out << fmt::format("    {{\"id\": \"{}\", \"type\": \"{}\", \"prompt\": \"{}\"", q.id,
                               answer_type_name(q.type), escaped);
            if (!q.choices.empty()) {
                out << ", \"choices\": [";
                for (std::size_t i = 0; i < q.choices.size(); ++i)
                    out << fmt::format("{}\"{}\"", i == 0 ? "" : ", ", q.choices[i]);
                out << "]";
            }
            if (!q.star_choices.empty()) {
                out << ", \"star_choices\": [";
                for (std::size_t i = 0; i < q.star_choices.size(); ++i)
                    out << fmt::format("{}\"{}\"", i == 0 ? "" : ", ", q.star_choices[i]);
                out << "]";
            }
            out << "}";
        }
        out << "\n  ]}";
    }
    out << "\n]\n";
}

void print_ledger(const PackageLedger& ledger) {
    std::cout << fmt::format("Ledger as of {}: {} candidates\n\n", ledger.as_of.to_string(),
                             ledger.initial_count);
    std::cout << fmt::format("{:<24} {:<10} {}\n", "initial list", "state", "filter reason");
    for (const PackageRecord& r : ledger.records) {
        std::string reason;
        if (r.filter_reason)
            reason = fmt::format("{}: {}", filter_kind_name(r.filter_reason->kind),
                                 r.filter_reason->note);
        std::cout << fmt::format("{:<24} {:<10} {}\n", r.id, package_state_name(r.state), reason);
    }
    std::cout << fmt::format("\nselected: {}  filtered: {}\n",
                             ledger.count_in(PackageState::selected),
                             ledger.count_in(PackageState::filtered));
    if (!ledger.events.empty()) {
        std::cout << "\nevents:\n";
        for (const LedgerEvent& e : ledger.events)
            std::cout << fmt::format("  {} {}: {} -> {} ({})\n", e.timestamp.to_iso8601(),
                                     e.package_id, package_state_name(e.from),
                                     package_state_name(e.to), e.reason);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Assessment toolkit: mine repositories, validate measurement-template answers, "
                 "score quality rubrics, rank packages with AHP, and render reports."};
    app.require_subcommand(1);

    std::string workspace_path = ".";
    app.add_option("-w,--workspace", workspace_path, "Assessment workspace directory")
        ->envname("SOTP_WORKSPACE");

    std::string catalog_format = "text";
    std::string out_file;
    CLI::App* cmd_catalog = app.add_subcommand("catalog", "Print the measurement template");
    cmd_catalog->add_option("--format", catalog_format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
    cmd_catalog->add_option("--out", out_file, "Write to a file instead of stdout");

    std::string only_package;
    CLI::App* cmd_validate = app.add_subcommand("validate", "Check answer files against the template");
    cmd_validate->add_option("--package", only_package, "Restrict to one package");

    std::string as_of_override;
    std::size_t jobs = 4;
    CLI::App* cmd_mine = app.add_subcommand("mine", "Mine local repository clones");
    cmd_mine->add_option("--package", only_package, "Restrict to one package");
    cmd_mine->add_option("--as-of", as_of_override, "Override the assessment date (YYYY-MM-DD)");
    cmd_mine->add_option("--jobs", jobs, "Parallel package limit");

    CLI::App* cmd_forge = app.add_subcommand("forge", "Fetch forge metrics into snapshots");
    cmd_forge->add_option("--package", only_package, "Restrict to one package");
    cmd_forge->add_option("--jobs", jobs, "Parallel package limit");

    std::string rubric_file;
    CLI::App* cmd_score = app.add_subcommand("score", "Score answers with the impression rubric");
    cmd_score->add_option("--package", only_package, "Restrict to one package");
    cmd_score->add_option("--rubric", rubric_file, "Replacement rubric (JSON)");

    CLI::App* cmd_rank = app.add_subcommand("rank", "Rank packages with AHP and run sensitivity");

    std::string report_format = "all";
    CLI::App* cmd_report = app.add_subcommand("report", "Render markdown and CSV reports");
    cmd_report->add_option("--format", report_format, "markdown, csv or all")
        ->check(CLI::IsMember({"markdown", "csv", "all"}));

    CLI::App* cmd_guide = app.add_subcommand("interview-guide", "Print the developer interview packet");
    cmd_guide->add_option("--out", out_file, "Write to a file instead of stdout");

    bool do_filter = false;
    std::size_t target_override = 0;
    std::string age_threshold_text;
    CLI::App* cmd_ledger = app.add_subcommand("ledger", "Show (and optionally filter) the candidate list");
    cmd_ledger->add_flag("--apply-filters", do_filter, "Run the scope/usage/age filter passes");
    cmd_ledger->add_option("--target", target_override, "Target list size (default from config)");
    cmd_ledger->add_option("--age-threshold", age_threshold_text,
                           "Only packages last changed before this date are age-filtered");

    CLI11_PARSE(app, argc, argv);

    try {
        std::optional<std::string> only;
        if (!only_package.empty()) only = only_package;

        if (cmd_catalog->parsed()) {
            if (out_file.empty()) {
                catalog_format == "json" ? print_catalog_json(std::cout)
                                         : print_catalog_text(std::cout);
            } else {
                std::ostringstream buffer;
                catalog_format == "json" ? print_catalog_json(buffer) : print_catalog_text(buffer);
                write_text_file(out_file, buffer.str());
            }
            return 0;
        }
        if (cmd_guide->parsed()) {
            std::string guide = emit_interview_guide();
            if (out_file.empty())
                std::cout << guide;
            else
                write_text_file(out_file, guide);
            return 0;
        }

        Workspace ws = Workspace::open(workspace_path);

        if (cmd_validate->parsed()) return report_outcome(run_validate(ws, only));
        if (cmd_mine->parsed()) {
            if (!as_of_override.empty()) ws.config.as_of = Date::parse(as_of_override);
            return report_outcome(run_mine(ws, only, jobs));
        }
        if (cmd_forge->parsed()) {
            auto client = make_https_client();
            return report_outcome(run_forge(ws, only, *client, forge_token(), jobs));
        }
        if (cmd_score->parsed()) {
            Rubric rubric = builtin_rubric();
            if (!rubric_file.empty()) {
                rubric = rubric_from_json(read_text_file(rubric_file));
                rubric.validate(builtin_catalog());
            }
            return report_outcome(run_score(ws, only, rubric));
        }
        if (cmd_rank->parsed()) {
            run_rank(ws);
            std::cout << fmt::format("wrote {}\n", ws.ranking_path().string());
            return 0;
        }
        if (cmd_report->parsed()) {
            std::vector<ReportFormat> formats;
            if (report_format == "markdown" || report_format == "all")
                formats.push_back(ReportFormat::markdown);
            if (report_format == "csv" || report_format == "all")
                formats.push_back(ReportFormat::csv);
            return report_outcome(run_report(ws, formats));
        }
        if (cmd_ledger->parsed()) {
            if (do_filter) {
                std::size_t target = target_override > 0 ? target_override : ws.config.target_size;
                Date threshold = age_threshold_text.empty() ? add_months(ws.config.as_of, -18)
                                                            : Date::parse(age_threshold_text);
                PackageLedger filtered = apply_filters(ws.ledger, target, threshold);
                write_text_file(ws.root() / "ledger.json", serialize_ledger(filtered));
                print_ledger(filtered);
            } else {
                print_ledger(ws.ledger);
            }
            return 0;
        }
    } catch (const sotp::Error& e) {
        std::cerr << fmt::format("error: {}\n", e.what());
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << fmt::format("error: {}\n", e.what());
        return 1;
    }
    return 1;
}
