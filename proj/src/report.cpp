#include "sotp/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "sotp/error.hpp"

namespace sotp {

namespace {

std::string lower_trim(std::string text) {
    std::transform(text.begin(), text.end(), text.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
        text.erase(text.begin());
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
        text.pop_back();
    return text;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        std::string item = text.substr(
            start, comma == std::string::npos ? std::string::npos : comma - start);
        item = lower_trim(std::move(item));
        if (!item.empty()) items.push_back(std::move(item));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return items;
}

std::string format_weight(double w) { return fmt::format("{:.4f}", w); }

std::string format_score(double s) {
    if (s == static_cast<std::int64_t>(s)) return fmt::format("{}", static_cast<std::int64_t>(s));
    return fmt::format("{:.2f}", s);
}

std::string format_pct(const std::optional<double>& pct) {
    if (!pct) return "n/a";
    return fmt::format("{:.1f}", *pct);
}

std::string csv_quote(const std::string& text) {
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += "\"\"";
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

void AssessmentBundle::check_complete() const {
    std::vector<std::string> missing;
    for (const std::string& id : ledger.selected_ids())
        if (packages.find(id) == packages.end()) missing.push_back(id);
    if (!missing.empty())
        throw Error(ErrorKind::validation,
                    fmt::format("bundle is missing package data for: {}",
                                fmt::join(missing, ", ")));
}

double kendall_tau(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    if (a.size() != b.size() || a.size() < 2)
        throw Error(ErrorKind::validation, "kendall_tau needs two orderings of the same ids");
    std::map<std::string, std::size_t> rank_b;
    for (std::size_t i = 0; i < b.size(); ++i) rank_b[b[i]] = i;
    if (rank_b.size() != b.size())
        throw Error(ErrorKind::validation, "kendall_tau orderings must not repeat ids");

    std::int64_t concordant = 0, discordant = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            auto it_i = rank_b.find(a[i]);
            auto it_j = rank_b.find(a[j]);
            if (it_i == rank_b.end() || it_j == rank_b.end())
                throw Error(ErrorKind::validation, "kendall_tau orderings cover different ids");
            if (it_i->second < it_j->second)
                ++concordant;
            else
                ++discordant;
        }
    }
    double pairs = static_cast<double>(a.size()) * (a.size() - 1) / 2.0;
    return (concordant - discordant) / pairs;
}

ResearchQuestionAggregates aggregate_research_questions(const AssessmentBundle& bundle) {
    bundle.check_complete();
    ResearchQuestionAggregates rq;

    for (const std::string& id : bundle.ledger.selected_ids()) {
        const PackageData& data = bundle.packages.at(id);
        const AnswerSet& answers = data.answers;

        if (const Answer* artifacts = answers.find("maintain.artifacts")) {
            if (artifacts->token() == "yes" && artifacts->note)
                for (const std::string& item : split_list(*artifacts->note))
                    ++rq.artifact_types[item];
        }
        if (const Answer* tracker = answers.find("maintain.issue_tracker"))
            for (const std::string& token : tracker->tokens()) ++rq.issue_trackers[token];
        if (const Answer* vcs = answers.find("maintain.vcs")) ++rq.version_control[vcs->token()];
        if (const Answer* ci = answers.find("correct.ci")) {
            if (ci->token() == "yes" && ci->note && !ci->note->empty())
                ++rq.ci_evidence[lower_trim(*ci->note)];
            else
                ++rq.ci_evidence[ci->token()];
        }
        if (const Answer* tools = answers.find("correct.confidence_tools"))
            for (const std::string& token : tools->tokens()) ++rq.correctness_tools[token];
        if (const Answer* model = answers.find("summary.development_model"))
            ++rq.development_models[model->token()];
        if (const Answer* process = answers.find("visibility.process_defined"))
            ++rq.process_defined[process->token()];
    }

    for (const RankedPackage& r : bundle.ranking.order) rq.methodology_order.push_back(r.package_id);

    std::vector<std::string> ids = bundle.ledger.selected_ids();
    std::sort(ids.begin(), ids.end(), [&](const std::string& a, const std::string& b) {
        std::int64_t sa = bundle.packages.at(a).forge.stars;
        std::int64_t sb = bundle.packages.at(b).forge.stars;
        if (sa != sb) return sa > sb;
        return a < b;
    });
    rq.stars_order = std::move(ids);
    rq.kendall_tau = kendall_tau(rq.methodology_order, rq.stars_order);
    return rq;
}

namespace {

void frequency_table(std::string& out, const std::string& heading, const FrequencyTable& table) {
    out += fmt::format("{}\n\n", heading);
    if (table.empty()) {
        out += "No data collected.\n\n";
        return;
    }
    out += "| Value | Packages |\n|---|---|\n";
    for (const auto& [value, count] : table) out += fmt::format("| {} | {} |\n", value, count);
    out += "\n";
}

}  // namespace

std::string render_markdown(const AssessmentBundle& bundle,
                            const ResearchQuestionAggregates& aggregates) {
    bundle.check_complete();
    const std::vector<std::string> selected = bundle.ledger.selected_ids();

    std::string out;
    out += "# Software Assessment Report\n\n";
    out += fmt::format("- Assessment date: {}\n", bundle.ledger.as_of.to_string());
    out += fmt::format("- Candidates: {}\n", bundle.ledger.initial_count);
    out += fmt::format("- Selected: {}\n", selected.size());
    out += fmt::format("- Filtered: {}\n\n", bundle.ledger.count_in(PackageState::filtered));

    out += "## Candidate ledger\n\n";
    out += "| Package | Name | State | Filter reason |\n|---|---|---|---|\n";
    for (const PackageRecord& r : bundle.ledger.records) {
        std::string reason;
        if (r.filter_reason)
            reason = fmt::format("{}: {}", filter_kind_name(r.filter_reason->kind),
                                 r.filter_reason->note);
        out += fmt::format("| {} | {} | {} | {} |\n", r.id, r.name, package_state_name(r.state),
                           reason);
    }
    out += "\n";

    out += "## Quality scores\n\n";
    out += "| Package |";
    for (const std::string& q : quality_ids()) out += fmt::format(" {} |", q);
    out += "\n|---|";
    for (std::size_t i = 0; i < quality_ids().size(); ++i) out += "---|";
    out += "\n";
    for (const std::string& id : selected) {
        out += fmt::format("| {} |", id);
        const QualityScores& scores = bundle.packages.at(id).scores;
        for (const std::string& q : quality_ids()) {
            auto it = scores.by_quality.find(q);
            out += fmt::format(" {} |",
                               it == scores.by_quality.end() ? "n/a" : format_score(it->second.score));
        }
        out += "\n";
    }
    out += "\n";

    bool any_notes = false;
    for (const std::string& id : selected) {
        for (const auto& [quality, score] : bundle.packages.at(id).scores.by_quality)
            for (const std::string& note : score.notes) {
                out += fmt::format("Note ({}, {}): {}\n", id, quality, note);
                any_notes = true;
            }
    }
    if (any_notes) out += "\n";

    out += "## AHP ranking\n\n";
    out += fmt::format("- Score-to-judgment mode: {}\n", ahp_mode_name(bundle.ranking.mode));
    out += "- Criteria weights:";
    for (std::size_t q = 0; q < bundle.ranking.quality_ids.size(); ++q)
        out += fmt::format(" {} {}{}", bundle.ranking.quality_ids[q],
                           format_weight(bundle.ranking.criteria_weights[q]),
                           q + 1 < bundle.ranking.quality_ids.size() ? "," : "");
    out += "\n\n";

    out += "| Rank | Package | Weight |\n|---|---|---|\n";
    for (const RankedPackage& r : bundle.ranking.order)
        out += fmt::format("| {} | {} | {} |\n", r.rank, r.package_id, format_weight(r.weight));
    out += "\n";

    for (const auto& group : bundle.ranking.ties)
        out += fmt::format("Tie: {} share a rank.\n", fmt::join(group, ", "));
    if (!bundle.ranking.ties.empty()) out += "\n";

    for (const std::string& warning : bundle.ranking.warnings)
        out += fmt::format("**Warning:** {}\n", warning);
    if (!bundle.ranking.warnings.empty()) out += "\n";

    out += "Per-quality consistency:\n\n";
    out += "| Quality | lambda_max | CI | CR |\n|---|---|---|---|\n";
    for (const std::string& q : bundle.ranking.quality_ids) {
        const PriorityResult& result = bundle.ranking.per_quality.at(q);
        out += fmt::format("| {} | {:.6f} | {:.6f} | {:.6f} |\n", q, result.lambda_max,
                           result.consistency_index, result.consistency_ratio);
    }
    out += "\n";

    out += "## Sensitivity\n\n";
    out += fmt::format("- Perturbation delta: {}\n", format_score(bundle.sensitivity.delta));
    out += fmt::format("- Stability: {:.4f} ({} of {} perturbations preserve the full order)\n",
                       bundle.sensitivity.stability,
                       static_cast<std::size_t>(std::lround(
                           bundle.sensitivity.stability *
                           static_cast<double>(bundle.sensitivity.perturbations.size()))),
                       bundle.sensitivity.perturbations.size());
    if (bundle.sensitivity.min_rank1_flip)
        out += fmt::format("- Smallest perturbation that flipped rank 1: {}\n",
                           format_score(*bundle.sensitivity.min_rank1_flip));
    else
        out += "- No perturbation flipped rank 1.\n";
    out += "\n";

    std::size_t changed = 0;
    for (const PerturbationOutcome& p : bundle.sensitivity.perturbations)
        if (p.order_changed) ++changed;
    if (changed == 0) {
        out += "No perturbation changed the ranking.\n\n";
    } else {
        out += "| Package | Quality | Delta | Resulting order |\n|---|---|---|---|\n";
        for (const PerturbationOutcome& p : bundle.sensitivity.perturbations) {
            if (!p.order_changed) continue;
            out += fmt::format("| {} | {} | {:+g} | {} |\n", p.package_id, p.quality_id, p.delta,
                               fmt::join(p.order, " > "));
        }
        out += "\n";
    }

    out += "## Research question aggregates\n\n";
    frequency_table(out, "### RQ1: artifacts present", aggregates.artifact_types);
    frequency_table(out, "### RQ2: issue trackers", aggregates.issue_trackers);
    frequency_table(out, "### RQ2: version control systems", aggregates.version_control);
    frequency_table(out, "### RQ2: continuous integration evidence", aggregates.ci_evidence);
    frequency_table(out, "### RQ2: correctness tools and techniques",
                    aggregates.correctness_tools);
    frequency_table(out, "### RQ3: development models", aggregates.development_models);
    frequency_table(out, "### RQ3: development process defined", aggregates.process_defined);

    out += "### RQ6: methodology ranking vs community rating\n\n";
    out += "| Rank | By methodology | By stars |\n|---|---|---|\n";
    for (std::size_t i = 0; i < aggregates.methodology_order.size(); ++i)
        out += fmt::format("| {} | {} | {} |\n", i + 1, aggregates.methodology_order[i],
                           aggregates.stars_order[i]);
    out += fmt::format("\nKendall tau (methodology vs stars): {:.4f}\n\n", aggregates.kendall_tau);

    out += "## Package details\n\n";
    for (const std::string& id : selected) {
        const PackageData& data = bundle.packages.at(id);
        const PackageRecord* record = bundle.ledger.find(id);
        out += fmt::format("### {}\n\n", id);
        if (record != nullptr && !record->name.empty())
            out += fmt::format("- Name: {}\n", record->name);
        if (record != nullptr && record->url) out += fmt::format("- URL: {}\n", *record->url);
        out += fmt::format("- Status: {} (as of {})\n", status_name(data.derived.status),
                           data.derived.as_of.to_string());
        out += fmt::format("- Stars {} / forks {} / watchers {}\n", data.forge.stars,
                           data.forge.forks, data.forge.watchers);
        out += fmt::format("- Pull requests: {} open, {} closed\n", data.forge.open_prs,
                           data.forge.closed_prs);
        out += fmt::format("- Issues: {} open, {} closed ({}% closed)\n", data.forge.open_issues,
                           data.forge.closed_issues, format_pct(data.derived.issues_closed_pct));
        out += fmt::format("- Commits: {} total by {} developer{}, {} to {}\n",
                           data.history.total_commits, data.history.developer_count,
                           data.history.developer_count == 1 ? "" : "s",
                           data.history.first_commit_date.to_string(),
                           data.history.last_commit_date.to_string());
        out += fmt::format("- Lines: +{} / -{} across history\n", data.history.lines_added,
                           data.history.lines_deleted);
        out += fmt::format(
            "- Tree: {} text files, {} binary files; {} lines ({} code, {} comment, {} blank; "
            "{}% comments)\n",
            data.tree.text_files, data.tree.binary_files, data.tree.totals.total,
            data.tree.totals.code, data.tree.totals.comment, data.tree.totals.blank,
            format_pct(data.derived.comments_pct));
        out += "- Commits by year:";
        for (const auto& [year, count] : data.history.commits_by_year)
            out += fmt::format(" {}:{}", year, count);
        out += "\n- Commits by month:";
        for (const auto& [month, count] : data.history.commits_by_month)
            out += fmt::format(" {}:{}", month, count);
        out += "\n\n";
    }
    return out;
}

std::string render_csv(const AssessmentBundle& bundle) {
    bundle.check_complete();

    std::map<std::string, const RankedPackage*> ranked;
    for (const RankedPackage& r : bundle.ranking.order) ranked[r.package_id] = &r;

    std::string out =
        "package,name,status,stars,forks,watchers,open_prs,closed_prs,open_issues,"
        "closed_issues,pct_issues_closed,total_commits,developers,first_commit,last_commit,"
        "lines_added,lines_deleted,text_files,binary_files,total_lines,code_lines,"
        "comment_lines,blank_lines,pct_comments";
    for (const std::string& q : quality_ids()) out += fmt::format(",score_{}", q);
    out += ",aggregate_weight,rank\n";

    for (const std::string& id : bundle.ledger.selected_ids()) {
        const PackageData& data = bundle.packages.at(id);
        const PackageRecord* record = bundle.ledger.find(id);
        out += csv_quote(id);
        out += ',';
        out += csv_quote(record != nullptr ? record->name : id);
        out += fmt::format(",{}", status_name(data.derived.status));
        out += fmt::format(",{},{},{}", data.forge.stars, data.forge.forks, data.forge.watchers);
        out += fmt::format(",{},{}", data.forge.open_prs, data.forge.closed_prs);
        out += fmt::format(",{},{}", data.forge.open_issues, data.forge.closed_issues);
        out += fmt::format(",{}", format_pct(data.derived.issues_closed_pct));
        out += fmt::format(",{},{}", data.history.total_commits, data.history.developer_count);
        out += fmt::format(",{},{}", data.history.first_commit_date.to_string(),
                           data.history.last_commit_date.to_string());
        out += fmt::format(",{},{}", data.history.lines_added, data.history.lines_deleted);
        out += fmt::format(",{},{}", data.tree.text_files, data.tree.binary_files);
        out += fmt::format(",{},{},{},{}", data.tree.totals.total, data.tree.totals.code,
                           data.tree.totals.comment, data.tree.totals.blank);
        out += fmt::format(",{}", format_pct(data.derived.comments_pct));
        for (const std::string& q : quality_ids()) {
            auto it = data.scores.by_quality.find(q);
            out += fmt::format(
                ",{}", it == data.scores.by_quality.end() ? "n/a" : format_score(it->second.score));
        }
        const RankedPackage* rank = ranked.count(id) ? ranked.at(id) : nullptr;
        if (rank != nullptr)
            out += fmt::format(",{},{}", format_weight(rank->weight), rank->rank);
        else
            out += ",n/a,n/a";
        out += "\n";
    }
    return out;
}

}  // namespace sotp
