#include "sotp/workspace.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <mutex>
#include <thread>

#include "sotp/derived.hpp"
#include "sotp/error.hpp"

namespace sotp {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string trim_copy(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string{s};
}

std::vector<std::string> parse_name_list(const std::string& text) {
    std::vector<std::string> names;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        std::string item = trim_copy(std::string_view(text).substr(
            start, comma == std::string::npos ? std::string::npos : comma - start));
        if (!item.empty()) names.push_back(std::move(item));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return names;
}

std::vector<double> parse_weight_list(const std::string& text) {
    std::vector<double> weights;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        std::string item = trim_copy(std::string_view(text).substr(
            start, comma == std::string::npos ? std::string::npos : comma - start));
        if (item.empty())
            throw Error(ErrorKind::validation, "criteria_weights has an empty entry");
        char* end = nullptr;
        double w = std::strtod(item.c_str(), &end);
        if (end != item.c_str() + item.size() || !(w >= 0.0))
            throw Error(ErrorKind::validation,
                        fmt::format("criteria_weights entry '{}' is not a nonnegative number",
                                    item));
        weights.push_back(w);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return weights;
}

}  // namespace

Config parse_config(std::string_view text) {
    Config config;
    bool saw_as_of = false;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = eol == std::string_view::npos ? text.substr(pos)
                                                              : text.substr(pos, eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (line.ends_with('\r')) line.remove_suffix(1);
        std::string stripped = trim_copy(line);
        if (stripped.empty() || stripped.starts_with('#')) continue;
        std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorKind::validation,
                        fmt::format("config line {}: expected 'key = value'", line_no));
        std::string key = trim_copy(std::string_view(stripped).substr(0, eq));
        std::string value = trim_copy(std::string_view(stripped).substr(eq + 1));

        if (key == "as_of") {
            config.as_of = Date::parse(value);
            saw_as_of = true;
        } else if (key == "target_size") {
            char* end = nullptr;
            long n = std::strtol(value.c_str(), &end, 10);
            if (end != value.c_str() + value.size() || n < 1)
                throw Error(ErrorKind::validation,
                            fmt::format("config line {}: target_size must be a positive integer",
                                        line_no));
            config.target_size = static_cast<std::size_t>(n);
        } else if (key == "ahp_mode") {
            config.ahp_mode = ahp_mode_from_name(value);
        } else if (key == "sensitivity_delta") {
            char* end = nullptr;
            double d = std::strtod(value.c_str(), &end);
            if (end != value.c_str() + value.size() || !(d > 0.0))
                throw Error(ErrorKind::validation,
                            fmt::format("config line {}: sensitivity_delta must be positive",
                                        line_no));
            config.sensitivity_delta = d;
        } else if (key == "criteria_weights") {
            config.criteria_weights = parse_weight_list(value);
        } else if (key == "ignore") {
            config.ignore = parse_name_list(value);
        } else {
            throw Error(ErrorKind::validation,
                        fmt::format("config line {}: unknown key '{}'", line_no, key));
        }
    }
    if (!saw_as_of)
        throw Error(ErrorKind::validation, "config must set as_of (YYYY-MM-DD)");
    return config;
}

Workspace Workspace::open(const fs::path& root) {
    Workspace ws;
    ws.root_ = root;
    fs::path config_path = root / "config";
    if (!fs::exists(config_path))
        throw Error(ErrorKind::io,
                    fmt::format("workspace '{}' has no config file", root.string()));
    ws.config = parse_config(read_text_file(config_path));
    fs::path ledger_path = root / "ledger.json";
    if (!fs::exists(ledger_path))
        throw Error(ErrorKind::io,
                    fmt::format("workspace '{}' has no ledger.json", root.string()));
    ws.ledger = load_ledger(read_text_file(ledger_path));
    return ws;
}

fs::path Workspace::package_dir(const std::string& id) const { return root_ / "packages" / id; }
fs::path Workspace::answers_path(const std::string& id) const {
    return package_dir(id) / "answers.txt";
}
fs::path Workspace::metrics_path(const std::string& id) const {
    return package_dir(id) / "metrics.json";
}
fs::path Workspace::snapshot_path(const std::string& id) const {
    return package_dir(id) / "forge.snapshot";
}
fs::path Workspace::scores_path(const std::string& id) const {
    return package_dir(id) / "scores.json";
}
fs::path Workspace::repo_path(const std::string& id) const {
    const PackageRecord* record = ledger.find(id);
    if (record != nullptr && record->repo_path) return root_ / *record->repo_path;
    return package_dir(id) / "repo";
}
fs::path Workspace::ranking_path() const { return root_ / "ranking.json"; }
fs::path Workspace::report_path(ReportFormat format) const {
    return root_ / (format == ReportFormat::markdown ? "report.md" : "report.csv");
}

std::vector<std::string> Workspace::stage_packages(const std::optional<std::string>& only) const {
    std::vector<std::string> ids = ledger.selected_ids();
    if (!only) return ids;
    if (std::find(ids.begin(), ids.end(), *only) == ids.end())
        throw Error(ErrorKind::validation,
                    fmt::format("package '{}' is not in the selected set", *only));
    return {*only};
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, fmt::format("cannot read '{}'", path.string()));
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_text_file(const fs::path& path, std::string_view content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, fmt::format("cannot write '{}'", path.string()));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorKind::io, fmt::format("failed writing '{}'", path.string()));
}

namespace {

json line_counts_to_json(const LineCounts& counts) {
    return {{"total", counts.total},
            {"code", counts.code},
            {"comment", counts.comment},
            {"blank", counts.blank}};
}

LineCounts line_counts_from_json(const json& doc) {
    LineCounts counts;
    counts.total = doc.at("total").get<std::int64_t>();
    counts.code = doc.at("code").get<std::int64_t>();
    counts.comment = doc.at("comment").get<std::int64_t>();
    counts.blank = doc.at("blank").get<std::int64_t>();
    return counts;
}

}  // namespace

std::string serialize_metrics(const PackageMetrics& metrics) {
    json doc;
    doc["as_of"] = metrics.as_of.to_string();

    json history;
    history["total_commits"] = metrics.history.total_commits;
    json by_year = json::object();
    for (const auto& [year, count] : metrics.history.commits_by_year)
        by_year[fmt::format("{}", year)] = count;
    history["commits_by_year"] = std::move(by_year);
    json by_month = json::object();
    for (const auto& [month, count] : metrics.history.commits_by_month) by_month[month] = count;
    history["commits_by_month"] = std::move(by_month);
    history["lines_added"] = metrics.history.lines_added;
    history["lines_deleted"] = metrics.history.lines_deleted;
    history["first_commit_date"] = metrics.history.first_commit_date.to_string();
    history["last_commit_date"] = metrics.history.last_commit_date.to_string();
    history["developer_count"] = metrics.history.developer_count;
    doc["history"] = std::move(history);

    json tree;
    tree["text_files"] = metrics.tree.text_files;
    tree["binary_files"] = metrics.tree.binary_files;
    tree["totals"] = line_counts_to_json(metrics.tree.totals);
    json per_language = json::object();
    for (const auto& [language, counts] : metrics.tree.per_language)
        per_language[language] = line_counts_to_json(counts);
    tree["per_language"] = std::move(per_language);
    doc["tree"] = std::move(tree);

    json derived;
    derived["status"] = status_name(metrics.status);
    if (metrics.comments_pct)
        derived["pct_comments"] = *metrics.comments_pct;
    else
        derived["pct_comments"] = nullptr;
    derived["comment_denominator"] = "code+comment";
    doc["derived"] = std::move(derived);

    return doc.dump(2) + "\n";
}

PackageMetrics load_metrics(std::string_view text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded())
        throw Error(ErrorKind::validation, "metrics document is not valid JSON");
    PackageMetrics metrics;
    try {
        metrics.as_of = Date::parse(doc.at("as_of").get<std::string>());
        const json& history = doc.at("history");
        metrics.history.total_commits = history.at("total_commits").get<std::int64_t>();
        for (const auto& [year, count] : history.at("commits_by_year").items())
            metrics.history.commits_by_year[std::stoi(year)] = count.get<std::int64_t>();
        for (const auto& [month, count] : history.at("commits_by_month").items())
            metrics.history.commits_by_month[month] = count.get<std::int64_t>();
        metrics.history.lines_added = history.at("lines_added").get<std::int64_t>();
        metrics.history.lines_deleted = history.at("lines_deleted").get<std::int64_t>();
        metrics.history.first_commit_date =
            Date::parse(history.at("first_commit_date").get<std::string>());
        metrics.history.last_commit_date =
            Date::parse(history.at("last_commit_date").get<std::string>());
        metrics.history.developer_count = history.at("developer_count").get<std::int64_t>();

        const json& tree = doc.at("tree");
        metrics.tree.text_files = tree.at("text_files").get<std::int64_t>();
        metrics.tree.binary_files = tree.at("binary_files").get<std::int64_t>();
        metrics.tree.totals = line_counts_from_json(tree.at("totals"));
        for (const auto& [language, counts] : tree.at("per_language").items())
            metrics.tree.per_language[language] = line_counts_from_json(counts);

        const json& derived = doc.at("derived");
        std::string status = derived.at("status").get<std::string>();
        metrics.status = status == "alive" ? PackageStatus::alive : PackageStatus::dead;
        if (derived.contains("pct_comments") && !derived["pct_comments"].is_null())
            metrics.comments_pct = derived["pct_comments"].get<double>();
    } catch (const json::exception& e) {
        throw Error(ErrorKind::validation, fmt::format("malformed metrics document: {}", e.what()));
    }
    return metrics;
}

std::string serialize_scores(const std::string& package_id, const QualityScores& scores) {
    json doc;
    doc["package"] = package_id;
    json by_quality = json::object();
    for (const auto& [quality, score] : scores.by_quality) {
        json q;
        q["score"] = score.score;
        q["raw_sum"] = score.raw_sum;
        json breakdown = json::array();
        for (const BreakdownItem& item : score.breakdown)
            breakdown.push_back({{"question", item.question_id}, {"points", item.points}});
        q["breakdown"] = std::move(breakdown);
        q["notes"] = score.notes;
        by_quality[quality] = std::move(q);
    }
    doc["scores"] = std::move(by_quality);
    return doc.dump(2) + "\n";
}

QualityScores load_scores(std::string_view text, std::string* package_id) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded())
        throw Error(ErrorKind::validation, "scores document is not valid JSON");
    QualityScores scores;
    try {
        if (package_id != nullptr) *package_id = doc.at("package").get<std::string>();
        for (const auto& [quality, q] : doc.at("scores").items()) {
            QualityScore score;
            score.score = q.at("score").get<double>();
            score.raw_sum = q.at("raw_sum").get<double>();
            for (const json& item : q.at("breakdown"))
                score.breakdown.push_back({item.at("question").get<std::string>(),
                                           item.at("points").get<double>()});
            if (q.contains("notes")) score.notes = q["notes"].get<std::vector<std::string>>();
            scores.by_quality[quality] = std::move(score);
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::validation, fmt::format("malformed scores document: {}", e.what()));
    }
    return scores;
}

std::string serialize_ranking(const RankingDocument& doc) {
    json out;
    out["mode"] = ahp_mode_name(doc.ranking.mode);
    out["package_ids"] = doc.ranking.package_ids;
    out["quality_ids"] = doc.ranking.quality_ids;
    json weights = json::object();
    for (std::size_t q = 0; q < doc.ranking.quality_ids.size(); ++q)
        weights[doc.ranking.quality_ids[q]] = doc.ranking.criteria_weights[q];
    out["criteria_weights"] = std::move(weights);

    json per_quality = json::object();
    for (const auto& [quality, result] : doc.ranking.per_quality) {
        json r;
        json priorities = json::object();
        for (std::size_t p = 0; p < doc.ranking.package_ids.size(); ++p)
            priorities[doc.ranking.package_ids[p]] = result.priorities[p];
        r["priorities"] = std::move(priorities);
        r["lambda_max"] = result.lambda_max;
        r["consistency_index"] = result.consistency_index;
        r["consistency_ratio"] = result.consistency_ratio;
        r["converged"] = result.converged;
        per_quality[quality] = std::move(r);
    }
    out["per_quality"] = std::move(per_quality);

    json aggregate = json::object();
    for (std::size_t p = 0; p < doc.ranking.package_ids.size(); ++p)
        aggregate[doc.ranking.package_ids[p]] = doc.ranking.aggregate[p];
    out["aggregate"] = std::move(aggregate);

    json order = json::array();
    for (const RankedPackage& r : doc.ranking.order)
        order.push_back({{"rank", r.rank}, {"package", r.package_id}, {"weight", r.weight}});
    out["order"] = std::move(order);
    out["ties"] = doc.ranking.ties;
    out["warnings"] = doc.ranking.warnings;

    json sensitivity;
    sensitivity["delta"] = doc.sensitivity.delta;
    sensitivity["baseline_order"] = doc.sensitivity.baseline_order;
    sensitivity["stability"] = doc.sensitivity.stability;
    if (doc.sensitivity.min_rank1_flip)
        sensitivity["min_rank1_flip"] = *doc.sensitivity.min_rank1_flip;
    else
        sensitivity["min_rank1_flip"] = nullptr;
    json perturbations = json::array();
    for (const PerturbationOutcome& p : doc.sensitivity.perturbations)
        perturbations.push_back({{"package", p.package_id},
                                 {"quality", p.quality_id},
                                 {"delta", p.delta},
                                 {"order_changed", p.order_changed},
                                 {"rank1_changed", p.rank1_changed},
                                 {"order", p.order}});
    sensitivity["perturbations"] = std::move(perturbations);
    out["sensitivity"] = std::move(sensitivity);

    return out.dump(2) + "\n";
}

RankingDocument load_ranking(std::string_view text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded())
        throw Error(ErrorKind::validation, "ranking document is not valid JSON");
    RankingDocument out;
    try {
        out.ranking.mode = ahp_mode_from_name(doc.at("mode").get<std::string>());
        out.ranking.package_ids = doc.at("package_ids").get<std::vector<std::string>>();
        out.ranking.quality_ids = doc.at("quality_ids").get<std::vector<std::string>>();
        for (const std::string& quality : out.ranking.quality_ids)
            out.ranking.criteria_weights.push_back(
                doc.at("criteria_weights").at(quality).get<double>());
        for (const auto& [quality, r] : doc.at("per_quality").items()) {
            PriorityResult result;
            for (const std::string& id : out.ranking.package_ids)
                result.priorities.push_back(r.at("priorities").at(id).get<double>());
            result.lambda_max = r.at("lambda_max").get<double>();
            result.consistency_index = r.at("consistency_index").get<double>();
            result.consistency_ratio = r.at("consistency_ratio").get<double>();
            result.converged = r.value("converged", true);
            out.ranking.per_quality[quality] = std::move(result);
        }
        for (const std::string& id : out.ranking.package_ids)
            out.ranking.aggregate.push_back(doc.at("aggregate").at(id).get<double>());
        for (const json& r : doc.at("order"))
            out.ranking.order.push_back({r.at("package").get<std::string>(),
                                         r.at("weight").get<double>(), r.at("rank").get<int>()});
        out.ranking.ties = doc.value("ties", std::vector<std::vector<std::string>>{});
        out.ranking.warnings = doc.value("warnings", std::vector<std::string>{});

        const json& sens = doc.at("sensitivity");
        out.sensitivity.delta = sens.at("delta").get<double>();
        out.sensitivity.baseline_order = sens.at("baseline_order").get<std::vector<std::string>>();
        out.sensitivity.stability = sens.at("stability").get<double>();
        if (!sens.at("min_rank1_flip").is_null())
            out.sensitivity.min_rank1_flip = sens["min_rank1_flip"].get<double>();
        for (const json& p : sens.at("perturbations")) {
            PerturbationOutcome outcome;
            outcome.package_id = p.at("package").get<std::string>();
            outcome.quality_id = p.at("quality").get<std::string>();
            outcome.delta = p.at("delta").get<double>();
            outcome.order_changed = p.at("order_changed").get<bool>();
            outcome.rank1_changed = p.at("rank1_changed").get<bool>();
            outcome.order = p.at("order").get<std::vector<std::string>>();
            out.sensitivity.perturbations.push_back(std::move(outcome));
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::validation, fmt::format("malformed ranking document: {}", e.what()));
    }
    return out;
}

namespace {

/// Bounded parallel map over package ids; failures are collected, never
/// thrown across threads.
void for_each_package(const std::vector<std::string>& ids, std::size_t parallelism,
                      StageOutcome& outcome,
                      const std::function<std::string(const std::string&)>& fn) {
    if (parallelism < 1) parallelism = 1;
    parallelism = std::min(parallelism, ids.size() > 0 ? ids.size() : std::size_t{1});

    std::mutex mutex;
    std::atomic<std::size_t> next{0};
    std::vector<std::pair<std::size_t, std::string>> lines;
    std::vector<std::pair<std::size_t, StageFailure>> failures;

    auto worker = [&] {
        while (true) {
            std::size_t index = next.fetch_add(1);
            if (index >= ids.size()) return;
            try {
                std::string line = fn(ids[index]);
                std::lock_guard lock(mutex);
                lines.emplace_back(index, std::move(line));
            } catch (const Error& e) {
                std::lock_guard lock(mutex);
                failures.emplace_back(index, StageFailure{ids[index], e.what(), e.kind()});
            } catch (const std::exception& e) {
                std::lock_guard lock(mutex);
                failures.emplace_back(index,
                                      StageFailure{ids[index], e.what(), ErrorKind::computation});
            }
        }
    };

    if (parallelism == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (std::size_t i = 0; i < parallelism; ++i) threads.emplace_back(worker);
        for (std::thread& t : threads) t.join();
    }

    std::sort(lines.begin(), lines.end());
    std::sort(failures.begin(), failures.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [index, line] : lines) outcome.lines.push_back(std::move(line));
    for (auto& [index, failure] : failures) outcome.failures.push_back(std::move(failure));
}

}  // namespace

StageOutcome run_validate(const Workspace& ws, const std::optional<std::string>& only) {
    StageOutcome outcome;
    const QuestionCatalog& catalog = builtin_catalog();
    for (const std::string& id : ws.stage_packages(only)) {
        fs::path path = ws.answers_path(id);
        try {
            if (!fs::exists(path))
                throw Error(ErrorKind::io, fmt::format("no answer file at '{}'", path.string()));
            AnswerSet answers = parse_answers(read_text_file(path), catalog);
            if (!answers.package_id.empty() && answers.package_id != id)
                throw Error(ErrorKind::validation,
                            fmt::format("answer file declares package '{}' but lives under '{}'",
                                        answers.package_id, id));
            CompletenessReport report = completeness(answers, catalog);
            outcome.lines.push_back(fmt::format("{}: {} of {} questions answered", id,
                                                report.answered, report.total));
        } catch (const ParseError& e) {
            std::string detail;
            for (const ParseIssue& issue : e.issues())
                detail += fmt::format("\n  {}: {}", path.string(), issue.to_string());
            outcome.failures.push_back({id, fmt::format("invalid answers{}", detail),
                                        ErrorKind::validation});
        } catch (const Error& e) {
            outcome.failures.push_back({id, e.what(), e.kind()});
        }
    }
    return outcome;
}

StageOutcome run_mine(const Workspace& ws, const std::optional<std::string>& only,
                      std::size_t parallelism) {
    StageOutcome outcome;
    for_each_package(ws.stage_packages(only), parallelism, outcome, [&](const std::string& id) {
        PackageMetrics metrics;
        metrics.as_of = ws.config.as_of;
        metrics.history = analyze_history(ws.repo_path(id), ws.config.as_of);
        metrics.tree = aggregate_tree(ws.repo_path(id), ws.config.ignore);
        metrics.status =
            compute_status(metrics.history.last_commit_date, std::nullopt, ws.config.as_of);
        metrics.comments_pct = pct_comments(metrics.tree.totals);
        write_text_file(ws.metrics_path(id), serialize_metrics(metrics));
        return fmt::format("{}: {} commits, {} text files", id, metrics.history.total_commits,
                           metrics.tree.text_files);
    });
    return outcome;
}

StageOutcome run_forge(const Workspace& ws, const std::optional<std::string>& only,
                       HttpClient& client, const std::optional<std::string>& token,
                       std::size_t parallelism) {
    StageOutcome outcome;
    for_each_package(ws.stage_packages(only), parallelism, outcome, [&](const std::string& id) {
        const PackageRecord* record = ws.ledger.find(id);
        if (record == nullptr || !record->url)
            throw Error(ErrorKind::validation,
                        fmt::format("package '{}' has no repository URL in the ledger", id));
        ForgeMetrics metrics = fetch_forge_metrics(*record->url, token, client);
        write_text_file(ws.snapshot_path(id), serialize_forge_snapshot(metrics));
        return fmt::format("{}: stars {}, forks {}", id, metrics.stars, metrics.forks);
    });
    return outcome;
}

StageOutcome run_score(const Workspace& ws, const std::optional<std::string>& only,
                       const Rubric& rubric) {
    StageOutcome outcome;
    const QuestionCatalog& catalog = builtin_catalog();
    for (const std::string& id : ws.stage_packages(only)) {
        try {
            AnswerSet answers = parse_answers(read_text_file(ws.answers_path(id)), catalog);
            QualityScores scores = score_all(answers, rubric);
            write_text_file(ws.scores_path(id), serialize_scores(id, scores));
            std::string line = fmt::format("{}:", id);
            for (const std::string& quality : quality_ids())
                line += fmt::format(" {}={:g}", quality.substr(0, 7),
                                    scores.by_quality.at(quality).score);
            outcome.lines.push_back(std::move(line));
        } catch (const Error& e) {
            outcome.failures.push_back({id, e.what(), e.kind()});
        }
    }
    return outcome;
}

void run_rank(const Workspace& ws) {
    std::vector<std::string> selected = ws.ledger.selected_ids();
    if (selected.size() < 2)
        throw Error(ErrorKind::validation, "ranking needs at least two selected packages");

    std::vector<std::string> missing;
    for (const std::string& id : selected)
        if (!fs::exists(ws.scores_path(id))) missing.push_back(id);
    if (!missing.empty())
        throw Error(ErrorKind::validation,
                    fmt::format("cannot rank: missing scores for {}", fmt::join(missing, ", ")));

    ScoreTable table;
    table.package_ids = selected;
    table.quality_ids = quality_ids();
    table.scores.assign(table.quality_ids.size(), std::vector<double>(selected.size(), 0.0));
    for (std::size_t p = 0; p < selected.size(); ++p) {
        QualityScores scores = load_scores(read_text_file(ws.scores_path(selected[p])));
        for (std::size_t q = 0; q < table.quality_ids.size(); ++q) {
            auto it = scores.by_quality.find(table.quality_ids[q]);
            if (it == scores.by_quality.end())
                throw Error(ErrorKind::validation,
                            fmt::format("scores for '{}' lack quality '{}'", selected[p],
                                        table.quality_ids[q]));
            table.scores[q][p] = it->second.score;
        }
    }

    std::vector<double> weights;
    if (ws.config.criteria_weights) {
        if (ws.config.criteria_weights->size() != table.quality_ids.size())
            throw Error(ErrorKind::validation,
                        fmt::format("criteria_weights must list {} values",
                                    table.quality_ids.size()));
        double sum = 0.0;
        for (double w : *ws.config.criteria_weights) sum += w;
        if (!(sum > 0.0))
            throw Error(ErrorKind::validation, "criteria_weights must not sum to zero");
        for (double w : *ws.config.criteria_weights) weights.push_back(w / sum);
    } else {
        weights = equal_criteria_weights(table.quality_ids.size());
    }

    RankingDocument doc;
    doc.ranking = rank_packages(table, weights, ws.config.ahp_mode);
    doc.sensitivity = sensitivity(table, weights, ws.config.sensitivity_delta, ws.config.ahp_mode);
    write_text_file(ws.ranking_path(), serialize_ranking(doc));
}

AssessmentBundle assemble_bundle(const Workspace& ws) {
    AssessmentBundle bundle;
    bundle.ledger = ws.ledger;

    std::vector<std::string> incomplete;
    for (const std::string& id : ws.ledger.selected_ids()) {
        PackageData data;
        bool complete = true;
        const QuestionCatalog& catalog = builtin_catalog();
        try {
            data.answers = parse_answers(read_text_file(ws.answers_path(id)), catalog);
            PackageMetrics metrics = load_metrics(read_text_file(ws.metrics_path(id)));
            data.history = metrics.history;
            data.tree = metrics.tree;
            data.derived.status = metrics.status;
            data.derived.comments_pct = metrics.comments_pct;
            data.derived.as_of = metrics.as_of;
            data.forge = load_forge_snapshot(read_text_file(ws.snapshot_path(id)));
            data.derived.issues_closed_pct =
                pct_issues_closed(data.forge.open_issues, data.forge.closed_issues);
            data.scores = load_scores(read_text_file(ws.scores_path(id)));
        } catch (const Error&) {
            complete = false;
        }
        if (complete)
            bundle.packages.emplace(id, std::move(data));
        else
            incomplete.push_back(id);
    }
    if (!incomplete.empty())
        throw Error(ErrorKind::validation,
                    fmt::format("incomplete stage outputs for: {}", fmt::join(incomplete, ", ")));

    if (!fs::exists(ws.ranking_path()))
        throw Error(ErrorKind::validation, "no ranking.json; run the rank stage first");
    RankingDocument ranking = load_ranking(read_text_file(ws.ranking_path()));
    bundle.ranking = std::move(ranking.ranking);
    bundle.sensitivity = std::move(ranking.sensitivity);
    return bundle;
}

StageOutcome run_report(const Workspace& ws, const std::vector<ReportFormat>& formats) {
    StageOutcome outcome;
    AssessmentBundle bundle = assemble_bundle(ws);
    ResearchQuestionAggregates aggregates = aggregate_research_questions(bundle);
    for (ReportFormat format : formats) {
        std::string content = format == ReportFormat::markdown
                                  ? render_markdown(bundle, aggregates)
                                  : render_csv(bundle);
        write_text_file(ws.report_path(format), content);
        outcome.lines.push_back(fmt::format("wrote {}", ws.report_path(format).string()));
    }
    return outcome;
}

}  // namespace sotp
