#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sotp/ahp.hpp"
#include "sotp/answers.hpp"
#include "sotp/error.hpp"
#include "sotp/forge.hpp"
#include "sotp/ledger.hpp"
#include "sotp/report.hpp"
#include "sotp/scoring.hpp"

namespace sotp {

/// Workspace configuration, `key = value` lines at the workspace root.
struct Config {
    Date as_of;
    std::size_t target_size = kDefaultTargetSize;
    AhpMode ahp_mode = AhpMode::ratio;
    double sensitivity_delta = 1.0;
    /// Raw per-quality weights in quality_ids() order; normalized on use.
    /// Absent means equal weights.
    std::optional<std::vector<double>> criteria_weights;
    std::vector<std::string> ignore;  // directory names skipped by the tree walk
};

Config parse_config(std::string_view text);

/// On-disk layout of one assessment:
///
///   <root>/config
///   <root>/ledger.json
///   <root>/packages/<id>/answers.txt
///   <root>/packages/<id>/repo/          (local clone; path overridable)
///   <root>/packages/<id>/metrics.json   (mine)
///   <root>/packages/<id>/forge.snapshot (forge)
///   <root>/packages/<id>/scores.json    (score)
///   <root>/ranking.json                 (rank)
///   <root>/report.md, report.csv        (report)
class Workspace {
public:
    static Workspace open(const std::filesystem::path& root);

    const std::filesystem::path& root() const { return root_; }

    Config config;
    PackageLedger ledger;

    std::filesystem::path package_dir(const std::string& id) const;
    std::filesystem::path answers_path(const std::string& id) const;
    std::filesystem::path metrics_path(const std::string& id) const;
    std::filesystem::path snapshot_path(const std::string& id) const;
    std::filesystem::path scores_path(const std::string& id) const;
    std::filesystem::path repo_path(const std::string& id) const;
    std::filesystem::path ranking_path() const;
    std::filesystem::path report_path(ReportFormat format) const;

    /// Selected ids, restricted to `only` when given (must be selected).
    std::vector<std::string> stage_packages(const std::optional<std::string>& only) const;

private:
    std::filesystem::path root_;
};

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

/// Per-package metrics document (raw history + tree + derived values).
struct PackageMetrics {
    Date as_of;
    GitHistoryMetrics history;
    CodeMetrics tree;
    PackageStatus status = PackageStatus::dead;
    std::optional<double> comments_pct;
};

std::string serialize_metrics(const PackageMetrics& metrics);
PackageMetrics load_metrics(std::string_view text);

std::string serialize_scores(const std::string& package_id, const QualityScores& scores);
QualityScores load_scores(std::string_view text, std::string* package_id = nullptr);

struct RankingDocument {
    AhpRanking ranking;
    SensitivityReport sensitivity;
};

std::string serialize_ranking(const RankingDocument& doc);
RankingDocument load_ranking(std::string_view text);

struct StageFailure {
    std::string package_id;
    std::string message;
    ErrorKind kind = ErrorKind::computation;
};

struct StageOutcome {
    std::vector<std::string> lines;  // human-readable progress, one per package
    std::vector<StageFailure> failures;

    bool ok() const { return failures.empty(); }
};

StageOutcome run_validate(const Workspace& ws, const std::optional<std::string>& only);
StageOutcome run_mine(const Workspace& ws, const std::optional<std::string>& only,
                      std::size_t parallelism);
StageOutcome run_forge(const Workspace& ws, const std::optional<std::string>& only,
                       HttpClient& client, const std::optional<std::string>& token,
                       std::size_t parallelism);
StageOutcome run_score(const Workspace& ws, const std::optional<std::string>& only,
                       const Rubric& rubric);
/// Builds ranking.json; refuses (listing ids) when scores are missing.
void run_rank(const Workspace& ws);
/// Renders report.md / report.csv from the persisted stage outputs.
StageOutcome run_report(const Workspace& ws, const std::vector<ReportFormat>& formats);

/// Loads all stage outputs back into a bundle (used by `report`).
AssessmentBundle assemble_bundle(const Workspace& ws);

}  // namespace sotp
