#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sotp/ahp.hpp"
#include "sotp/answers.hpp"
#include "sotp/derived.hpp"
#include "sotp/forge.hpp"
#include "sotp/ledger.hpp"
#include "sotp/repo_metrics.hpp"
#include "sotp/scoring.hpp"

namespace sotp {

/// Everything collected for one selected package.
struct PackageData {
    AnswerSet answers;
    GitHistoryMetrics history;
    CodeMetrics tree;
    ForgeMetrics forge;
    DerivedMetrics derived;
    QualityScores scores;
};

struct AssessmentBundle {
    PackageLedger ledger;
    std::map<std::string, PackageData> packages;  // keyed by package id
    AhpRanking ranking;
    SensitivityReport sensitivity;

    /// Every selected package needs a complete tuple; throws with the
    /// offending ids otherwise.
    void check_complete() const;
};

using FrequencyTable = std::map<std::string, std::size_t>;

struct ResearchQuestionAggregates {
    FrequencyTable artifact_types;      // RQ1
    FrequencyTable issue_trackers;      // RQ2
    FrequencyTable version_control;     // RQ2
    FrequencyTable ci_evidence;         // RQ2
    FrequencyTable correctness_tools;   // RQ2
    FrequencyTable development_models;  // RQ3
    FrequencyTable process_defined;     // RQ3
    std::vector<std::string> methodology_order;  // RQ6: AHP aggregate order
    std::vector<std::string> stars_order;        // RQ6: descending stars
    double kendall_tau = 0.0;
};

ResearchQuestionAggregates aggregate_research_questions(const AssessmentBundle& bundle);

/// Kendall tau-a between two orderings of the same id set.
double kendall_tau(const std::vector<std::string>& a, const std::vector<std::string>& b);

enum class ReportFormat { markdown, csv };

/// Deterministic renderers: identical bundles yield identical bytes.
std::string render_markdown(const AssessmentBundle& bundle,
                            const ResearchQuestionAggregates& aggregates);
std::string render_csv(const AssessmentBundle& bundle);

struct InterviewQuestion {
    int number = 0;  // 1-based across the whole guide
    std::string section;
    std::string text;
    std::vector<std::string> tags;  // research-question tags, e.g. "5b (traceability)"
};

const std::vector<InterviewQuestion>& interview_questions();

/// Plain-text interview packet: 8 background + 12 software questions, the
/// latter annotated with their research-question tags.
std::string emit_interview_guide();

}  // namespace sotp
