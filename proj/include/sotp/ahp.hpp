#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sotp {

/// Positive pairwise-comparison matrix with a[i][i] = 1 and
/// a[j][i] = 1/a[i][j].
class ReciprocalMatrix {
public:
    explicit ReciprocalMatrix(int n);
    static ReciprocalMatrix from_entries(int n, std::vector<double> entries);

    int size() const { return n_; }
    double at(int i, int j) const { return entries_[static_cast<std::size_t>(i) * n_ + j]; }
    /// Sets a[i][j] and keeps the reciprocal mirror in sync.
    void set(int i, int j, double value);

    /// Diagonal ones, reciprocity within 1e-12 relative, positivity.
    void check_invariants() const;

private:
    int n_;
    std::vector<double> entries_;
};

enum class AhpMode {
    ratio,       // a[i][j] = s_i / s_j
    saaty_diff,  // a[i][j] = min(9, 1 + |s_i - s_j|), reciprocal below
};

const char* ahp_mode_name(AhpMode mode);
AhpMode ahp_mode_from_name(const std::string& name);

/// Builds the pairwise matrix for one quality from per-package scores in
/// [1, 10]; requires at least two packages.
ReciprocalMatrix matrix_from_scores(std::span<const double> scores, AhpMode mode);

struct PriorityResult {
    std::vector<double> priorities;  // nonnegative, sums to 1
    double lambda_max = 0.0;
    double consistency_index = 0.0;
    double consistency_ratio = 0.0;  // 0 for n <= 2
    bool converged = true;
    int iterations = 0;
};

/// Principal eigenvector by power iteration (tolerance 1e-10 on the max
/// component delta, capped at 10000 iterations; the cap sets
/// converged=false and keeps the last iterate).
PriorityResult priority_vector(const ReciprocalMatrix& matrix);

/// Saaty's random consistency index.
double random_index(int n);

/// CR above this is flagged as inconsistent (never fatal).
inline constexpr double kConsistencyThreshold = 0.1;

struct RankedPackage {
    std::string package_id;
    double weight = 0.0;
    int rank = 0;  // 1-based; tied packages share a rank
};

struct AhpRanking {
    AhpMode mode = AhpMode::ratio;
    std::vector<std::string> package_ids;   // input order
    std::vector<std::string> quality_ids;
    std::map<std::string, PriorityResult> per_quality;
    std::vector<double> criteria_weights;   // aligned with quality_ids
    std::vector<double> aggregate;          // aligned with package_ids
    std::vector<RankedPackage> order;       // descending weight, ties by id
    std::vector<std::vector<std::string>> ties;  // groups larger than one
    std::vector<std::string> warnings;      // CR > 0.1 annotations
};

/// Weighted sum of per-quality priorities; `weights` must sum to 1 and the
/// priority vectors must share one dimension.
std::pair<std::vector<double>, std::vector<RankedPackage>> aggregate_priorities(
    const std::map<std::string, PriorityResult>& per_quality,
    const std::vector<std::string>& quality_ids, std::span<const double> weights,
    const std::vector<std::string>& package_ids);

/// Criteria-level priority vector from a pairwise matrix over the nine
/// qualities; CR > 0.1 only warns.
std::vector<double> criteria_weights_from_matrix(const ReciprocalMatrix& matrix,
                                                 std::vector<std::string>* warnings = nullptr);

std::vector<double> equal_criteria_weights(std::size_t count);

/// Scores for a set of packages: scores[q][p] pairs quality_ids[q] with
/// package_ids[p].
struct ScoreTable {
    std::vector<std::string> package_ids;
    std::vector<std::string> quality_ids;
    std::vector<std::vector<double>> scores;
};

AhpRanking rank_packages(const ScoreTable& table, std::span<const double> criteria_weights,
                         AhpMode mode);

struct PerturbationOutcome {
    std::string package_id;
    std::string quality_id;
    double delta = 0.0;  // signed
    bool order_changed = false;
    bool rank1_changed = false;
    std::vector<std::string> order;  // package ids after the perturbation
};

struct SensitivityReport {
    double delta = 0.0;
    std::vector<std::string> baseline_order;
    std::vector<PerturbationOutcome> perturbations;  // 2 per (package, quality)
    double stability = 1.0;  // fraction preserving the full order
    std::optional<double> min_rank1_flip;  // smallest magnitude that flipped rank 1
};

/// Perturbs every (package, quality) score by +/-delta (clamped to [1,10]),
/// re-ranks, and records every order change.
SensitivityReport sensitivity(const ScoreTable& table, std::span<const double> criteria_weights,
                              double delta, AhpMode mode);

}  // namespace sotp
