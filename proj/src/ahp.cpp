#include "sotp/ahp.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sotp/error.hpp"

namespace sotp {

ReciprocalMatrix::ReciprocalMatrix(int n) : n_(n) {
    if (n < 1) throw Error(ErrorKind::validation, "matrix dimension must be positive");
    entries_.assign(static_cast<std::size_t>(n) * n, 1.0);
}

ReciprocalMatrix ReciprocalMatrix::from_entries(int n, std::vector<double> entries) {
    if (entries.size() != static_cast<std::size_t>(n) * n)
        throw Error(ErrorKind::validation, "matrix entry count does not match dimension");
    ReciprocalMatrix m(n);
    m.entries_ = std::move(entries);
    m.check_invariants();
    return m;
}

void ReciprocalMatrix::set(int i, int j, double value) {
    if (value <= 0.0)
        throw Error(ErrorKind::validation, "pairwise judgments must be positive");
    entries_[static_cast<std::size_t>(i) * n_ + j] = value;
    entries_[static_cast<std::size_t>(j) * n_ + i] = 1.0 / value;
    if (i == j) entries_[static_cast<std::size_t>(i) * n_ + j] = 1.0;
}

void ReciprocalMatrix::check_invariants() const {
    for (int i = 0; i < n_; ++i) {
        if (at(i, i) != 1.0)
            throw Error(ErrorKind::validation,
                        fmt::format("diagonal entry ({0},{0}) must be 1", i));
        for (int j = 0; j < n_; ++j) {
            double v = at(i, j);
            if (!(v > 0.0) || !std::isfinite(v))
                throw Error(ErrorKind::validation,
                            fmt::format("entry ({},{}) must be positive and finite", i, j));
            double product = v * at(j, i);
            if (std::abs(product - 1.0) > 1e-12 * std::max(1.0, std::abs(product)))
                throw Error(ErrorKind::validation,
                            fmt::format("entries ({0},{1}) and ({1},{0}) are not reciprocal", i,
                                        j));
        }
    }
}

const char* ahp_mode_name(AhpMode mode) {
    return mode == AhpMode::ratio ? "ratio" : "saaty-diff";
}

AhpMode ahp_mode_from_name(const std::string& name) {
    if (name == "ratio") return AhpMode::ratio;
    if (name == "saaty-diff") return AhpMode::saaty_diff;
    throw Error(ErrorKind::validation,
                fmt::format("unknown AHP mode '{}': expected ratio or saaty-diff", name));
}

ReciprocalMatrix matrix_from_scores(std::span<const double> scores, AhpMode mode) {
    int n = static_cast<int>(scores.size());
    if (n < 2)
        throw Error(ErrorKind::validation, "pairwise comparison needs at least two packages");
    for (double s : scores)
        if (!(s >= 1.0 && s <= 10.0))
            throw Error(ErrorKind::validation,
                        fmt::format("score {} is outside [1, 10]", s));

    ReciprocalMatrix m(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double value;
            if (mode == AhpMode::ratio) {
                value = scores[i] / scores[j];
            } else {
                double diff = std::min(9.0, 1.0 + std::abs(scores[i] - scores[j]));
                value = scores[i] >= scores[j] ? diff : 1.0 / diff;
            }
            m.set(i, j, value);
        }
    }
    return m;
}

PriorityResult priority_vector(const ReciprocalMatrix& matrix) {
    matrix.check_invariants();
    const int n = matrix.size();
    PriorityResult result;
    result.priorities.assign(n, 1.0 / n);

    constexpr double kTolerance = 1e-10;
    constexpr int kMaxIterations = 10000;

    std::vector<double> product(n, 0.0);
    result.converged = false;
    for (int iter = 1; iter <= kMaxIterations; ++iter) {
        result.iterations = iter;
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            double row = 0.0;
            for (int j = 0; j < n; ++j) row += matrix.at(i, j) * result.priorities[j];
            product[i] = row;
            sum += row;
        }
        double delta = 0.0;
        for (int i = 0; i < n; ++i) {
            double next = product[i] / sum;
            delta = std::max(delta, std::abs(next - result.priorities[i]));
            result.priorities[i] = next;
        }
        if (delta < kTolerance) {
            result.converged = true;
            break;
        }
    }

    // Rayleigh-style estimate at the final iterate: mean of (Av)_i / v_i.
    double lambda = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += matrix.at(i, j) * result.priorities[j];
        lambda += row / result.priorities[i];
    }
    result.lambda_max = lambda / n;
    result.consistency_index = n >= 2 ? (result.lambda_max - n) / (n - 1) : 0.0;
    double ri = random_index(n);
    result.consistency_ratio = ri > 0.0 ? result.consistency_index / ri : 0.0;
    return result;
}

double random_index(int n) {
    // Saaty's random consistency indices; constant beyond n = 10.
    static const double table[] = {0.0, 0.0, 0.0, 0.58, 0.90, 1.12, 1.24, 1.32, 1.41, 1.45, 1.49};
    if (n <= 0) return 0.0;
    if (n <= 10) return table[n];
    return 1.49;
}

namespace {

std::vector<RankedPackage> order_by_weight(const std::vector<std::string>& package_ids,
                                           const std::vector<double>& weights,
                                           std::vector<std::vector<std::string>>* tie_groups) {
    constexpr double kTieEps = 1e-9;
    std::vector<std::size_t> index(package_ids.size());
    std::iota(index.begin(), index.end(), 0);
    std::sort(index.begin(), index.end(), [&](std::size_t a, std::size_t b) {
        if (std::abs(weights[a] - weights[b]) > kTieEps) return weights[a] > weights[b];
        return package_ids[a] < package_ids[b];
    });

    std::vector<RankedPackage> order;
    order.reserve(index.size());
    int rank = 0;
    for (std::size_t k = 0; k < index.size(); ++k) {
        bool tied_with_previous =
            k > 0 && std::abs(weights[index[k]] - weights[index[k - 1]]) <= kTieEps;
        if (!tied_with_previous) rank = static_cast<int>(k) + 1;
        order.push_back({package_ids[index[k]], weights[index[k]], rank});
    }
    if (tie_groups != nullptr) {
        tie_groups->clear();
        std::size_t k = 0;
        while (k < order.size()) {
            std::size_t end = k + 1;
            while (end < order.size() && order[end].rank == order[k].rank) ++end;
            if (end - k > 1) {
                std::vector<std::string> group;
                for (std::size_t i = k; i < end; ++i) group.push_back(order[i].package_id);
                tie_groups->push_back(std::move(group));
            }
            k = end;
        }
    }
    return order;
}

std::vector<std::string> order_ids(const std::vector<RankedPackage>& order) {
    std::vector<std::string> ids;
    ids.reserve(order.size());
    for (const RankedPackage& r : order) ids.push_back(r.package_id);
    return ids;
}

}  // namespace

std::pair<std::vector<double>, std::vector<RankedPackage>> aggregate_priorities(
    const std::map<std::string, PriorityResult>& per_quality,
    const std::vector<std::string>& quality_ids, std::span<const double> weights,
    const std::vector<std::string>& package_ids) {
    if (weights.size() != quality_ids.size())
        throw Error(ErrorKind::validation, "one criteria weight per quality is required");
    double weight_sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (std::abs(weight_sum - 1.0) > 1e-9)
        throw Error(ErrorKind::validation,
                    fmt::format("criteria weights must sum to 1 (got {})", weight_sum));

    std::vector<double> aggregate(package_ids.size(), 0.0);
    for (std::size_t q = 0; q < quality_ids.size(); ++q) {
        auto it = per_quality.find(quality_ids[q]);
        if (it == per_quality.end())
            throw Error(ErrorKind::validation,
                        fmt::format("no priority vector for quality '{}'", quality_ids[q]));
        if (it->second.priorities.size() != package_ids.size())
            throw Error(ErrorKind::validation,
                        fmt::format("priority vector for '{}' has dimension {} but {} packages",
                                    quality_ids[q], it->second.priorities.size(),
                                    package_ids.size()));
        for (std::size_t p = 0; p < package_ids.size(); ++p)
            aggregate[p] += weights[q] * it->second.priorities[p];
    }
    auto order = order_by_weight(package_ids, aggregate, nullptr);
    return {std::move(aggregate), std::move(order)};
}

std::vector<double> criteria_weights_from_matrix(const ReciprocalMatrix& matrix,
                                                 std::vector<std::string>* warnings) {
    PriorityResult result = priority_vector(matrix);
    if (warnings != nullptr && result.consistency_ratio > kConsistencyThreshold)
        warnings->push_back(fmt::format(
            "criteria comparison matrix is inconsistent (CR = {:.3f} > {:.1f})",
            result.consistency_ratio, kConsistencyThreshold));
    return result.priorities;
}

std::vector<double> equal_criteria_weights(std::size_t count) {
    return std::vector<double>(count, 1.0 / static_cast<double>(count));
}

AhpRanking rank_packages(const ScoreTable& table, std::span<const double> criteria_weights,
                         AhpMode mode) {
    if (table.scores.size() != table.quality_ids.size())
        throw Error(ErrorKind::validation, "one score row per quality is required");
    for (const auto& row : table.scores)
        if (row.size() != table.package_ids.size())
            throw Error(ErrorKind::validation, "score rows must cover every package");

    AhpRanking ranking;
    ranking.mode = mode;
    ranking.package_ids = table.package_ids;
    ranking.quality_ids = table.quality_ids;
    ranking.criteria_weights.assign(criteria_weights.begin(), criteria_weights.end());

    for (std::size_t q = 0; q < table.quality_ids.size(); ++q) {
        ReciprocalMatrix matrix = matrix_from_scores(table.scores[q], mode);
        PriorityResult result = priority_vector(matrix);
        if (result.consistency_ratio > kConsistencyThreshold)
            ranking.warnings.push_back(
                fmt::format("quality '{}' has CR = {:.3f} > {:.1f}; judgments are inconsistent",
                            table.quality_ids[q], result.consistency_ratio,
                            kConsistencyThreshold));
        if (!result.converged)
            ranking.warnings.push_back(fmt::format(
                "power iteration did not converge for quality '{}'", table.quality_ids[q]));
        ranking.per_quality[table.quality_ids[q]] = std::move(result);
    }

    auto [aggregate, order] = aggregate_priorities(ranking.per_quality, ranking.quality_ids,
                                                   criteria_weights, ranking.package_ids);
    ranking.aggregate = std::move(aggregate);
    ranking.order = order_by_weight(ranking.package_ids, ranking.aggregate, &ranking.ties);
    return ranking;
}

SensitivityReport sensitivity(const ScoreTable& table, std::span<const double> criteria_weights,
                              double delta, AhpMode mode) {
    if (!(delta > 0.0))
        throw Error(ErrorKind::validation, "sensitivity delta must be positive");

    SensitivityReport report;
    report.delta = delta;
    AhpRanking baseline = rank_packages(table, criteria_weights, mode);
    report.baseline_order = order_ids(baseline.order);

    std::size_t preserved = 0;
    for (std::size_t q = 0; q < table.quality_ids.size(); ++q) {
        for (std::size_t p = 0; p < table.package_ids.size(); ++p) {
            for (double signed_delta : {delta, -delta}) {
                ScoreTable perturbed = table;
                double& cell = perturbed.scores[q][p];
                cell = std::clamp(cell + signed_delta, 1.0, 10.0);
                AhpRanking ranking = rank_packages(perturbed, criteria_weights, mode);

                PerturbationOutcome outcome;
                outcome.package_id = table.package_ids[p];
                outcome.quality_id = table.quality_ids[q];
                outcome.delta = signed_delta;
                outcome.order = order_ids(ranking.order);
                outcome.order_changed = outcome.order != report.baseline_order;
                outcome.rank1_changed = outcome.order.front() != report.baseline_order.front();
                if (!outcome.order_changed) ++preserved;
                if (outcome.rank1_changed && !report.min_rank1_flip)
                    report.min_rank1_flip = delta;
                report.perturbations.push_back(std::move(outcome));
            }
        }
    }
    report.stability = report.perturbations.empty()
                           ? 1.0
                           : static_cast<double>(preserved) /
                                 static_cast<double>(report.perturbations.size());
    return report;
}

}  // namespace sotp
